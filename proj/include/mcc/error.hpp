#pragma once

#include <stdexcept>
#include <string>

namespace mcc {

/// Line/column of a token in contract source (1-based).
///
/// Positions are diagnostic only and never take part in value equality, so
/// a re-parsed contract compares equal to the original regardless of layout.
struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
        pos_(pos) {}

  SourcePos position() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Names that do not resolve, duplicate components, bad update requests.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural problems found while unfolding or analysing a configuration.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcc
