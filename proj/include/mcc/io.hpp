#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcc/model.hpp"

namespace mcc {

/// Unreadable file, or a parse/model error located in a specific file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Parses one contract file; diagnostics are prefixed with the path.
Contract load_contract_file(const std::filesystem::path& path);

/// Every `*.contract` file of `dir` (sorted by file name) plus the service repository.
SoftwareModel load_contract_dir(const std::filesystem::path& dir, const std::filesystem::path& services);

PlatformModel load_platform(const std::filesystem::path& path);
Configuration load_configuration(const std::filesystem::path& path);

/// One request per line: `add <contract-file>`, `remove <component>`,
/// `update <contract-file>`; relative paths resolve against `base`.
std::vector<UpdateRequest> parse_requests(const std::string& text, const std::filesystem::path& base);
std::vector<UpdateRequest> load_requests(const std::filesystem::path& path);

}  // namespace mcc
