#include "mcc/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mcc {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError(path.string() + ": cannot write file");
}

namespace {

template <class F>
auto located(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError(path.string() + ":" + e.what());
  } catch (const ModelError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace

Contract load_contract_file(const fs::path& path) {
  std::string text = read_file(path);
  return located(path, [&] { return parse_contract(text); });
}

SoftwareModel load_contract_dir(const fs::path& dir, const fs::path& services) {
  if (!fs::is_directory(dir)) throw InputError(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".contract") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  SoftwareModel model;
  std::string repo = read_file(services);
  model.services = located(services, [&] { return parse_repository(repo); });
  for (const auto& f : files) {
    Contract c = load_contract_file(f);
    located(f, [&] {
      check_against_repository(c, model.services);
      if (model.contracts.count(c.component)) throw ModelError("duplicate component " + c.component);
      return 0;
    });
    model.contracts.emplace(c.component, std::move(c));
  }
  return model;
}

PlatformModel load_platform(const fs::path& path) {
  std::string text = read_file(path);
  return located(path, [&] { return parse_platform(text); });
}

Configuration load_configuration(const fs::path& path) {
  std::string text = read_file(path);
  return located(path, [&] { return parse_configuration(text); });
}

std::vector<UpdateRequest> parse_requests(const std::string& text, const fs::path& base) {
  std::vector<UpdateRequest> out;
  std::istringstream in(text);
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string verb, arg, extra;
    if (!(words >> verb)) continue;
    if (!(words >> arg) || (words >> extra))
      throw ParseError({lineno, 1}, "expected '<add|remove|update> <argument>'");
    UpdateRequest req;
    if (verb == "remove") {
      req.type = ChangeType::Remove;
      req.contract.component = arg;
    } else if (verb == "add" || verb == "update") {
      req.type = verb == "add" ? ChangeType::Add : ChangeType::Update;
      fs::path p = fs::path(arg).is_absolute() ? fs::path(arg) : base / arg;
      req.contract = load_contract_file(p);
    } else {
      throw ParseError({lineno, 1}, "unknown request '" + verb + "'");
    }
    out.push_back(std::move(req));
  }
  return out;
}

std::vector<UpdateRequest> load_requests(const fs::path& path) {
  std::string text = read_file(path);
  return located(path, [&] { return parse_requests(text, path.parent_path()); });
}

}  // namespace mcc
