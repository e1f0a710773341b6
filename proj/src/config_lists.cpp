#include "authorprint/config_lists.hpp"

#include <fstream>
#include <sstream>

#include "authorprint/errors.hpp"

namespace authorprint {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> parse_list(std::string_view text) {
  std::vector<std::string> out;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

std::vector<std::string> read_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open list file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_list(buf.str());
}

std::vector<std::string> default_framework_prefixes() {
  return {"android", "androidx", "java", "javax", "kotlin", "kotlinx"};
}

std::vector<std::string> default_framework_overrides() {
  return {"onCreate", "onPause",  "onResume", "onDestroy", "onStart",
          "onStop",   "toString", "equals",   "hashCode"};
}

std::string normalize_prefix(std::string_view prefix) {
  while (!prefix.empty() && prefix.back() == '.') prefix.remove_suffix(1);
  return std::string(prefix);
}

}  // namespace authorprint
