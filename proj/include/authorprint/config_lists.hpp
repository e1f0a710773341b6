#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace authorprint {

// Reads a plain-text list: one entry per line, '#' starts a comment, blank
// lines ignored, surrounding whitespace trimmed.
std::vector<std::string> parse_list(std::string_view text);
std::vector<std::string> read_list_file(const std::string& path);

// Package prefixes treated as platform code and dropped from the relation
// graph. Entries may carry a trailing '.'; matching is segment-wise.
std::vector<std::string> default_framework_prefixes();

// Method names excluded from identifier features in addition to methods the
// extractor flags as framework overrides.
std::vector<std::string> default_framework_overrides();

// Normalizes a prefix entry ("android." -> "android").
std::string normalize_prefix(std::string_view prefix);

}  // namespace authorprint
