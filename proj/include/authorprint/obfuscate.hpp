#pragma once

// ProGuard-style renaming of an app bundle.

#include <cstdint>
#include <map>
#include <string>

#include "authorprint/bundle.hpp"

namespace authorprint {

struct RenameMap {
  std::map<std::string, std::string> identifiers;  // simple name -> short name
  std::map<std::string, std::string> classes;      // qualified name -> qualified name
};

// Class simple names, method names and field names get short random names,
// consistently across the app; package names, framework-overriding methods,
// api_calls, instructions and uses_features are untouched. Methods with no
// api calls that override nothing are dropped, standing in for shrinking.
AppBundle obfuscate_bundle(const AppBundle& bundle, std::uint64_t seed, RenameMap* renames = nullptr);

}  // namespace authorprint
