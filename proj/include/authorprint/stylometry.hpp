#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "authorprint/bundle.hpp"
#include "authorprint/decouple.hpp"

namespace authorprint {

enum class FeatureCategory {
  identifiers,
  api_calls,
  instructions,
  component_names,
  uses_features,
  library_names,
};

inline constexpr std::size_t kCategoryCount = 6;
inline constexpr std::array<FeatureCategory, kCategoryCount> kAllCategories = {
    FeatureCategory::identifiers,     FeatureCategory::api_calls,
    FeatureCategory::instructions,    FeatureCategory::component_names,
    FeatureCategory::uses_features,   FeatureCategory::library_names,
};

std::string_view to_string(FeatureCategory category);
std::optional<FeatureCategory> parse_feature_category(std::string_view text);

// Per-category token sequences of one app. Dex-level sequences (identifiers,
// api calls, instructions) keep class and method order as they appear in the
// bundle; manifest- and library-level sequences are app-wide.
struct StyleProfile {
  std::array<std::vector<std::string>, kCategoryCount> sequences;

  std::vector<std::string>& operator[](FeatureCategory c) {
    return sequences[static_cast<std::size_t>(c)];
  }
  const std::vector<std::string>& operator[](FeatureCategory c) const {
    return sequences[static_cast<std::size_t>(c)];
  }
  friend bool operator==(const StyleProfile&, const StyleProfile&) = default;
};

// Splits an identifier on '.' and '$', keeping camelCase words intact.
std::vector<std::string> identifier_tokens(std::string_view identifier);

// Features of the leading author's code: dex-level tokens come only from
// classes in the primary module. Methods flagged as framework overrides or
// named in `framework_overrides` contribute no identifier token. Throws
// EmptyPrimaryModule when the primary module holds no class.
StyleProfile extract_profile(const AppBundle& bundle, const AuthorshipPartition& partition,
                             std::span<const std::string> framework_overrides);

// Whole-app variant: dex-level tokens from every in-scope class.
StyleProfile extract_whole_profile(const AppBundle& bundle,
                                   std::span<const std::string> framework_prefixes,
                                   std::span<const std::string> framework_overrides);

}  // namespace authorprint
