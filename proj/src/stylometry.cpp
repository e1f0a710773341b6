#include "authorprint/stylometry.hpp"

#include <algorithm>
#include <functional>

#include "authorprint/errors.hpp"
#include "authorprint/relation_graph.hpp"

namespace authorprint {

std::string_view to_string(FeatureCategory category) {
  switch (category) {
    case FeatureCategory::identifiers: return "identifiers";
    case FeatureCategory::api_calls: return "api_calls";
    case FeatureCategory::instructions: return "instructions";
    case FeatureCategory::component_names: return "component_names";
    case FeatureCategory::uses_features: return "uses_features";
    case FeatureCategory::library_names: return "library_names";
  }
  return "identifiers";
}

std::optional<FeatureCategory> parse_feature_category(std::string_view text) {
  for (auto c : kAllCategories) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::vector<std::string> identifier_tokens(std::string_view identifier) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= identifier.size(); ++i) {
    if (i == identifier.size() || identifier[i] == '.' || identifier[i] == '$') {
      if (i > start) out.emplace_back(identifier.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

namespace {

void append_dex_tokens(const ClassRecord& c, std::span<const std::string> overrides,
                       StyleProfile& profile) {
  auto& ids = profile[FeatureCategory::identifiers];
  for (auto& t : identifier_tokens(simple_class_name(c.name))) ids.push_back(std::move(t));
  for (const auto& f : c.fields) {
    for (auto& t : identifier_tokens(f)) ids.push_back(std::move(t));
  }
  for (const auto& m : c.methods) {
    const bool excluded = m.overrides_framework ||
                          std::find(overrides.begin(), overrides.end(), m.name) != overrides.end();
    if (!excluded) {
      for (auto& t : identifier_tokens(m.name)) ids.push_back(std::move(t));
    }
    auto& apis = profile[FeatureCategory::api_calls];
    apis.insert(apis.end(), m.api_calls.begin(), m.api_calls.end());
    auto& ins = profile[FeatureCategory::instructions];
    ins.insert(ins.end(), m.instructions.begin(), m.instructions.end());
  }
}

void append_app_tokens(const AppBundle& bundle, StyleProfile& profile) {
  for (const auto& comp : bundle.manifest.components) {
    profile[FeatureCategory::component_names].emplace_back(simple_class_name(comp.name));
  }
  profile[FeatureCategory::uses_features] = bundle.manifest.uses_features;
  // Only libraries the app actually contains.
  for (const auto& lib : bundle.libraries) {
    const bool present = std::any_of(bundle.packages.begin(), bundle.packages.end(),
                                     [&](const PackageName& p) { return p.has_prefix(lib); });
    if (present) profile[FeatureCategory::library_names].push_back(lib);
  }
}

StyleProfile collect(const AppBundle& bundle, std::span<const std::string> overrides,
                     const std::function<bool(const ClassRecord&)>& keep) {
  StyleProfile profile;
  bool any = false;
  for (const auto& c : bundle.classes) {
    if (!keep(c)) continue;
    any = true;
    append_dex_tokens(c, overrides, profile);
  }
  if (!any) {
    throw EmptyPrimaryModule("app '" + bundle.app_id + "' has no class in the analyzed module");
  }
  append_app_tokens(bundle, profile);
  return profile;
}

}  // namespace

StyleProfile extract_profile(const AppBundle& bundle, const AuthorshipPartition& partition,
                             std::span<const std::string> framework_overrides) {
  return collect(bundle, framework_overrides, [&](const ClassRecord& c) {
    return partition.in_primary(c.package.str());
  });
}

StyleProfile extract_whole_profile(const AppBundle& bundle,
                                   std::span<const std::string> framework_prefixes,
                                   std::span<const std::string> framework_overrides) {
  return collect(bundle, framework_overrides, [&](const ClassRecord& c) {
    return !is_framework_package(c.package, framework_prefixes);
  });
}

}  // namespace authorprint
