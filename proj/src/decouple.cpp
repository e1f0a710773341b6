#include "authorprint/decouple.hpp"

#include <algorithm>
#include <map>

#include "authorprint/errors.hpp"
#include "authorprint/relation_graph.hpp"

namespace authorprint {

int AuthorshipPartition::module_count() const {
  return module_of.empty() ? 0 : *std::max_element(module_of.begin(), module_of.end()) + 1;
}

int AuthorshipPartition::module_of_package(std::string_view package) const {
  auto it = std::lower_bound(packages.begin(), packages.end(), package,
                             [](const PackageName& n, std::string_view p) { return n.str() < p; });
  if (it == packages.end() || it->str() != package) return -1;
  return module_of[static_cast<std::size_t>(it - packages.begin())];
}

bool AuthorshipPartition::in_primary(std::string_view package) const {
  return module_of_package(package) == primary_module;
}

int select_primary_module(const AuthorshipPartition& partition, const ManifestInfo& manifest) {
  if (!manifest.main_activity) throw NoMainActivity("manifest declares no main activity");
  const auto package = package_of_class(*manifest.main_activity);
  const int module = partition.module_of_package(package);
  if (module < 0) {
    throw NoMainActivity("main activity package '" + package + "' is not in scope");
  }
  return module;
}

namespace {

int largest_module_by_methods(const AuthorshipPartition& partition, const AppBundle& bundle) {
  std::vector<long long> methods(static_cast<std::size_t>(partition.module_count()), 0);
  for (const auto& c : bundle.classes) {
    const int m = partition.module_of_package(c.package.str());
    if (m >= 0) methods[m] += static_cast<long long>(c.methods.size());
  }
  return static_cast<int>(std::max_element(methods.begin(), methods.end()) - methods.begin());
}

}  // namespace

AuthorshipPartition decouple(const AppBundle& bundle, const DecoupleConfig& config) {
  const auto graph = build_graph(bundle, config.framework_prefixes);

  std::vector<std::string> libraries = bundle.libraries;
  libraries.insert(libraries.end(), config.libraries.begin(), config.libraries.end());

  AuthorshipPartition partition;
  partition.packages = graph.nodes();
  partition.aggregation = aggregate(graph, libraries, bundle.manifest);

  const DistanceMatrix closed = floyd_closure(direct_distances(graph));
  const AffinityMatrix affinity = compute_affinities(graph, closed, config.mode);
  const auto clusters = louvain_partition(affinity.sim, partition.aggregation.phi,
                                          LouvainOptions{config.louvain_tolerance});
  partition.module_of = clusters.community;
  partition.modularity = clusters.modularity;

  try {
    partition.primary_module = select_primary_module(partition, bundle.manifest);
  } catch (const NoMainActivity&) {
    partition.primary_module = largest_module_by_methods(partition, bundle);
    partition.primary_from_main_activity = false;
  }
  return partition;
}

}  // namespace authorprint
