#include "authorprint/relation_graph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "authorprint/config_lists.hpp"
#include "authorprint/errors.hpp"

namespace authorprint {

PackageRelationGraph::PackageRelationGraph(std::vector<PackageName> nodes,
                                           std::map<EdgeKey, long long> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), succ_(nodes_.size()), phi_(nodes_.size()) {
  std::iota(phi_.begin(), phi_.end(), 0);
  for (const auto& [key, count] : edges_) {
    auto& s = succ_[key.from];
    if (s.empty() || s.back() != key.to) s.push_back(key.to);
  }
  // Edges iterate in (from, to, kind) order, so each list is already sorted.
}

std::optional<std::size_t> PackageRelationGraph::index_of(std::string_view package) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), package,
                             [](const PackageName& n, std::string_view p) { return n.str() < p; });
  if (it == nodes_.end() || it->str() != package) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

EdgeWeights PackageRelationGraph::weights(std::size_t from, std::size_t to) const {
  EdgeWeights w;
  auto it = edges_.lower_bound(EdgeKey{from, to, RelationKind::call});
  for (; it != edges_.end() && it->first.from == from && it->first.to == to; ++it) {
    switch (it->first.kind) {
      case RelationKind::call: w.n_call += it->second; break;
      case RelationKind::inherit: w.n_inherit += it->second; break;
      case RelationKind::icc: w.n_icc += it->second; break;
    }
  }
  return w;
}

bool is_framework_package(const PackageName& package, std::span<const std::string> prefixes) {
  return std::any_of(prefixes.begin(), prefixes.end(), [&](const std::string& p) {
    return package.has_prefix(normalize_prefix(p));
  });
}

PackageRelationGraph build_graph(const AppBundle& bundle,
                                 std::span<const std::string> framework_prefixes) {
  std::vector<PackageName> nodes;
  for (const auto& p : bundle.packages) {
    if (!is_framework_package(p, framework_prefixes)) nodes.push_back(p);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (nodes.empty()) throw EmptyGraph("app '" + bundle.app_id + "' has no in-scope packages");

  auto index = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), name,
                               [](const PackageName& n, std::string_view p) { return n.str() < p; });
    if (it == nodes.end() || it->str() != name) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
  };

  std::map<EdgeKey, long long> edges;
  for (const auto& r : bundle.relations) {
    const auto u = index(r.from_pkg.str());
    const auto v = index(r.to_pkg.str());
    if (!u || !v || *u == *v) continue;
    edges[EdgeKey{*u, *v, r.kind}] += r.count;
  }

  std::unordered_map<std::string, std::string> class_package;
  for (const auto& c : bundle.classes) class_package.emplace(c.name, c.package.str());
  for (const auto& c : bundle.classes) {
    if (!c.superclass) continue;
    const auto u = index(c.package.str());
    auto it = class_package.find(*c.superclass);
    const auto v = index(it != class_package.end() ? it->second : package_of_class(*c.superclass));
    if (!u || !v || *u == *v) continue;
    edges[EdgeKey{*u, *v, RelationKind::inherit}] += 1;
  }

  return PackageRelationGraph(std::move(nodes), std::move(edges));
}

EdgeWeights edge_weights(const PackageRelationGraph& graph, const PackageName& from,
                         const PackageName& to) {
  const auto u = graph.index_of(from.str());
  if (!u) throw UnknownNode("package '" + from.str() + "' is not a graph node");
  const auto v = graph.index_of(to.str());
  if (!v) throw UnknownNode("package '" + to.str() + "' is not a graph node");
  return graph.weights(*u, *v);
}

}  // namespace authorprint
