#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "authorprint/bundle.hpp"

namespace authorprint {

// Per-kind relation counts for one ordered package pair.
struct EdgeWeights {
  long long n_call = 0;
  long long n_inherit = 0;
  long long n_icc = 0;

  long long total() const { return n_call + n_inherit + n_icc; }
  friend bool operator==(const EdgeWeights&, const EdgeWeights&) = default;
};

struct EdgeKey {
  std::size_t from;
  std::size_t to;
  RelationKind kind;

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

// Weighted directed multigraph over in-scope packages. Nodes are kept in
// ascending name order; node i is addressed by its index everywhere
// downstream.
class PackageRelationGraph {
 public:
  PackageRelationGraph() = default;
  PackageRelationGraph(std::vector<PackageName> nodes, std::map<EdgeKey, long long> edges);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<PackageName>& nodes() const { return nodes_; }
  const PackageName& node(std::size_t i) const { return nodes_[i]; }
  std::optional<std::size_t> index_of(std::string_view package) const;

  const std::map<EdgeKey, long long>& edges() const { return edges_; }
  EdgeWeights weights(std::size_t from, std::size_t to) const;
  // Distinct successors of a node, ascending.
  std::span<const std::size_t> successors(std::size_t u) const { return succ_[u]; }

  // Author id per node; distinct ids 0..size()-1 right after build_graph.
  const std::vector<int>& phi() const { return phi_; }

 private:
  std::vector<PackageName> nodes_;
  std::map<EdgeKey, long long> edges_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<int> phi_;
};

bool is_framework_package(const PackageName& package, std::span<const std::string> prefixes);

// Drops framework packages and self-relations, sums parallel records and adds
// one inherit edge per class whose superclass lives in another in-scope
// package. Throws EmptyGraph when no package survives the filter.
PackageRelationGraph build_graph(const AppBundle& bundle,
                                 std::span<const std::string> framework_prefixes);

// Throws UnknownNode when either package is not a graph node.
EdgeWeights edge_weights(const PackageRelationGraph& graph, const PackageName& from,
                         const PackageName& to);

}  // namespace authorprint
