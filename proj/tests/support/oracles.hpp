#pragma once

// Independent reference implementations used to cross-check the library.
// They favor the most literal reading of each definition over speed.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "authorprint/bundle.hpp"
#include "authorprint/random.hpp"
#include "authorprint/relation_graph.hpp"
#include "authorprint/tfidf.hpp"

namespace oracle {

using authorprint::AppBundle;
using authorprint::PackageRelationGraph;
using authorprint::Rng;

// Smallest node index per group, the canonical form used by aggregation.
std::vector<int> canonical(const std::vector<int>& group_of);

// Union-find fixpoint: library groups, then the component group, then merge
// any two groups that reach each other until nothing changes. Reachability
// is recomputed from scratch each round with a boolean transitive closure.
std::vector<int> aggregation_partition(const PackageRelationGraph& graph,
                                       const std::vector<std::string>& libraries,
                                       const authorprint::ManifestInfo& manifest);

// Shortest directed distance by enumerating every simple path.
Eigen::MatrixXd path_enumeration(const Eigen::MatrixXd& direct);

// Q straight from the double sum over node pairs.
double modularity(const Eigen::MatrixXd& a, const std::vector<int>& community);

struct BestPartition {
  double q = 0.0;
  std::vector<int> community;
};
// Exhaustive search over all set partitions (restricted growth strings).
BestPartition best_modularity(const Eigen::MatrixXd& a);

struct TfidfSelection {
  std::vector<std::string> selected;
  std::vector<double> idf;
  std::vector<int> df;
};
TfidfSelection tfidf_selection(const std::vector<std::vector<std::string>>& corpus, int min_n, int max_n,
                               int min_df, int max_features);

// Random valid bundle with n packages, used for round trips and graph laws.
AppBundle random_bundle(Rng& rng, int packages, bool with_libraries = true);

// Two cliques of sizes p and q (internal weight 1) joined by one bridge.
Eigen::MatrixXd two_cliques(int p, int q, double bridge);

}  // namespace oracle
