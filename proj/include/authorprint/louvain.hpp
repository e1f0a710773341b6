#pragma once

// Modularity clustering over a symmetric weight matrix.
//
// The weight matrix A holds A(i, j) for both orders of every pair; diagonal
// entries are self-loop weights. With k_i = sum_j A(i, j) and 2m = sum_ij A,
//
//   Q = 1/(2m) * sum_ij [A(i, j) - k_i k_j / (2m)] * [C_i == C_j].
//
// Coarsening folds each community into a supernode whose self-loop is the
// sum of A over the community (twice its internal edge weight plus any
// existing self-loops), which leaves Q invariant.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace authorprint {

// Q of an assignment; 0 when the graph carries no weight.
double modularity(const Eigen::MatrixXd& weights, std::span<const int> community);

// Sums weights within and between communities. Communities must be labeled
// 0..k-1.
Eigen::MatrixXd coarsen(const Eigen::MatrixXd& weights, std::span<const int> community, int k);

// Relabels communities 0..k-1 in order of first appearance; returns k.
int relabel_in_order(std::vector<int>& community);

struct LouvainResult {
  std::vector<int> community;  // labeled 0..k-1 by first node
  double modularity = 0.0;
  // Q after each completed level, starting with the initial assignment.
  std::vector<double> level_modularity;
};

struct LouvainOptions {
  double tolerance = 1e-9;
  int max_passes = 1000;
};

// Greedy two-phase optimization. Nodes are visited in ascending order in
// every local-move pass, and a node only leaves its community for a strictly
// better one. `initial` groups nodes that start (and stay) together.
LouvainResult louvain(const Eigen::MatrixXd& weights, std::vector<int> initial,
                      const LouvainOptions& options = {});

// Clusters packages: pairs sharing an author id are forced to weight 1 and
// start in one community.
LouvainResult louvain_partition(const Eigen::MatrixXd& weights, std::span<const int> author_ids,
                                const LouvainOptions& options = {});

}  // namespace authorprint
