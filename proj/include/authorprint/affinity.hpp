#pragma once

// Pairwise package affinities: relation-count distances closed under shortest
// paths, their exponential correlation, naming-tree similarity, and the
// min-max blend that feeds modularity clustering.

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "authorprint/relation_graph.hpp"

namespace authorprint {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Directed distances; entry (u, v) is +inf when v is unreachable from u.
using DistanceMatrix = Eigen::MatrixXd;

// 1 / (calls + inheritances + icc links), +inf when the pair has no relation.
double semantic_distance(const EdgeWeights& w);

// Direct-edge distances of a graph, zero diagonal.
DistanceMatrix direct_distances(const PackageRelationGraph& graph);

// All-pairs shortest paths (Floyd-Warshall) in place. Works on any square
// dense Eigen matrix with a zero diagonal.
template <typename Derived>
void floyd_closure_in_place(Eigen::MatrixBase<Derived>& d) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = d.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar via = d(i, k);
      if (via == std::numeric_limits<Scalar>::infinity()) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        const Scalar candidate = via + d(k, j);
        if (candidate < d(i, j)) d(i, j) = candidate;
      }
    }
  }
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> floyd_closure(
    const Eigen::MatrixBase<Derived>& d) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out = d;
  floyd_closure_in_place(out);
  return out;
}

// exp(-min(d(u,v), d(v,u))); 0 when neither direction is reachable.
double correlation(const DistanceMatrix& closed, Eigen::Index u, Eigen::Index v);

// Depth of the nearest common parent in the package naming tree. With
// root_depth_one the app root sits at depth 1 and the first segment at 2.
int common_parent_depth(const PackageName& u, const PackageName& v, bool root_depth_one = true);

// Harmonic number H_n of the nearest-common-parent depth.
double structural_similarity(const PackageName& u, const PackageName& v,
                             bool root_depth_one = true);

double harmonic_number(int n);

struct PairWeightMode {
  enum class Kind { max, alpha_blend };
  Kind kind = Kind::max;
  double alpha = 0.5;

  static PairWeightMode max_mode() { return {}; }
  // Throws AlphaOutOfRange when alpha is outside [0, 1].
  static PairWeightMode blend(double alpha);
};

// Combines normalized correlation and structure into a weight in [0, 1].
double pair_weight(double corr_normalized, double struc_normalized, const PairWeightMode& mode);

// Min-max scaling of a vector of values; a constant population maps to 0.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> min_max_normalize(
    const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(values.size());
  if (values.size() == 0) return out;
  const Scalar lo = values.minCoeff();
  const Scalar hi = values.maxCoeff();
  if (!(hi > lo)) return out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out(i) = (values(i) - lo) / (hi - lo);
  }
  return out;
}

// Symmetric n x n matrices over in-scope packages; diagonals are zero.
struct AffinityMatrix {
  Eigen::MatrixXd corr;
  Eigen::MatrixXd struc;
  Eigen::MatrixXd sim;
};

// Raw correlation and structure for every unordered pair, each normalized
// over the app's pairs, then combined with pair_weight.
AffinityMatrix compute_affinities(const PackageRelationGraph& graph, const DistanceMatrix& closed,
                                  const PairWeightMode& mode);

}  // namespace authorprint
