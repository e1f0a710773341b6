#include "authorprint/affinity.hpp"

#include <algorithm>

#include "authorprint/errors.hpp"

namespace authorprint {

double semantic_distance(const EdgeWeights& w) {
  const long long total = w.total();
  return total > 0 ? 1.0 / static_cast<double>(total) : kUnreachable;
}

DistanceMatrix direct_distances(const PackageRelationGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  DistanceMatrix d = DistanceMatrix::Constant(n, n, kUnreachable);
  d.diagonal().setZero();
  for (const auto& [key, count] : graph.edges()) {
    auto& entry = d(static_cast<Eigen::Index>(key.from), static_cast<Eigen::Index>(key.to));
    if (entry == kUnreachable) entry = semantic_distance(graph.weights(key.from, key.to));
  }
  return d;
}

double correlation(const DistanceMatrix& closed, Eigen::Index u, Eigen::Index v) {
  const double shortest = std::min(closed(u, v), closed(v, u));
  return shortest == kUnreachable ? 0.0 : std::exp(-shortest);
}

int common_parent_depth(const PackageName& u, const PackageName& v, bool root_depth_one) {
  const auto a = u.segments();
  const auto b = v.segments();
  int shared = 0;
  while (shared < static_cast<int>(std::min(a.size(), b.size())) && a[shared] == b[shared]) {
    ++shared;
  }
  return root_depth_one ? shared + 1 : shared;
}

double harmonic_number(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

double structural_similarity(const PackageName& u, const PackageName& v, bool root_depth_one) {
  return harmonic_number(common_parent_depth(u, v, root_depth_one));
}

PairWeightMode PairWeightMode::blend(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw AlphaOutOfRange("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  return {Kind::alpha_blend, alpha};
}

double pair_weight(double corr_normalized, double struc_normalized, const PairWeightMode& mode) {
  if (mode.kind == PairWeightMode::Kind::max) return std::max(corr_normalized, struc_normalized);
  if (!(mode.alpha >= 0.0 && mode.alpha <= 1.0)) {
    throw AlphaOutOfRange("alpha must lie in [0, 1], got " + std::to_string(mode.alpha));
  }
  return mode.alpha * corr_normalized + (1.0 - mode.alpha) * struc_normalized;
}

AffinityMatrix compute_affinities(const PackageRelationGraph& graph, const DistanceMatrix& closed,
                                  const PairWeightMode& mode) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  const Eigen::Index pairs = n * (n - 1) / 2;
  Eigen::VectorXd corr(pairs), struc(pairs);
  for (Eigen::Index i = 0, p = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j, ++p) {
      corr(p) = correlation(closed, i, j);
      struc(p) = structural_similarity(graph.node(i), graph.node(j));
    }
  }
  const Eigen::VectorXd corr_n = min_max_normalize(corr);
  const Eigen::VectorXd struc_n = min_max_normalize(struc);

  AffinityMatrix out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n),
                     Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0, p = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j, ++p) {
      out.corr(i, j) = out.corr(j, i) = corr(p);
      out.struc(i, j) = out.struc(j, i) = struc(p);
      out.sim(i, j) = out.sim(j, i) = pair_weight(corr_n(p), struc_n(p), mode);
    }
  }
  return out;
}

}  // namespace authorprint
