#include "authorprint/louvain.hpp"

#include <algorithm>
#include <map>

namespace authorprint {

double modularity(const Eigen::MatrixXd& weights, std::span<const int> community) {
  const double total = weights.sum();
  if (!(total > 0.0)) return 0.0;
  const Eigen::VectorXd strength = weights.rowwise().sum();
  std::map<int, double> inside, degree;
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    degree[community[i]] += strength(i);
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      if (community[i] == community[j]) inside[community[i]] += weights(i, j);
    }
  }
  double q = 0.0;
  for (const auto& [c, tot] : degree) {
    q += inside[c] / total - (tot / total) * (tot / total);
  }
  return q;
}

Eigen::MatrixXd coarsen(const Eigen::MatrixXd& weights, std::span<const int> community, int k) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      out(community[i], community[j]) += weights(i, j);
    }
  }
  return out;
}

int relabel_in_order(std::vector<int>& community) {
  std::map<int, int> label;
  for (int& c : community) {
    auto [it, inserted] = label.emplace(c, static_cast<int>(label.size()));
    c = it->second;
  }
  return static_cast<int>(label.size());
}

namespace {

// One level of local moves starting from singletons. Returns true when any
// node changed community.
bool local_moves(const Eigen::MatrixXd& a, std::vector<int>& community, const LouvainOptions& opt) {
  const Eigen::Index n = a.rows();
  community.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) community[i] = static_cast<int>(i);

  const double total = a.sum();
  if (!(total > 0.0)) return false;
  const Eigen::VectorXd strength = a.rowwise().sum();
  std::vector<double> tot(strength.data(), strength.data() + n);
  std::vector<double> links(n, 0.0);
  std::vector<int> touched;

  bool any_move = false;
  for (int pass = 0; pass < opt.max_passes; ++pass) {
    bool moved = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int current = community[i];
      const double ki = strength(i);

      touched.clear();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i || a(i, j) <= 0.0) continue;
        const int c = community[j];
        if (links[c] == 0.0) touched.push_back(c);
        links[c] += a(i, j);
      }
      tot[current] -= ki;

      auto gain = [&](int c) { return links[c] - tot[c] * ki / total; };
      int best = current;
      double best_gain = gain(current);
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        const double g = gain(c);
        if (g > best_gain + 1e-12) {
          best = c;
          best_gain = g;
        }
      }

      tot[best] += ki;
      community[i] = best;
      for (int c : touched) links[c] = 0.0;
      links[current] = 0.0;
      if (best != current) moved = true;
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

}  // namespace

LouvainResult louvain(const Eigen::MatrixXd& weights, std::vector<int> initial,
                      const LouvainOptions& options) {
  LouvainResult result;
  result.community = std::move(initial);
  int k = relabel_in_order(result.community);
  result.modularity = modularity(weights, result.community);
  result.level_modularity.push_back(result.modularity);

  Eigen::MatrixXd level = coarsen(weights, result.community, k);
  std::vector<int> moves;
  while (local_moves(level, moves, options)) {
    const int next_k = relabel_in_order(moves);
    std::vector<int> candidate = result.community;
    for (int& c : candidate) c = moves[c];
    const double q = modularity(weights, candidate);
    // Strictly improving moves never lower Q; guard against rounding.
    if (q < result.modularity) break;
    result.community = std::move(candidate);
    const double previous = result.modularity;
    result.modularity = q;
    result.level_modularity.push_back(q);
    if (q - previous <= options.tolerance || next_k == k) break;
    level = coarsen(level, moves, next_k);
    k = next_k;
  }
  relabel_in_order(result.community);
  return result;
}

LouvainResult louvain_partition(const Eigen::MatrixXd& weights, std::span<const int> author_ids,
                                const LouvainOptions& options) {
  Eigen::MatrixXd forced = weights;
  const Eigen::Index n = forced.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    forced(i, i) = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && author_ids[i] == author_ids[j]) forced(i, j) = 1.0;
    }
  }
  return louvain(forced, std::vector<int>(author_ids.begin(), author_ids.end()), options);
}

}  // namespace authorprint
