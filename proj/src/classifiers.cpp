#include "authorprint/classifiers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "authorprint/errors.hpp"
#include "authorprint/random.hpp"

namespace authorprint {

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::logreg: return "logreg";
    case ClassifierKind::linear_svm: return "svm";
    case ClassifierKind::random_forest: return "rf";
  }
  return "logreg";
}

ClassifierKind parse_classifier_kind(std::string_view text) {
  if (text == "logreg") return ClassifierKind::logreg;
  if (text == "svm" || text == "linear_svm") return ClassifierKind::linear_svm;
  if (text == "rf" || text == "random_forest") return ClassifierKind::random_forest;
  throw Error("unknown classifier '" + std::string(text) + "' (expected logreg|svm|rf)");
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  Standardizer s;
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().mean();
    s.scale(j) = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::MatrixXd LinearModel::decision(const Eigen::MatrixXd& x) const {
  return (scaler.apply(x) * weights.transpose()).rowwise() + bias.transpose();
}

int DecisionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  int at = 0;
  while (nodes[at].feature >= 0) {
    at = row(nodes[at].feature) <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
  }
  return nodes[at].label;
}

namespace {

std::uint64_t value_bits(double v) {
  if (v == 0.0) v = 0.0;  // fold -0.0
  return std::bit_cast<std::uint64_t>(v);
}

int check_training_input(const Eigen::MatrixXd& x, std::span<const int> y) {
  if (static_cast<Eigen::Index>(y.size()) != x.rows()) {
    throw ShapeMismatch("label count differs from row count");
  }
  if (!x.allFinite()) throw NonFiniteInput("training matrix contains NaN or infinity");
  std::set<int> classes(y.begin(), y.end());
  if (classes.size() < 2) throw SingleClass("training data needs at least two classes");
  if (*classes.begin() < 0) throw Error("class ids must be non-negative");
  return *classes.rbegin() + 1;
}

struct Sorted {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Sorted canonical(const Eigen::MatrixXd& x, std::span<const int> y) {
  const auto order = canonical_row_order(x, y);
  Sorted s{Eigen::MatrixXd(x.rows(), x.cols()), std::vector<int>(y.size())};
  for (std::size_t i = 0; i < order.size(); ++i) {
    s.x.row(static_cast<Eigen::Index>(i)) = x.row(order[i]);
    s.y[i] = y[static_cast<std::size_t>(order[i])];
  }
  return s;
}

Eigen::MatrixXd softmax_rows(Eigen::MatrixXd scores) {
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double top = scores.row(i).maxCoeff();
    scores.row(i) = (scores.row(i).array() - top).exp();
    scores.row(i) /= scores.row(i).sum();
  }
  return scores;
}

void check_width(const Classifier& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.num_features) {
    throw ShapeMismatch("expected " + std::to_string(model.num_features) + " features, got " +
                        std::to_string(x.cols()));
  }
}

int majority(std::span<const int> counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace

std::vector<Eigen::Index> canonical_row_order(const Eigen::MatrixXd& x, std::span<const int> y) {
  std::vector<std::uint64_t> key(static_cast<std::size_t>(x.rows()), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::uint64_t k = 0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) k += mix_seed(value_bits(x(i, j)), 0);
    key[static_cast<std::size_t>(i)] = k;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    if (y[ua] != y[ub]) return y[ua] < y[ub];
    if (key[ua] != key[ub]) return key[ua] < key[ub];
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (x(a, j) != x(b, j)) return x(a, j) < x(b, j);
    }
    return false;
  });
  return order;
}

LogRegObjective logreg_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                 const Eigen::MatrixXd& x, std::span<const int> y, double l2) {
  const auto n = static_cast<double>(x.rows());
  Eigen::MatrixXd scores = (x * weights.transpose()).rowwise() + bias.transpose();
  LogRegObjective out;
  double nll = 0.0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double top = scores.row(i).maxCoeff();
    const double lse = top + std::log((scores.row(i).array() - top).exp().sum());
    nll += lse - scores(i, y[static_cast<std::size_t>(i)]);
  }
  Eigen::MatrixXd residual = softmax_rows(std::move(scores));
  for (Eigen::Index i = 0; i < residual.rows(); ++i) residual(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  out.loss = nll / n + 0.5 * l2 * weights.squaredNorm();
  out.grad_weights = residual.transpose() * x / n + l2 * weights;
  out.grad_bias = residual.colwise().sum().transpose() / n;
  return out;
}

double svm_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                     const Eigen::MatrixXd& x, std::span<const int> y, double c) {
  const auto n = static_cast<double>(x.rows());
  const Eigen::MatrixXd scores = (x * weights.transpose()).rowwise() + bias.transpose();
  double total = 0.0;
  for (Eigen::Index k = 0; k < weights.rows(); ++k) {
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double s = y[static_cast<std::size_t>(i)] == k ? 1.0 : -1.0;
      hinge += std::max(0.0, 1.0 - s * scores(i, k));
    }
    total += weights.row(k).squaredNorm() / (2.0 * c * n) + hinge / n;
  }
  return total;
}

double gini_impurity(std::span<const int> counts) {
  double n = 0.0;
  for (int c : counts) n += c;
  if (n == 0.0) return 0.0;
  double sum_sq = 0.0;
  for (int c : counts) sum_sq += (c / n) * (c / n);
  return 1.0 - sum_sq;
}

Classifier train_logreg(const Eigen::MatrixXd& x, std::span<const int> y,
                        const LogRegOptions& options) {
  const int classes = check_training_input(x, y);
  const auto data = canonical(x, y);

  Classifier model;
  model.kind = ClassifierKind::logreg;
  model.num_classes = classes;
  model.num_features = static_cast<int>(x.cols());
  auto& lin = model.linear;
  lin.scaler = Standardizer::fit(data.x);
  const Eigen::MatrixXd xs = lin.scaler.apply(data.x);
  lin.weights = Eigen::MatrixXd::Zero(classes, x.cols());
  lin.bias = Eigen::VectorXd::Zero(classes);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const auto obj = logreg_objective(lin.weights, lin.bias, xs, data.y, options.l2);
    lin.loss_history.push_back(obj.loss);
    lin.weights -= options.learning_rate * obj.grad_weights;
    lin.bias -= options.learning_rate * obj.grad_bias;
  }
  lin.loss_history.push_back(logreg_objective(lin.weights, lin.bias, xs, data.y, options.l2).loss);
  return model;
}

Classifier train_linear_svm(const Eigen::MatrixXd& x, std::span<const int> y,
                            const SvmOptions& options) {
  const int classes = check_training_input(x, y);
  const auto data = canonical(x, y);

  Classifier model;
  model.kind = ClassifierKind::linear_svm;
  model.num_classes = classes;
  model.num_features = static_cast<int>(x.cols());
  auto& lin = model.linear;
  lin.scaler = Standardizer::fit(data.x);
  const Eigen::MatrixXd xs = lin.scaler.apply(data.x);
  const auto n = static_cast<double>(xs.rows());

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(classes, x.cols());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(classes);
  Eigen::MatrixXd best_w = w;
  Eigen::VectorXd best_b = b;
  double best = svm_objective(w, b, xs, data.y, options.c);
  lin.loss_history.push_back(best);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const double step = options.learning_rate / std::sqrt(epoch + 1.0);
    const Eigen::MatrixXd scores = (xs * w.transpose()).rowwise() + b.transpose();
    Eigen::MatrixXd gw = w / (options.c * n);
    Eigen::VectorXd gb = Eigen::VectorXd::Zero(classes);
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
      for (int k = 0; k < classes; ++k) {
        const double s = data.y[static_cast<std::size_t>(i)] == k ? 1.0 : -1.0;
        if (s * scores(i, k) < 1.0) {
          gw.row(k) -= s * xs.row(i) / n;
          gb(k) -= s / n;
        }
      }
    }
    w -= step * gw;
    b -= step * gb;
    const double obj = svm_objective(w, b, xs, data.y, options.c);
    lin.loss_history.push_back(obj);
    if (obj < best) {
      best = obj;
      best_w = w;
      best_b = b;
    }
  }
  lin.weights = std::move(best_w);
  lin.bias = std::move(best_b);
  return model;
}

std::vector<std::uint64_t> column_keys(const Eigen::MatrixXd& x) {
  std::vector<std::uint64_t> keys(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (Eigen::Index i = 0; i < x.rows(); ++i) h = mix_seed(h ^ value_bits(x(i, j)), 1);
    keys[static_cast<std::size_t>(j)] = h;
  }
  return keys;
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

// Best threshold on one feature for the given rows; feature -1 when the
// feature is constant there.
Split best_split_on(const Eigen::MatrixXd& x, std::span<const int> y,
                    std::span<const Eigen::Index> rows, int feature, int num_classes,
                    std::vector<std::pair<double, int>>& scratch) {
  scratch.clear();
  for (auto r : rows) scratch.emplace_back(x(r, feature), y[static_cast<std::size_t>(r)]);
  std::sort(scratch.begin(), scratch.end());
  Split best;
  if (scratch.front().first == scratch.back().first) return best;

  std::vector<int> left(static_cast<std::size_t>(num_classes), 0);
  std::vector<int> right(static_cast<std::size_t>(num_classes), 0);
  for (const auto& [v, label] : scratch) ++right[static_cast<std::size_t>(label)];
  const double n = static_cast<double>(scratch.size());
  for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
    const auto label = static_cast<std::size_t>(scratch[i].second);
    ++left[label];
    --right[label];
    if (scratch[i].first == scratch[i + 1].first) continue;
    const double nl = static_cast<double>(i + 1);
    const double impurity = (nl * gini_impurity(left) + (n - nl) * gini_impurity(right)) / n;
    if (best.feature < 0 || impurity < best.impurity) {
      best.feature = feature;
      best.impurity = impurity;
      best.threshold = 0.5 * (scratch[i].first + scratch[i + 1].first);
    }
  }
  return best;
}

}  // namespace

DecisionTree grow_tree(const Eigen::MatrixXd& x, std::span<const int> y,
                       std::span<const Eigen::Index> rows, int num_classes, int max_features,
                       int min_samples_split, std::uint64_t seed,
                       std::span<const std::uint64_t> keys) {
  Rng rng(seed);
  DecisionTree tree;
  const int d = static_cast<int>(x.cols());
  const int m = std::clamp(max_features, 1, d);

  struct Pending {
    int node;
    std::vector<Eigen::Index> rows;
  };
  std::vector<Pending> work;
  tree.nodes.emplace_back();
  work.push_back({0, std::vector<Eigen::Index>(rows.begin(), rows.end())});

  std::vector<std::pair<double, int>> scratch;
  std::vector<std::pair<std::uint64_t, int>> order(static_cast<std::size_t>(d));
  std::vector<int> counts(static_cast<std::size_t>(num_classes));
  while (!work.empty()) {
    Pending item = std::move(work.back());
    work.pop_back();
    std::fill(counts.begin(), counts.end(), 0);
    for (auto r : item.rows) ++counts[static_cast<std::size_t>(y[static_cast<std::size_t>(r)])];
    tree.nodes[item.node].label = majority(counts);
    const bool pure = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
    if (pure || static_cast<int>(item.rows.size()) < min_samples_split) continue;

    // Candidate order derives from column contents, never column positions.
    const std::uint64_t salt = rng.next();
    for (int f = 0; f < d; ++f) {
      order[static_cast<std::size_t>(f)] = {mix_seed(salt, keys[static_cast<std::size_t>(f)]), f};
    }
    auto by_score = [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return keys[static_cast<std::size_t>(a.second)] < keys[static_cast<std::size_t>(b.second)];
    };
    std::partial_sort(order.begin(), order.begin() + m, order.end(), by_score);

    Split best;
    for (int i = 0; i < d; ++i) {
      if (i == m) {
        if (best.feature >= 0) break;
        std::sort(order.begin() + m, order.end(), by_score);
      }
      const auto s = best_split_on(x, y, item.rows, order[static_cast<std::size_t>(i)].second,
                                   num_classes, scratch);
      if (s.feature >= 0 && (best.feature < 0 || s.impurity < best.impurity)) best = s;
    }
    if (best.feature < 0) continue;

    std::vector<Eigen::Index> left_rows, right_rows;
    for (auto r : item.rows) {
      (x(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
    }
    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& node = tree.nodes[item.node];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = left + 1;
    work.push_back({left + 1, std::move(right_rows)});
    work.push_back({left, std::move(left_rows)});
  }
  return tree;
}

Classifier train_random_forest(const Eigen::MatrixXd& x, std::span<const int> y,
                               const ForestOptions& options) {
  const int classes = check_training_input(x, y);
  const auto data = canonical(x, y);
  const auto keys = column_keys(data.x);

  Classifier model;
  model.kind = ClassifierKind::random_forest;
  model.num_classes = classes;
  model.num_features = static_cast<int>(x.cols());
  const int max_features = options.max_features > 0
                               ? options.max_features
                               : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));

  const auto n = static_cast<std::size_t>(data.x.rows());
  const auto tree_count = static_cast<std::size_t>(std::max(1, options.trees));
  std::vector<DecisionTree> trees(tree_count);
  std::vector<std::vector<char>> in_bag(tree_count, std::vector<char>(n, 0));

  auto build = [&](std::size_t t) {
    Rng rng(mix_seed(options.seed, t));
    std::vector<Eigen::Index> sample(n);
    for (auto& s : sample) {
      s = static_cast<Eigen::Index>(rng.below(n));
      in_bag[t][static_cast<std::size_t>(s)] = 1;
    }
    trees[t] = grow_tree(data.x, data.y, sample, classes, max_features,
                         options.min_samples_split, rng.next(), keys);
  };
  const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  if (jobs == 1) {
    for (std::size_t t = 0; t < tree_count; ++t) build(t);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < tree_count; t += jobs) build(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::size_t scored = 0, correct = 0;
  std::vector<int> votes(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(votes.begin(), votes.end(), 0);
    bool any = false;
    for (std::size_t t = 0; t < tree_count; ++t) {
      if (in_bag[t][i]) continue;
      ++votes[static_cast<std::size_t>(trees[t].predict(data.x.row(static_cast<Eigen::Index>(i))))];
      any = true;
    }
    if (!any) continue;
    ++scored;
    if (majority(votes) == data.y[i]) ++correct;
  }
  model.forest.trees = std::move(trees);
  model.forest.oob_accuracy = scored ? static_cast<double>(correct) / static_cast<double>(scored) : 0.0;
  return model;
}

std::vector<int> predict(const Classifier& model, const Eigen::MatrixXd& x) {
  check_width(model, x);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  if (model.kind == ClassifierKind::random_forest) {
    std::vector<int> votes(static_cast<std::size_t>(model.num_classes));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      std::fill(votes.begin(), votes.end(), 0);
      for (const auto& tree : model.forest.trees) ++votes[static_cast<std::size_t>(tree.predict(x.row(i)))];
      out[static_cast<std::size_t>(i)] = majority(votes);
    }
    return out;
  }
  const Eigen::MatrixXd scores = model.linear.decision(x);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best;
    scores.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

Eigen::MatrixXd predict_proba(const Classifier& model, const Eigen::MatrixXd& x) {
  if (model.kind != ClassifierKind::logreg) {
    throw Error("probabilities are only available for logistic regression");
  }
  check_width(model, x);
  return softmax_rows(model.linear.decision(x));
}

}  // namespace authorprint
