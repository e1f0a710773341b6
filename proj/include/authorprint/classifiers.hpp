#pragma once

// Multinomial logistic regression, one-vs-rest linear SVM and a Gini random
// forest over dense fingerprint matrices (one row per app).
//
// All trainers first put the rows into a canonical order that depends only on
// row contents, so the model is independent of the order rows arrive in.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace authorprint {

enum class ClassifierKind { logreg, linear_svm, random_forest };
std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(std::string_view text);

// Per-column z-scoring; constant columns get unit scale.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

struct LinearModel {
  Standardizer scaler;
  Eigen::MatrixXd weights;  // classes x features
  Eigen::VectorXd bias;     // classes
  std::vector<double> loss_history;

  // Raw scores, one row per sample.
  Eigen::MatrixXd decision(const Eigen::MatrixXd& x) const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  bool is_leaf() const { return nodes.size() == 1; }
};

struct Forest {
  std::vector<DecisionTree> trees;
  double oob_accuracy = 0.0;
};

struct Classifier {
  ClassifierKind kind = ClassifierKind::logreg;
  int num_classes = 0;
  int num_features = 0;
  LinearModel linear;  // logreg, linear_svm
  Forest forest;       // random_forest
};

struct LogRegOptions {
  double l2 = 1e-4;
  double learning_rate = 0.5;
  int epochs = 500;
  std::uint64_t seed = 1;
};

struct SvmOptions {
  double c = 1.0;
  double learning_rate = 0.1;
  int epochs = 500;
  std::uint64_t seed = 1;
};

struct ForestOptions {
  int trees = 100;
  int max_features = 0;  // 0 selects ceil(sqrt(features))
  int min_samples_split = 2;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// Rows reordered by a key that ignores column order; returns the permutation.
std::vector<Eigen::Index> canonical_row_order(const Eigen::MatrixXd& x, std::span<const int> y);

// Mean cross-entropy plus (l2 / 2) * ||W||^2 and its gradient.
struct LogRegObjective {
  double loss = 0.0;
  Eigen::MatrixXd grad_weights;
  Eigen::VectorXd grad_bias;
};
LogRegObjective logreg_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                 const Eigen::MatrixXd& x, std::span<const int> y, double l2);

// Per-class primal objective (1 / (2 C n)) ||w||^2 + mean hinge, summed over
// classes.
double svm_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                     const Eigen::MatrixXd& x, std::span<const int> y, double c);

double gini_impurity(std::span<const int> counts);

// Each trainer throws SingleClass for fewer than two distinct classes and
// NonFiniteInput for NaN or infinite entries. Class ids are 0..K-1.
Classifier train_logreg(const Eigen::MatrixXd& x, std::span<const int> y,
                        const LogRegOptions& options = {});
Classifier train_linear_svm(const Eigen::MatrixXd& x, std::span<const int> y,
                            const SvmOptions& options = {});
Classifier train_random_forest(const Eigen::MatrixXd& x, std::span<const int> y,
                               const ForestOptions& options = {});

// Grows one unpruned tree on the given rows (used by the forest; exposed for
// split-level testing).
DecisionTree grow_tree(const Eigen::MatrixXd& x, std::span<const int> y,
                       std::span<const Eigen::Index> rows, int num_classes, int max_features,
                       int min_samples_split, std::uint64_t seed,
                       std::span<const std::uint64_t> column_keys);

// Content hash per column, used to make feature sampling independent of
// column order.
std::vector<std::uint64_t> column_keys(const Eigen::MatrixXd& x);

// Throw ShapeMismatch when the width differs from training.
std::vector<int> predict(const Classifier& model, const Eigen::MatrixXd& x);
// Logistic regression only; rows sum to one.
Eigen::MatrixXd predict_proba(const Classifier& model, const Eigen::MatrixXd& x);

}  // namespace authorprint
