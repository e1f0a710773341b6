#pragma once

// End-to-end training, prediction and cross-validated evaluation.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "authorprint/classifiers.hpp"
#include "authorprint/corpus.hpp"
#include "authorprint/decouple.hpp"
#include "authorprint/embedding.hpp"
#include "authorprint/metrics.hpp"
#include "authorprint/stylometry.hpp"
#include "authorprint/tfidf.hpp"

namespace authorprint {

// Where dex-level features come from: the decoupled primary module or every
// in-scope class of the app.
enum class FeatureScope { primary, whole };
std::string_view to_string(FeatureScope scope);
FeatureScope parse_feature_scope(std::string_view text);

struct PipelineOptions {
  DecoupleConfig decouple;
  std::vector<std::string> framework_overrides = default_framework_overrides();
  FeatureScope scope = FeatureScope::primary;
  TfidfOptions tfidf;
  EmbeddingOptions embedding;
  ClassifierKind classifier = ClassifierKind::random_forest;
  LogRegOptions logreg;
  SvmOptions svm;
  ForestOptions forest;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// Stylometric profile of one app under the configured scope.
StyleProfile app_profile(const AppBundle& bundle, const PipelineOptions& options);

// Vocabularies and embedding fitted on a training set; maps profiles to
// fingerprints.
struct FeatureModel {
  std::array<TfidfVocabulary, kCategoryCount> vocabs;
  EmbeddingTable embedding;

  Eigen::MatrixXd fingerprints(std::span<const StyleProfile> profiles) const;
};

FeatureModel fit_features(std::span<const StyleProfile> profiles, const TfidfOptions& tfidf,
                          const EmbeddingOptions& embedding);

Classifier train_classifier(ClassifierKind kind, const Eigen::MatrixXd& x, std::span<const int> y,
                            const PipelineOptions& options);

struct TrainedModel {
  PipelineOptions options;
  std::vector<std::string> labels;  // class id -> author label, sorted
  FeatureModel features;
  Classifier classifier;
};

// Trains on labeled profiles (labels are author strings).
TrainedModel train_model(std::span<const StyleProfile> profiles,
                         std::span<const std::string> labels, const PipelineOptions& options);
// Decouples and profiles every bundle first. Throws Error when a bundle has
// no author label.
TrainedModel train_model(std::span<const AppBundle> bundles, const PipelineOptions& options);

struct Prediction {
  int class_id = 0;
  std::string label;
  std::optional<double> probability;  // logistic regression only
};
std::vector<Prediction> predict_profiles(const TrainedModel& model,
                                         std::span<const StyleProfile> profiles);
std::vector<Prediction> predict_bundles(const TrainedModel& model, std::span<const AppBundle> bundles);

struct EvaluationOptions {
  int k = 10;
  std::vector<ClassifierKind> classifiers = {ClassifierKind::random_forest};
  // Also score each test fold after obfuscating its bundles.
  bool obfuscate_test = false;
};

struct ClassifierEvaluation {
  ClassifierKind kind = ClassifierKind::random_forest;
  MetricsReport pooled;  // over every app's single out-of-fold prediction
  std::vector<MetricsReport> folds;
  std::vector<int> predictions;  // per app, corpus order
  std::optional<MetricsReport> obfuscated_pooled;
  std::vector<MetricsReport> obfuscated_folds;
  std::vector<int> obfuscated_predictions;
};

struct EvaluationReport {
  std::vector<std::string> labels;
  std::vector<int> truth;  // per app, corpus order
  std::vector<ClassifierEvaluation> results;
};

// Stratified k-fold cross validation. Decoupling and profiling run once per
// app; vocabularies, embedding and classifiers are refitted on each fold's
// training part. Throws KTooLarge per kfold_split.
EvaluationReport evaluate(const std::vector<LabeledApp>& corpus, const PipelineOptions& options,
                          const EvaluationOptions& evaluation);

}  // namespace authorprint
