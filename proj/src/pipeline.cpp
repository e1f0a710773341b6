#include "authorprint/pipeline.hpp"

#include <algorithm>
#include <map>

#include "authorprint/errors.hpp"
#include "authorprint/obfuscate.hpp"
#include "authorprint/parallel.hpp"
#include "authorprint/random.hpp"

namespace authorprint {

std::string_view to_string(FeatureScope scope) {
  return scope == FeatureScope::primary ? "primary" : "whole";
}

FeatureScope parse_feature_scope(std::string_view text) {
  if (text == "primary") return FeatureScope::primary;
  if (text == "whole") return FeatureScope::whole;
  throw Error("unknown feature scope '" + std::string(text) + "'");
}

StyleProfile app_profile(const AppBundle& bundle, const PipelineOptions& options) {
  if (options.scope == FeatureScope::whole) {
    return extract_whole_profile(bundle, options.decouple.framework_prefixes,
                                 options.framework_overrides);
  }
  const auto partition = decouple(bundle, options.decouple);
  return extract_profile(bundle, partition, options.framework_overrides);
}

Eigen::MatrixXd FeatureModel::fingerprints(std::span<const StyleProfile> profiles) const {
  const auto layout = fingerprint_layout(static_cast<int>(embedding.dimension()));
  Eigen::MatrixXd x(static_cast<Eigen::Index>(profiles.size()), layout.length);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = fingerprint(profiles[i], vocabs, embedding).transpose();
  }
  return x;
}

FeatureModel fit_features(std::span<const StyleProfile> profiles, const TfidfOptions& tfidf,
                          const EmbeddingOptions& embedding) {
  FeatureModel model;
  std::vector<std::vector<std::string>> sentences;
  for (auto c : kAllCategories) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(profiles.size());
    for (const auto& p : profiles) docs.push_back(p[c]);
    model.vocabs[static_cast<std::size_t>(c)] = fit_tfidf(c, docs, tfidf);
    for (auto& d : docs) {
      if (!d.empty()) sentences.push_back(std::move(d));
    }
  }
  model.embedding = train_embedding(sentences, embedding);
  return model;
}

Classifier train_classifier(ClassifierKind kind, const Eigen::MatrixXd& x, std::span<const int> y,
                            const PipelineOptions& options) {
  switch (kind) {
    case ClassifierKind::logreg: {
      auto o = options.logreg;
      o.seed = options.seed;
      return train_logreg(x, y, o);
    }
    case ClassifierKind::linear_svm: {
      auto o = options.svm;
      o.seed = options.seed;
      return train_linear_svm(x, y, o);
    }
    case ClassifierKind::random_forest: {
      auto o = options.forest;
      o.seed = options.seed;
      o.jobs = options.jobs;
      return train_random_forest(x, y, o);
    }
  }
  throw Error("unknown classifier kind");
}

namespace {

std::vector<int> encode(std::span<const std::string> labels, const std::vector<std::string>& index) {
  std::vector<int> y;
  y.reserve(labels.size());
  for (const auto& l : labels) {
    y.push_back(static_cast<int>(std::lower_bound(index.begin(), index.end(), l) - index.begin()));
  }
  return y;
}

std::vector<StyleProfile> profiles_of(std::span<const AppBundle> bundles, const PipelineOptions& options) {
  std::vector<StyleProfile> out(bundles.size());
  parallel_for(bundles.size(), options.jobs, [&](std::size_t i) { out[i] = app_profile(bundles[i], options); });
  return out;
}

}  // namespace

TrainedModel train_model(std::span<const StyleProfile> profiles, std::span<const std::string> labels,
                         const PipelineOptions& options) {
  if (profiles.size() != labels.size()) throw LengthMismatch("profiles and labels differ in length");
  TrainedModel model;
  model.options = options;
  model.labels.assign(labels.begin(), labels.end());
  std::sort(model.labels.begin(), model.labels.end());
  model.labels.erase(std::unique(model.labels.begin(), model.labels.end()), model.labels.end());
  auto emb = options.embedding;
  emb.seed = options.seed;
  model.options.embedding.seed = options.seed;
  model.features = fit_features(profiles, options.tfidf, emb);
  const auto x = model.features.fingerprints(profiles);
  model.classifier = train_classifier(options.classifier, x, encode(labels, model.labels), options);
  return model;
}

TrainedModel train_model(std::span<const AppBundle> bundles, const PipelineOptions& options) {
  std::vector<std::string> labels;
  for (const auto& b : bundles) {
    if (!b.author_label) throw Error("app '" + b.app_id + "' has no author label");
    labels.push_back(*b.author_label);
  }
  const auto profiles = profiles_of(bundles, options);
  return train_model(profiles, labels, options);
}

std::vector<Prediction> predict_profiles(const TrainedModel& model, std::span<const StyleProfile> profiles) {
  const auto x = model.features.fingerprints(profiles);
  const auto ids = predict(model.classifier, x);
  Eigen::MatrixXd proba;
  if (model.classifier.kind == ClassifierKind::logreg) proba = predict_proba(model.classifier, x);
  std::vector<Prediction> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Prediction p;
    p.class_id = ids[i];
    p.label = model.labels.at(static_cast<std::size_t>(ids[i]));
    if (proba.size() > 0) p.probability = proba(static_cast<Eigen::Index>(i), ids[i]);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> predict_bundles(const TrainedModel& model, std::span<const AppBundle> bundles) {
  return predict_profiles(model, profiles_of(bundles, model.options));
}

EvaluationReport evaluate(const std::vector<LabeledApp>& corpus, const PipelineOptions& options,
                          const EvaluationOptions& evaluation) {
  const auto folds = kfold_split(corpus, evaluation.k, options.seed);
  EvaluationReport report;
  report.labels = label_index(corpus);
  std::vector<std::string> app_labels;
  for (const auto& app : corpus) app_labels.push_back(*app.bundle.author_label);
  report.truth = encode(app_labels, report.labels);

  const std::size_t n = corpus.size();
  std::vector<StyleProfile> profiles(n), obfuscated(evaluation.obfuscate_test ? n : 0);
  parallel_for(n, options.jobs, [&](std::size_t i) {
    profiles[i] = app_profile(corpus[i].bundle, options);
    if (evaluation.obfuscate_test) {
      const auto renamed = obfuscate_bundle(corpus[i].bundle, mix_seed(options.seed, 7'000'000 + i));
      obfuscated[i] = app_profile(renamed, options);
    }
  });

  const std::size_t kinds = evaluation.classifiers.size();
  // [fold][kind] -> predictions for the fold's test apps
  std::vector<std::vector<std::vector<int>>> plain(folds.size()), hidden(folds.size());

  auto run_fold = [&](std::size_t f, int jobs) {
    const auto& fold = folds[f];
    std::vector<StyleProfile> train, test, test_obf;
    std::vector<int> y;
    for (auto i : fold.train) {
      train.push_back(profiles[i]);
      y.push_back(report.truth[i]);
    }
    for (auto i : fold.test) {
      test.push_back(profiles[i]);
      if (evaluation.obfuscate_test) test_obf.push_back(obfuscated[i]);
    }
    auto emb = options.embedding;
    emb.seed = mix_seed(options.seed, f);
    const auto features = fit_features(train, options.tfidf, emb);
    const auto x_train = features.fingerprints(train);
    const auto x_test = features.fingerprints(test);
    Eigen::MatrixXd x_obf;
    if (evaluation.obfuscate_test) x_obf = features.fingerprints(test_obf);
    PipelineOptions local = options;
    local.jobs = jobs;
    local.seed = mix_seed(options.seed, 100 + f);
    plain[f].resize(kinds);
    hidden[f].resize(kinds);
    for (std::size_t k = 0; k < kinds; ++k) {
      const auto model = train_classifier(evaluation.classifiers[k], x_train, y, local);
      plain[f][k] = predict(model, x_test);
      if (evaluation.obfuscate_test) hidden[f][k] = predict(model, x_obf);
    }
  };
  if (options.jobs > 1 && folds.size() > 1) {
    parallel_for(folds.size(), options.jobs, [&](std::size_t f) { run_fold(f, 1); });
  } else {
    for (std::size_t f = 0; f < folds.size(); ++f) run_fold(f, 1);
  }

  for (std::size_t k = 0; k < kinds; ++k) {
    ClassifierEvaluation result;
    result.kind = evaluation.classifiers[k];
    result.predictions.assign(n, -1);
    if (evaluation.obfuscate_test) result.obfuscated_predictions.assign(n, -1);
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::vector<int> truth;
      for (std::size_t t = 0; t < folds[f].test.size(); ++t) {
        const auto app = folds[f].test[t];
        truth.push_back(report.truth[app]);
        result.predictions[app] = plain[f][k][t];
        if (evaluation.obfuscate_test) result.obfuscated_predictions[app] = hidden[f][k][t];
      }
      result.folds.push_back(classification_metrics(plain[f][k], truth));
      if (evaluation.obfuscate_test) {
        result.obfuscated_folds.push_back(classification_metrics(hidden[f][k], truth));
      }
    }
    result.pooled = classification_metrics(result.predictions, report.truth);
    if (evaluation.obfuscate_test) {
      result.obfuscated_pooled = classification_metrics(result.obfuscated_predictions, report.truth);
    }
    report.results.push_back(std::move(result));
  }
  return report;
}

}  // namespace authorprint
