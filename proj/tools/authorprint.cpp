// authorprint command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 partial failure (some inputs skipped),
// 3 fatal.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "authorprint/bundle.hpp"
#include "authorprint/config_lists.hpp"
#include "authorprint/corpus.hpp"
#include "authorprint/decouple.hpp"
#include "authorprint/errors.hpp"
#include "authorprint/metrics.hpp"
#include "authorprint/model_io.hpp"
#include "authorprint/obfuscate.hpp"
#include "authorprint/parallel.hpp"
#include "authorprint/pipeline.hpp"
#include "authorprint/random.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace authorprint;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPartial = 2;
constexpr int kFatal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Files are taken as given; directories contribute their *.json files except
// ground-truth sidecars, in name order.
std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(in)) {
        const auto p = e.path().string();
        if (e.is_regular_file() && ends_with(p, ".json") && !ends_with(p, ".truth.json")) found.push_back(p);
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

std::optional<std::string> truth_sidecar(const std::string& bundle_path) {
  if (!ends_with(bundle_path, ".bundle.json")) return std::nullopt;
  auto p = bundle_path.substr(0, bundle_path.size() - std::string_view(".bundle.json").size()) + ".truth.json";
  if (!fs::exists(p)) return std::nullopt;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& out, const json& doc) {
  const auto text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

json metrics_json(const MetricsReport& m) {
  json per_class = json::array();
  for (const auto& c : m.per_class) {
    per_class.push_back({{"label", c.label}, {"precision", c.precision}, {"recall", c.recall},
                         {"f1", c.f1}, {"support", c.support}});
  }
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
          {"f1", m.f1},             {"confusion", m.confusion}, {"per_class", per_class}};
}

// Shared configuration flags.
struct Common {
  std::string mode = "max";
  double alpha = 0.5;
  std::string libs_file;
  std::string prefixes_file;
  std::string overrides_file;
  std::string classifier = "rf";
  std::string scope = "primary";
  std::uint64_t seed = 1;
  int jobs = 1;
  int trees = 100;
  double l2 = 1e-4;
  double svm_c = 1.0;
  int dimension = 100;
  int min_count = 10;
  int window = 3;

  void add_decouple(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "pair weight: max of the two affinities, or an alpha blend")
        ->check(CLI::IsMember({"max", "alpha"}))
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "weight of call correlation in the alpha blend")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--libs-file", libs_file, "known library prefixes, one per line");
    cmd->add_option("--prefixes-file", prefixes_file, "framework package prefixes, one per line");
    cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  }

  void add_model(CLI::App* cmd) {
    add_decouple(cmd);
    cmd->add_option("--overrides-file", overrides_file, "method names excluded from identifiers");
    cmd->add_option("--scope", scope, "dex features from the primary module or the whole app")
        ->check(CLI::IsMember({"primary", "whole"}))
        ->capture_default_str();
    cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    cmd->add_option("--trees", trees, "random forest size")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--l2", l2, "logistic regression L2 strength")->capture_default_str();
    cmd->add_option("--svm-c", svm_c, "SVM regularization constant")->capture_default_str();
    cmd->add_option("--dimension", dimension, "embedding width")->check(CLI::Range(1, 166))->capture_default_str();
    cmd->add_option("--min-count", min_count, "embedding token frequency floor")->capture_default_str();
    cmd->add_option("--window", window, "embedding context window")->capture_default_str();
  }

  DecoupleConfig decouple_config() const {
    DecoupleConfig c;
    if (!prefixes_file.empty()) c.framework_prefixes = read_list_file(prefixes_file);
    if (!libs_file.empty()) c.libraries = read_list_file(libs_file);
    c.mode = mode == "max" ? PairWeightMode::max_mode() : PairWeightMode::blend(alpha);
    return c;
  }

  PipelineOptions pipeline() const {
    PipelineOptions o;
    o.decouple = decouple_config();
    if (!overrides_file.empty()) o.framework_overrides = read_list_file(overrides_file);
    o.scope = parse_feature_scope(scope);
    o.classifier = parse_kind(classifier);
    o.seed = seed;
    o.jobs = jobs;
    o.forest.trees = trees;
    o.logreg.l2 = l2;
    o.svm.c = svm_c;
    o.embedding.dimension = dimension;
    o.embedding.min_count = min_count;
    o.embedding.window = window;
    return o;
  }

  static ClassifierKind parse_kind(const std::string& s) {
    if (s == "rf") return ClassifierKind::random_forest;
    if (s == "svm") return ClassifierKind::linear_svm;
    return parse_classifier_kind(s);
  }
};

const std::vector<std::string> kClassifierNames = {"logreg", "svm", "rf"};

// ---- validate ---------------------------------------------------------------

int cmd_validate(const std::vector<std::string>& inputs) {
  int bad = 0;
  for (const auto& path : expand_inputs(inputs)) {
    try {
      const auto bundle = parse_bundle(slurp(path));
      std::cout << path << "\tok\t" << bundle.app_id << "\n";
    } catch (const Error& e) {
      ++bad;
      std::cout << path << "\tinvalid\t" << e.what() << "\n";
    }
  }
  return bad ? kPartial : kOk;
}

// ---- decouple ---------------------------------------------------------------

json partition_json(const AppBundle& bundle, const AuthorshipPartition& p) {
  json modules = json::array();
  for (int m = 0; m < p.module_count(); ++m) {
    json members = json::array();
    for (std::size_t i = 0; i < p.packages.size(); ++i) {
      if (p.module_of[i] == m) members.push_back(p.packages[i].str());
    }
    modules.push_back(std::move(members));
  }
  json primary = json::array();
  for (std::size_t i = 0; i < p.packages.size(); ++i) {
    if (p.module_of[i] == p.primary_module) primary.push_back(p.packages[i].str());
  }
  json merged = json::array();
  for (const auto& g : p.aggregation.merged_groups) {
    json members = json::array();
    for (auto i : g.members) members.push_back(p.packages[i].str());
    merged.push_back({{"reason", std::string(to_string(g.reason))}, {"packages", members}});
  }
  return {{"app_id", bundle.app_id},
          {"modules", modules},
          {"primary_module", p.primary_module},
          {"primary_packages", primary},
          {"primary_from_main_activity", p.primary_from_main_activity},
          {"modularity", p.modularity},
          {"merged_groups", merged},
          {"skipped_components", p.aggregation.skipped_components}};
}

int cmd_decouple(const std::vector<std::string>& inputs, const Common& common, const std::string& out) {
  const auto config = common.decouple_config();
  const auto files = expand_inputs(inputs);
  struct Slot {
    std::optional<json> report;
    std::optional<double> accuracy;
    std::string error;
  };
  std::vector<Slot> slots(files.size());
  parallel_for(files.size(), common.jobs, [&](std::size_t i) {
    try {
      const auto bundle = parse_bundle(slurp(files[i]));
      const auto partition = decouple(bundle, config);
      json r = partition_json(bundle, partition);
      if (const auto truth = truth_sidecar(files[i])) {
        const auto m = decoupling_metrics(bundle, partition, parse_truth(slurp(*truth)));
        r["against_truth"] = metrics_json(m);
        slots[i].accuracy = m.accuracy;
      }
      slots[i].report = std::move(r);
    } catch (const Error& e) {
      slots[i].error = e.what();
    } catch (const std::exception& e) {
      slots[i].error = e.what();
    }
  });

  std::vector<const Slot*> ok;
  json failures = json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (slots[i].report) {
      ok.push_back(&slots[i]);
    } else {
      failures.push_back({{"path", files[i]}, {"error", slots[i].error}});
      std::cerr << files[i] << ": " << slots[i].error << "\n";
    }
  }
  std::sort(ok.begin(), ok.end(),
            [](const Slot* a, const Slot* b) { return (*a->report)["app_id"] < (*b->report)["app_id"]; });
  json reports = json::array();
  double sum = 0.0;
  int scored = 0;
  for (const auto* s : ok) {
    reports.push_back(*s->report);
    if (s->accuracy) {
      sum += *s->accuracy;
      ++scored;
    }
  }
  json doc = {{"reports", reports}, {"failures", failures}};
  if (scored) doc["mean_accuracy"] = sum / scored;
  if (!out.empty()) {
    emit(out, doc);
    std::printf("%-32s %7s %7s %9s\n", "app_id", "modules", "primary", "accuracy");
    for (const auto* s : ok) {
      const auto& r = *s->report;
      std::printf("%-32s %7zu %7zu %9s\n", r["app_id"].get<std::string>().c_str(), r["modules"].size(),
                  r["primary_packages"].size(),
                  s->accuracy ? std::to_string(*s->accuracy).substr(0, 6).c_str() : "-");
    }
    if (scored) std::printf("mean accuracy %.4f over %d apps\n", sum / scored, scored);
  } else {
    emit(out, doc);
  }
  return failures.empty() ? kOk : kPartial;
}

// ---- corpus loading for train/evaluate -------------------------------------

std::vector<LabeledApp> labeled_corpus(const std::string& dir, int least_apps, bool& partial) {
  if (!fs::is_directory(dir)) throw UsageError("corpus directory not found: " + dir);
  auto loaded = load_corpus(dir);
  for (const auto& f : loaded.failures) std::cerr << f << "\n";
  partial = !loaded.failures.empty();
  if (loaded.apps.empty()) throw UsageError("no bundle found in " + dir);
  const auto unlabeled = std::count_if(loaded.apps.begin(), loaded.apps.end(),
                                       [](const LabeledApp& a) { return !a.bundle.author_label; });
  if (unlabeled == static_cast<long>(loaded.apps.size())) {
    throw UsageError("no bundle in " + dir + " carries an author_label");
  }
  if (unlabeled > 0) {
    std::cerr << "skipping " << unlabeled << " unlabeled bundle(s)\n";
    partial = true;
  }
  return least_apps_filter(loaded.apps, least_apps);
}

// ---- train -------------------------------------------------------------------

int cmd_train(const std::string& dir, const Common& common, int least_apps, const std::string& out) {
  bool partial = false;
  const auto corpus = labeled_corpus(dir, least_apps, partial);
  std::vector<AppBundle> bundles;
  for (const auto& a : corpus) bundles.push_back(a.bundle);
  const auto model = train_model(bundles, common.pipeline());
  save_model(model, out);
  std::printf("trained %s on %zu apps from %zu authors -> %s\n",
              std::string(to_string(model.classifier.kind)).c_str(), bundles.size(), model.labels.size(),
              out.c_str());
  return partial ? kPartial : kOk;
}

// ---- predict -------------------------------------------------------------------

int cmd_predict(const std::string& model_path, const std::vector<std::string>& inputs, int jobs,
                const std::string& out) {
  auto model = load_model(model_path);
  model.options.jobs = jobs;
  const auto files = expand_inputs(inputs);
  std::vector<AppBundle> bundles;
  json failures = json::array();
  for (const auto& f : files) {
    try {
      bundles.push_back(parse_bundle(slurp(f)));
    } catch (const Error& e) {
      failures.push_back({{"path", f}, {"error", e.what()}});
      std::cerr << f << ": " << e.what() << "\n";
    }
  }
  std::sort(bundles.begin(), bundles.end(),
            [](const AppBundle& a, const AppBundle& b) { return a.app_id < b.app_id; });

  // Bundles that fail decoupling are reported individually.
  std::vector<std::optional<StyleProfile>> profiles(bundles.size());
  std::vector<std::string> errors(bundles.size());
  parallel_for(bundles.size(), jobs, [&](std::size_t i) {
    try {
      profiles[i] = app_profile(bundles[i], model.options);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  std::vector<StyleProfile> usable;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    if (profiles[i]) {
      usable.push_back(*profiles[i]);
      index.push_back(i);
    } else {
      failures.push_back({{"app_id", bundles[i].app_id}, {"error", errors[i]}});
      std::cerr << bundles[i].app_id << ": " << errors[i] << "\n";
    }
  }
  const auto predictions = predict_profiles(model, usable);
  json rows = json::array();
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const auto& b = bundles[index[k]];
    const auto& p = predictions[k];
    json row = {{"app_id", b.app_id}, {"predicted", p.label}};
    if (p.probability) row["probability"] = *p.probability;
    if (b.author_label) row["author_label"] = *b.author_label;
    rows.push_back(row);
    std::printf("%s\t%s", b.app_id.c_str(), p.label.c_str());
    if (p.probability) std::printf("\t%.4f", *p.probability);
    std::printf("\n");
  }
  if (!out.empty()) emit(out, {{"predictions", rows}, {"failures", failures}});
  return failures.empty() ? kOk : kPartial;
}

// ---- evaluate ------------------------------------------------------------------

int cmd_evaluate(const std::string& dir, const Common& common, int least_apps, int k,
                 const std::vector<std::string>& classifiers, bool obfuscate, const std::string& out) {
  bool partial = false;
  const auto corpus = labeled_corpus(dir, least_apps, partial);
  EvaluationOptions eval;
  eval.k = k;
  eval.obfuscate_test = obfuscate;
  eval.classifiers.clear();
  for (const auto& c : classifiers) eval.classifiers.push_back(Common::parse_kind(c));
  const auto report = evaluate(corpus, common.pipeline(), eval);

  json results = json::array();
  std::printf("%-14s %9s %9s %9s %9s %12s\n", "classifier", "accuracy", "precision", "recall", "f1",
              "obfuscated");
  for (const auto& r : report.results) {
    json folds = json::array();
    for (const auto& f : r.folds) folds.push_back(metrics_json(f));
    json entry = {{"classifier", std::string(to_string(r.kind))},
                  {"pooled", metrics_json(r.pooled)},
                  {"mean_of_folds", metrics_json(mean_metrics(r.folds))},
                  {"folds", folds}};
    if (r.obfuscated_pooled) {
      json ofolds = json::array();
      for (const auto& f : r.obfuscated_folds) ofolds.push_back(metrics_json(f));
      entry["obfuscated_pooled"] = metrics_json(*r.obfuscated_pooled);
      entry["obfuscated_folds"] = ofolds;
    }
    results.push_back(entry);
    std::printf("%-14s %9.4f %9.4f %9.4f %9.4f %12s\n", std::string(to_string(r.kind)).c_str(),
                r.pooled.accuracy, r.pooled.precision, r.pooled.recall, r.pooled.f1,
                r.obfuscated_pooled ? std::to_string(r.obfuscated_pooled->accuracy).substr(0, 6).c_str() : "-");
  }
  emit(out.empty() ? std::string() : out,
       {{"apps", corpus.size()},
        {"authors", report.labels.size()},
        {"k", k},
        {"seed", common.seed},
        {"scope", common.scope},
        {"labels", report.labels},
        {"results", results}});
  return partial ? kPartial : kOk;
}

// ---- gen-corpus / obfuscate ---------------------------------------------------------

int cmd_gen_corpus(const GeneratorOptions& options, const std::string& out) {
  fs::create_directories(out);
  const auto corpus = generate_corpus(options);
  write_corpus(corpus, out);
  std::printf("wrote %zu apps from %d authors to %s\n", corpus.size(), options.authors, out.c_str());
  return kOk;
}

int cmd_obfuscate(const std::vector<std::string>& inputs, std::uint64_t seed, const std::string& out) {
  fs::create_directories(out);
  int bad = 0;
  for (const auto& path : expand_inputs(inputs)) {
    try {
      const auto bundle = parse_bundle(slurp(path));
      const auto renamed = obfuscate_bundle(bundle, mix_seed(seed, std::hash<std::string>{}(bundle.app_id)));
      write_bundle_file(renamed, (fs::path(out) / (bundle.app_id + ".bundle.json")).string());
    } catch (const Error& e) {
      ++bad;
      std::cerr << path << ": " << e.what() << "\n";
    }
  }
  return bad ? kPartial : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Authorship decoupling and identification for Android app bundles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "authorprint 1.0");

  Common common;
  std::vector<std::string> inputs;
  std::string out;
  std::string corpus_dir;
  std::string model_path;
  int least_apps = 1;
  int k = 10;
  std::vector<std::string> classifiers;
  bool obfuscate = false;
  GeneratorOptions gen;

  auto* validate_cmd = app.add_subcommand("validate", "check bundles against the format rules");
  validate_cmd->add_option("inputs", inputs, "bundle files or directories")->required();

  auto* decouple_cmd = app.add_subcommand("decouple", "split each app into modules and find its primary module");
  decouple_cmd->add_option("inputs", inputs, "bundle files or directories")->required();
  decouple_cmd->add_option("--out", out, "report file (JSON); a summary table goes to stdout");
  common.add_decouple(decouple_cmd);

  auto* train_cmd = app.add_subcommand("train", "fit a model on a labeled corpus");
  train_cmd->add_option("corpus", corpus_dir, "directory of labeled bundles")->required();
  train_cmd->add_option("--out", out, "model artifact path")->required();
  train_cmd->add_option("--classifier", common.classifier, "classifier")
      ->check(CLI::IsMember(kClassifierNames))
      ->capture_default_str();
  train_cmd->add_option("--least-apps", least_apps, "drop authors with fewer apps")->capture_default_str();
  common.add_model(train_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "attribute bundles with a trained model");
  predict_cmd->add_option("--model", model_path, "model artifact")->required();
  predict_cmd->add_option("inputs", inputs, "bundle files or directories")->required();
  predict_cmd->add_option("--out", out, "predictions file (JSON)");
  predict_cmd->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "stratified k-fold cross validation");
  evaluate_cmd->add_option("corpus", corpus_dir, "directory of labeled bundles")->required();
  evaluate_cmd->add_option("--k", k, "folds")->capture_default_str();
  evaluate_cmd->add_option("--classifier", classifiers, "classifier, repeatable (default rf)")
      ->check(CLI::IsMember(kClassifierNames));
  evaluate_cmd->add_option("--least-apps", least_apps, "drop authors with fewer apps")->capture_default_str();
  evaluate_cmd->add_flag("--obfuscate", obfuscate, "also score obfuscated test folds");
  evaluate_cmd->add_option("--out", out, "report file (JSON); a summary table goes to stdout");
  common.add_model(evaluate_cmd);

  auto* gen_cmd = app.add_subcommand("gen-corpus", "write a synthetic labeled corpus");
  gen_cmd->add_option("--out", out, "output directory")->required();
  gen_cmd->add_option("--authors", gen.authors)->capture_default_str();
  gen_cmd->add_option("--apps", gen.apps_per_author, "apps per author")->capture_default_str();
  gen_cmd->add_option("--min-modules", gen.min_modules)->capture_default_str();
  gen_cmd->add_option("--max-modules", gen.max_modules)->capture_default_str();
  gen_cmd->add_option("--library-pool", gen.library_pool)->capture_default_str();
  gen_cmd->add_option("--distinctiveness", gen.distinctiveness)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_cmd->add_option("--favorite-idioms", gen.favorite_idioms)->capture_default_str();
  gen_cmd->add_option("--max-library-calls", gen.max_library_calls)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();

  auto* obf_cmd = app.add_subcommand("obfuscate", "rename classes, methods and fields");
  obf_cmd->add_option("inputs", inputs, "bundle files or directories")->required();
  obf_cmd->add_option("--out", out, "output directory")->required();
  obf_cmd->add_option("--seed", common.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (classifiers.empty()) classifiers = {"rf"};
  try {
    if (*validate_cmd) return cmd_validate(inputs);
    if (*decouple_cmd) return cmd_decouple(inputs, common, out);
    if (*train_cmd) return cmd_train(corpus_dir, common, least_apps, out);
    if (*predict_cmd) return cmd_predict(model_path, inputs, common.jobs, out);
    if (*evaluate_cmd) return cmd_evaluate(corpus_dir, common, least_apps, k, classifiers, obfuscate, out);
    if (*gen_cmd) return cmd_gen_corpus(gen, out);
    if (*obf_cmd) return cmd_obfuscate(inputs, common.seed, out);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const KTooLarge& e) {
    std::cerr << "KTooLarge: " << e.what() << "\n";
    return kUsage;
  } catch (const VersionMismatch& e) {
    std::cerr << "VersionMismatch: " << e.what() << "\n";
    return kFatal;
  } catch (const CorruptArtifact& e) {
    std::cerr << "CorruptArtifact: " << e.what() << "\n";
    return kFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFatal;
  }
  return kUsage;
}
