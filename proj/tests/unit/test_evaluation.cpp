#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "authorprint/corpus.hpp"
#include "authorprint/decouple.hpp"
#include "authorprint/errors.hpp"
#include "authorprint/metrics.hpp"
#include "authorprint/obfuscate.hpp"
#include "authorprint/pipeline.hpp"
#include "authorprint/random.hpp"
#include "authorprint/relation_graph.hpp"

using namespace authorprint;
using doctest::Approx;

TEST_CASE("classification metrics on small cases") {
  const std::vector<int> y = {0, 1, 2, 0, 1, 2};
  const auto all = classification_metrics(y, y);
  CHECK(all.accuracy == 1.0);
  CHECK(all.precision == 1.0);
  CHECK(all.recall == 1.0);
  CHECK(all.f1 == 1.0);

  const std::vector<int> swapped = {1, 0, 1, 0};
  const std::vector<int> truth = {0, 1, 0, 1};
  const auto none = classification_metrics(swapped, truth);
  CHECK(none.accuracy == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(none.confusion[0][1] == 2);
  CHECK(none.confusion[1][0] == 2);

  CHECK_THROWS_AS(classification_metrics(std::vector<int>{0}, std::vector<int>{0, 1}), LengthMismatch);
}

TEST_CASE("classification metrics agree with a confusion-count oracle") {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.between(1, 40);
    const int k = rng.between(2, 6);
    std::vector<int> p, y;
    for (int i = 0; i < n; ++i) {
      y.push_back(static_cast<int>(rng.below(k)));
      p.push_back(rng.chance(0.5) ? y.back() : static_cast<int>(rng.below(k)));
    }
    std::set<int> classes(y.begin(), y.end());
    classes.insert(p.begin(), p.end());
    double prec = 0, rec = 0, f1 = 0;
    int correct = 0;
    for (int i = 0; i < n; ++i) correct += p[i] == y[i];
    for (int c : classes) {
      int tp = 0, pred = 0, act = 0;
      for (int i = 0; i < n; ++i) {
        tp += p[i] == c && y[i] == c;
        pred += p[i] == c;
        act += y[i] == c;
      }
      const double pc = pred ? double(tp) / pred : 0.0;
      const double rc = act ? double(tp) / act : 0.0;
      prec += pc;
      rec += rc;
      f1 += pc + rc > 0 ? 2 * pc * rc / (pc + rc) : 0.0;
    }
    const auto m = classification_metrics(p, y);
    CHECK(m.accuracy == Approx(double(correct) / n));
    CHECK(m.precision == Approx(prec / classes.size()));
    CHECK(m.recall == Approx(rec / classes.size()));
    CHECK(m.f1 == Approx(f1 / classes.size()));
    long long total = 0;
    for (const auto& row : m.confusion)
      for (auto v : row) total += v;
    CHECK(total == n);
  }
}

namespace {

GeneratorOptions small_options(int authors, int apps, std::uint64_t seed = 3) {
  GeneratorOptions g;
  g.authors = authors;
  g.apps_per_author = apps;
  g.seed = seed;
  return g;
}

// Partition placing each package by the provenance of its classes.
AuthorshipPartition from_truth(const LabeledApp& app, bool everything_primary) {
  AuthorshipPartition part;
  std::map<std::string, int> module;
  for (const auto& c : app.bundle.classes) {
    const bool primary = app.truth.at(c.name) == Provenance::primary;
    module[c.package.str()] = everything_primary || primary ? 0 : 1;
  }
  for (const auto& [pkg, m] : module) {
    part.packages.emplace_back(pkg);
    part.module_of.push_back(m);
  }
  part.primary_module = 0;
  return part;
}

}  // namespace

TEST_CASE("decoupling metrics") {
  const auto corpus = generate_corpus(small_options(2, 4));
  std::vector<MetricsReport> reports;
  for (const auto& app : corpus) {
    const auto perfect = decoupling_metrics(app.bundle, from_truth(app, false), app.truth);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);

    long long primary = 0, total = 0;
    for (const auto& [name, p] : app.truth) {
      primary += p == Provenance::primary;
      ++total;
    }
    const auto lumped = decoupling_metrics(app.bundle, from_truth(app, true), app.truth);
    CHECK(lumped.recall == 1.0);
    CHECK(lumped.precision == Approx(double(primary) / total));
    CHECK(lumped.accuracy == Approx(double(primary) / total));
    reports.push_back(lumped);
  }
  const auto mean = mean_metrics(reports);
  double acc = 0;
  for (const auto& r : reports) acc += r.accuracy;
  CHECK(mean.accuracy == Approx(acc / reports.size()));
  CHECK(mean.recall == 1.0);

  // Half primary, half library, all called primary.
  LabeledApp half;
  half.bundle.app_id = "x";
  for (const char* pkg : {"com.a", "com.b"}) {
    ClassRecord c;
    c.name = std::string(pkg) + ".K";
    c.package = PackageName(pkg);
    half.bundle.classes.push_back(c);
  }
  half.truth = {{"com.a.K", Provenance::primary}, {"com.b.K", Provenance::library}};
  const auto r = decoupling_metrics(half.bundle, from_truth(half, true), half.truth);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 1.0);
}

TEST_CASE("least-apps filter") {
  auto corpus = generate_corpus(small_options(3, 4));
  corpus.resize(10);  // last author keeps 2 apps
  CHECK(least_apps_filter(corpus, 4).size() == 8);
  CHECK(least_apps_filter(corpus, 2).size() == 10);
  corpus[0].bundle.author_label.reset();
  CHECK(least_apps_filter(corpus, 1).size() == 9);
  CHECK(least_apps_filter(corpus, 4).size() == 4);
  CHECK_THROWS_AS(least_apps_filter(corpus, 5), EmptyResult);
}

TEST_CASE("stratified folds") {
  const auto corpus = generate_corpus(small_options(20, 10, 9));
  const auto folds = kfold_split(corpus, 10, 5);
  REQUIRE(folds.size() == 10);
  std::vector<int> seen(corpus.size(), 0);
  for (const auto& f : folds) {
    CHECK(f.train.size() + f.test.size() == corpus.size());
    std::set<std::size_t> train(f.train.begin(), f.train.end());
    std::map<std::string, int> per_author;
    for (auto t : f.test) {
      CHECK(train.count(t) == 0);
      ++seen[t];
      ++per_author[*corpus[t].bundle.author_label];
    }
    CHECK(per_author.size() == 20);
    for (const auto& [a, n] : per_author) CHECK(n == 1);
  }
  for (int s : seen) CHECK(s == 1);

  const auto twenty = generate_corpus(small_options(3, 20, 9));
  for (const auto& f : kfold_split(twenty, 10, 1)) {
    std::map<std::string, int> per_author;
    for (auto t : f.test) ++per_author[*twenty[t].bundle.author_label];
    for (const auto& [a, n] : per_author) CHECK(n == 2);
  }
  CHECK(kfold_split(twenty, 10, 1)[3].test == kfold_split(twenty, 10, 1)[3].test);

  CHECK_THROWS_AS(kfold_split(corpus, 11, 1), KTooLarge);
  CHECK_THROWS_AS(kfold_split(corpus, 1, 1), KTooLarge);
  CHECK(label_index(corpus).size() == 20);
}

TEST_CASE("generator") {
  SUBCASE("single module apps are all primary") {
    auto g = small_options(2, 1);
    g.min_modules = g.max_modules = 1;
    g.library_pool = 0;
    for (const auto& app : generate_corpus(g)) {
      for (const auto& [name, p] : app.truth) CHECK(p == Provenance::primary);
      CHECK(app.bundle.libraries.empty());
    }
  }
  SUBCASE("same seed, same bytes; other seed, other bytes") {
    const auto a = generate_corpus(small_options(3, 3, 11));
    const auto b = generate_corpus(small_options(3, 3, 11));
    const auto c = generate_corpus(small_options(3, 3, 12));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(write_bundle(a[i].bundle) == write_bundle(b[i].bundle));
      CHECK(write_truth(a[i].truth) == write_truth(b[i].truth));
    }
    CHECK(write_bundle(a[0].bundle) != write_bundle(c[0].bundle));
  }
  SUBCASE("bundles validate and truth covers every class") {
    auto g = small_options(4, 5, 2);
    g.min_modules = 3;
    g.max_modules = 6;
    std::set<std::string> ids;
    for (const auto& app : generate_corpus(g)) {
      CHECK(validate(app.bundle).ok());
      CHECK(ids.insert(app.bundle.app_id).second);
      CHECK(app.truth.size() == app.bundle.classes.size());
      for (const auto& c : app.bundle.classes) CHECK(app.truth.count(c.name) == 1);
    }
  }
  SUBCASE("primary packages sit on one circle") {
    for (const auto& app : generate_corpus(small_options(3, 4, 6))) {
      DecoupleConfig cfg;
      cfg.mode = PairWeightMode::blend(0.2);
      const auto part = decouple(app.bundle, cfg);
      std::set<std::string> primary_pkgs;
      for (const auto& c : app.bundle.classes) {
        if (app.truth.at(c.name) == Provenance::primary) primary_pkgs.insert(c.package.str());
      }
      // The three guaranteed-circle packages aggregate into one node.
      std::set<int> nodes;
      for (const auto& pkg : primary_pkgs) {
        const int m = part.module_of_package(pkg);
        CHECK(m >= 0);
        nodes.insert(m);
      }
      CHECK(nodes.size() == 1);
    }
  }
}

TEST_CASE("truth sidecar round trip") {
  for (const auto& app : generate_corpus(small_options(2, 2))) {
    const auto text = write_truth(app.truth);
    CHECK(parse_truth(text) == app.truth);
    CHECK(write_truth(parse_truth(text)) == text);
  }
}

TEST_CASE("obfuscation") {
  Rng rng(4);
  for (const auto& app : generate_corpus(small_options(2, 3, 8))) {
    RenameMap renames;
    const auto obf = obfuscate_bundle(app.bundle, rng.next(), &renames);
    CHECK(validate(obf).ok());
    REQUIRE(obf.classes.size() == app.bundle.classes.size());
    CHECK(obf.packages == app.bundle.packages);
    CHECK(obf.relations == app.bundle.relations);
    CHECK(obf.manifest.uses_features == app.bundle.manifest.uses_features);

    std::set<std::string> renamed;
    for (std::size_t i = 0; i < obf.classes.size(); ++i) {
      const auto& before = app.bundle.classes[i];
      const auto& after = obf.classes[i];
      CHECK(after.name == renames.classes.at(before.name));
      CHECK(after.package == before.package);
      CHECK(renamed.insert(after.name).second);
      if (before.superclass) {
        const auto it = renames.classes.find(*before.superclass);
        CHECK(*after.superclass == (it == renames.classes.end() ? *before.superclass : it->second));
      }
      for (std::size_t f = 0; f < before.fields.size(); ++f) {
        CHECK(after.fields[f] == renames.identifiers.at(before.fields[f]));
      }
      // survivors keep order, api calls and instructions
      std::size_t j = 0;
      for (const auto& m : before.methods) {
        if (!m.overrides_framework && m.api_calls.empty()) continue;
        REQUIRE(j < after.methods.size());
        const auto& a = after.methods[j++];
        CHECK(a.api_calls == m.api_calls);
        CHECK(a.instructions == m.instructions);
        CHECK(a.name == (m.overrides_framework ? m.name : renames.identifiers.at(m.name)));
      }
      CHECK(j == after.methods.size());
    }
    CHECK(*obf.manifest.main_activity == renames.classes.at(*app.bundle.manifest.main_activity));

    const auto g1 = build_graph(app.bundle, default_framework_prefixes());
    const auto g2 = build_graph(obf, default_framework_prefixes());
    CHECK(g1.edges() == g2.edges());
    CHECK(write_bundle(obfuscate_bundle(app.bundle, 5)) == write_bundle(obfuscate_bundle(app.bundle, 5)));
  }
}

namespace {

PipelineOptions quick_pipeline() {
  PipelineOptions o;
  o.decouple.mode = PairWeightMode::blend(0.2);
  o.embedding.min_count = 3;
  o.embedding.dimension = 20;
  o.forest.trees = 30;
  o.seed = 2;
  return o;
}

}  // namespace

TEST_CASE("pipeline recognizes its own training apps") {
  const auto corpus = generate_corpus(small_options(3, 5, 21));
  std::vector<AppBundle> bundles;
  for (const auto& a : corpus) bundles.push_back(a.bundle);
  const auto model = train_model(bundles, quick_pipeline());
  CHECK(model.labels == label_index(corpus));
  const auto preds = predict_bundles(model, bundles);
  int ok = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) ok += preds[i].label == *bundles[i].author_label;
  CHECK(ok >= static_cast<int>(bundles.size()) - 1);
}

TEST_CASE("evaluation is deterministic") {
  const auto corpus = generate_corpus(small_options(3, 4, 22));
  EvaluationOptions e;
  e.k = 2;
  e.classifiers = {ClassifierKind::random_forest, ClassifierKind::logreg};
  e.obfuscate_test = true;
  const auto a = evaluate(corpus, quick_pipeline(), e);
  auto o = quick_pipeline();
  o.jobs = 3;
  const auto b = evaluate(corpus, o, e);
  REQUIRE(a.results.size() == 2);
  CHECK(a.truth == b.truth);
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    CHECK(a.results[i].predictions == b.results[i].predictions);
    CHECK(a.results[i].obfuscated_predictions == b.results[i].obfuscated_predictions);
    CHECK(a.results[i].pooled.accuracy == b.results[i].pooled.accuracy);
    CHECK(a.results[i].folds.size() == 2);
    CHECK(a.results[i].obfuscated_pooled.has_value());
  }
}
