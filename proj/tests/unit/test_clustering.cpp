#include <doctest.h>

#include <cmath>
#include <set>

#include "authorprint/affinity.hpp"
#include "authorprint/corpus.hpp"
#include "authorprint/decouple.hpp"
#include "authorprint/errors.hpp"
#include "authorprint/louvain.hpp"
#include "authorprint/metrics.hpp"
#include "oracles.hpp"

using namespace authorprint;
using doctest::Approx;

namespace {

const double inf = kUnreachable;

Eigen::MatrixXd random_direct(Rng& rng, int n, double density) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, inf);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i != j && rng.chance(density)) d(i, j) = 1.0 / rng.between(1, 9);
    }
  }
  return d;
}

Eigen::MatrixXd random_symmetric(Rng& rng, int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.chance(0.6)) a(i, j) = a(j, i) = rng.uniform();
    }
  }
  return a;
}

std::vector<int> singletons(int n) {
  std::vector<int> c(n);
  for (int i = 0; i < n; ++i) c[i] = i;
  return c;
}

}  // namespace

TEST_CASE("semantic distance") {
  CHECK(semantic_distance({2, 1, 0}) == Approx(1.0 / 3));
  CHECK(semantic_distance({1, 1, 1}) == Approx(1.0 / 3));
  CHECK(semantic_distance({0, 0, 0}) == inf);
}

TEST_CASE("floyd closure") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(3, 3, inf);
  d.diagonal().setZero();
  d(0, 1) = 0.5;
  d(1, 2) = 1.0 / 3;
  const auto c = floyd_closure(d);
  CHECK(c(0, 2) == Approx(5.0 / 6));
  CHECK(c(2, 0) == inf);
  CHECK(c(1, 0) == inf);
}

TEST_CASE("floyd closure equals simple-path enumeration on random 6-node graphs") {
  Rng rng(6);
  for (int t = 0; t < 300; ++t) {
    const int n = rng.between(1, 6);
    const auto d = random_direct(rng, n, rng.uniform(0.1, 0.7));
    const auto closed = floyd_closure(d);
    const auto oracle_d = oracle::path_enumeration(d);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (std::isinf(oracle_d(i, j))) {
          CHECK(std::isinf(closed(i, j)));
        } else {
          CHECK(closed(i, j) == Approx(oracle_d(i, j)).epsilon(1e-12));
        }
        for (int k = 0; k < n; ++k) CHECK(closed(i, j) <= closed(i, k) + closed(k, j) + 1e-12);
      }
    }
  }
}

TEST_CASE("correlation") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, inf,
       3, 0, inf,
       inf, 1.0 / 3, 0;
  CHECK(correlation(d, 0, 1) == Approx(std::exp(-1.0)));
  CHECK(correlation(d, 0, 1) == Approx(0.367879).epsilon(1e-6));
  CHECK(correlation(d, 1, 2) == Approx(0.716531).epsilon(1e-6));
  CHECK(correlation(d, 0, 2) == 0.0);
  CHECK(correlation(d, 1, 0) == correlation(d, 0, 1));
}

TEST_CASE("structural similarity") {
  CHECK(structural_similarity(PackageName("com.a"), PackageName("org.b")) == Approx(1.0));
  const PackageName ext("cat.mvmike.minimalcalendarwidget.external");
  const PackageName status("cat.mvmike.minimalcalendarwidget.status");
  CHECK(common_parent_depth(ext, status) == 4);
  CHECK(structural_similarity(ext, status) == Approx(25.0 / 12));
  CHECK(structural_similarity(ext, status) == Approx(2.0833).epsilon(1e-4));
  CHECK(structural_similarity(PackageName("cat.mvmike"), PackageName("cat.mvmike.x")) == Approx(11.0 / 6));
  CHECK(harmonic_number(1) == 1.0);
  // strictly increasing with depth
  CHECK(structural_similarity(PackageName("a.b.c.x"), PackageName("a.b.c.y")) >
        structural_similarity(PackageName("a.b.x"), PackageName("a.b.y")));
  // without the root convention the first segment sits at depth 1
  CHECK(common_parent_depth(ext, status, false) == 3);
}

TEST_CASE("pair weight and normalization") {
  CHECK(pair_weight(0.2, 0.9, PairWeightMode::max_mode()) == 0.9);
  CHECK(pair_weight(0.2, 0.9, PairWeightMode::blend(1.0)) == 0.2);
  CHECK(pair_weight(0.2, 0.9, PairWeightMode::blend(0.0)) == 0.9);
  CHECK(pair_weight(0.2, 0.9, PairWeightMode::blend(0.5)) == Approx(0.55));
  CHECK_THROWS_AS(PairWeightMode::blend(1.5), AlphaOutOfRange);
  CHECK_THROWS_AS(PairWeightMode::blend(-0.1), AlphaOutOfRange);

  Eigen::Vector3d raw(0.2, 0.5, 0.8);
  const auto n = min_max_normalize(raw);
  CHECK(n(0) == 0.0);
  CHECK(n(1) == Approx(0.5));
  CHECK(n(2) == 1.0);
  CHECK(min_max_normalize(Eigen::Vector3d(4, 4, 4)).isZero());
}

TEST_CASE("affinity matrices are symmetric and bounded") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto b = oracle::random_bundle(rng, rng.between(2, 10));
    const auto g = build_graph(b, default_framework_prefixes());
    const auto closed = floyd_closure(direct_distances(g));
    for (const auto& mode : {PairWeightMode::max_mode(), PairWeightMode::blend(0.3)}) {
      const auto a = compute_affinities(g, closed, mode);
      CHECK(a.sim.isApprox(a.sim.transpose()));
      CHECK(a.corr.isApprox(a.corr.transpose()));
      CHECK(a.sim.minCoeff() >= 0.0);
      CHECK(a.sim.maxCoeff() <= 1.0);
      CHECK(a.corr.maxCoeff() < 1.0);
      CHECK(a.sim.diagonal().isZero());
      if (mode.kind == PairWeightMode::Kind::max && g.size() > 2) {
        // max mode dominates both normalized inputs
        std::vector<double> corr, struc;
        for (Eigen::Index i = 0; i < a.sim.rows(); ++i)
          for (Eigen::Index j = i + 1; j < a.sim.cols(); ++j) {
            corr.push_back(a.corr(i, j));
            struc.push_back(a.struc(i, j));
          }
        const auto nc = min_max_normalize(Eigen::Map<Eigen::VectorXd>(corr.data(), corr.size()));
        const auto ns = min_max_normalize(Eigen::Map<Eigen::VectorXd>(struc.data(), struc.size()));
        std::size_t k = 0;
        for (Eigen::Index i = 0; i < a.sim.rows(); ++i)
          for (Eigen::Index j = i + 1; j < a.sim.cols(); ++j, ++k) {
            CHECK(a.sim(i, j) >= nc(k) - 1e-12);
            CHECK(a.sim(i, j) >= ns(k) - 1e-12);
          }
      }
    }
  }
}

TEST_CASE("modularity matches the pairwise definition and survives coarsening") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.between(2, 9);
    const auto a = random_symmetric(rng, n);
    std::vector<int> c(n);
    for (auto& x : c) x = static_cast<int>(rng.below(3));
    CHECK(modularity(a, c) == Approx(oracle::modularity(a, c)).epsilon(1e-12));
    auto labels = c;
    const int k = relabel_in_order(labels);
    const auto coarse = coarsen(a, labels, k);
    CHECK(modularity(coarse, singletons(k)) == Approx(modularity(a, labels)).epsilon(1e-12));
  }
}

TEST_CASE("two cliques joined by a weak edge split in two") {
  const auto a = oracle::two_cliques(3, 3, 0.05);
  const auto r = louvain(a, singletons(6));
  CHECK(r.community == std::vector<int>{0, 0, 0, 1, 1, 1});
  CHECK(r.modularity == Approx(oracle::best_modularity(a).q).epsilon(1e-12));
}

TEST_CASE("Louvain reaches the exhaustive optimum on the two-clique family up to 8 nodes") {
  for (int p = 1; p <= 7; ++p) {
    for (int q = 1; p + q <= 8; ++q) {
      for (double bridge : {0.0, 0.05, 0.3, 1.0}) {
        if (p == 1 && q == 1 && bridge == 0.0) continue;
        const auto a = oracle::two_cliques(p, q, bridge);
        const auto best = oracle::best_modularity(a);
        const auto r = louvain(a, singletons(p + q));
        INFO("p=" << p << " q=" << q << " bridge=" << bridge);
        CHECK(r.modularity == Approx(best.q).epsilon(1e-9));
        CHECK(r.modularity == Approx(oracle::modularity(a, r.community)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("degenerate weight matrices") {
  const auto zero = Eigen::MatrixXd::Zero(5, 5);
  const auto r = louvain(zero, singletons(5));
  CHECK(r.community == singletons(5));
  CHECK(r.modularity == 0.0);

  for (int n = 2; n <= 8; ++n) {
    Eigen::MatrixXd full = Eigen::MatrixXd::Ones(n, n);
    full.diagonal().setZero();
    const auto c = louvain(full, singletons(n));
    CHECK(std::set<int>(c.community.begin(), c.community.end()).size() == 1);
    CHECK(c.modularity == Approx(oracle::best_modularity(full).q).epsilon(1e-12));
  }
}

TEST_CASE("Q never decreases across levels and same-author packages stay together") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.between(2, 12);
    const auto a = random_symmetric(rng, n);
    std::vector<int> phi(n);
    for (auto& x : phi) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const auto r = louvain_partition(a, phi);
    for (std::size_t l = 1; l < r.level_modularity.size(); ++l) {
      CHECK(r.level_modularity[l] >= r.level_modularity[l - 1] - 1e-12);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (phi[i] == phi[j]) CHECK(r.community[i] == r.community[j]);
  }
}

TEST_CASE("primary module selection") {
  AuthorshipPartition p;
  p.packages = {PackageName("a"), PackageName("b"), PackageName("c")};
  p.module_of = {0, 1, 2};
  ManifestInfo m;
  m.main_activity = "c.Main";
  CHECK(select_primary_module(p, m) == 2);
  m.main_activity.reset();
  CHECK_THROWS_AS(select_primary_module(p, m), NoMainActivity);
  m.main_activity = "android.app.Main";
  CHECK_THROWS_AS(select_primary_module(p, m), NoMainActivity);
}

TEST_CASE("single-package app is one primary module") {
  AppBundle b;
  b.app_id = "one";
  b.packages = {PackageName("com.one")};
  b.classes.push_back({"com.one.Main", PackageName("com.one"), std::nullopt, {}, {}, ComponentKind::activity});
  b.manifest.components = {{ComponentKind::activity, "com.one.Main"}};
  b.manifest.main_activity = "com.one.Main";
  const auto p = decouple(b);
  CHECK(p.module_count() == 1);
  CHECK(p.primary_module == 0);
  CHECK(p.in_primary("com.one"));
}

TEST_CASE("a loosely attached library prefix group stays outside the primary module") {
  AppBundle b;
  b.app_id = "lib";
  for (const auto* p : {"com.me.app", "com.me.app.ui", "com.me.app.net", "org.lib", "org.lib.core", "org.lib.io"}) {
    b.packages.emplace_back(p);
    b.classes.push_back({std::string(p) + ".K", PackageName(p), std::nullopt, {}, {}, std::nullopt});
  }
  auto rel = [&](const char* f, const char* t, long long n) {
    b.relations.push_back({PackageName(f), PackageName(t), RelationKind::call, n});
  };
  rel("com.me.app", "com.me.app.ui", 12);
  rel("com.me.app.ui", "com.me.app.net", 9);
  rel("com.me.app.net", "com.me.app", 7);
  rel("org.lib", "org.lib.core", 15);
  rel("org.lib.core", "org.lib.io", 11);
  rel("com.me.app.net", "org.lib", 1);
  b.libraries = {"org.lib"};
  b.manifest.components = {{ComponentKind::activity, "com.me.app.K"}};
  b.manifest.main_activity = "com.me.app.K";
  REQUIRE(validate(b).ok());
  for (const auto& mode : {PairWeightMode::max_mode(), PairWeightMode::blend(0.2)}) {
    DecoupleConfig config;
    config.mode = mode;
    const auto p = decouple(b, config);
    CHECK(p.in_primary("com.me.app.ui"));
    CHECK(!p.in_primary("org.lib"));
    CHECK(!p.in_primary("org.lib.core"));
    CHECK(p.module_of_package("org.lib") == p.module_of_package("org.lib.io"));
  }
}

TEST_CASE("without a main activity the largest module is primary") {
  AppBundle b;
  b.app_id = "nomain";
  b.packages = {PackageName("a.x"), PackageName("b.y")};
  b.classes.push_back({"a.x.K", PackageName("a.x"), std::nullopt, {}, {MethodRecord{"f", {}, {}, false}}, std::nullopt});
  b.classes.push_back({"b.y.K", PackageName("b.y"), std::nullopt, {},
                       {MethodRecord{"f", {}, {}, false}, MethodRecord{"g", {}, {}, false}}, std::nullopt});
  const auto p = decouple(b);
  CHECK(!p.primary_from_main_activity);
  CHECK(p.in_primary("b.y"));
}

TEST_CASE("generated three-module apps are recovered") {
  GeneratorOptions opt;
  opt.authors = 4;
  opt.apps_per_author = 5;
  opt.min_modules = 3;
  opt.max_modules = 3;
  opt.seed = 1234;
  const auto corpus = generate_corpus(opt);
  DecoupleConfig config;
  config.mode = PairWeightMode::blend(0.2);
  int exact = 0;
  std::vector<MetricsReport> reports;
  for (const auto& app : corpus) {
    const auto p = decouple(app.bundle, config);
    const auto m = decoupling_metrics(app.bundle, p, app.truth);
    reports.push_back(m);
    exact += m.accuracy == 1.0;
    // determinism
    const auto again = decouple(app.bundle, config);
    CHECK(again.module_of == p.module_of);
    CHECK(again.modularity == p.modularity);
  }
  MESSAGE("exactly recovered: " << exact << " / " << corpus.size());
  CHECK(exact * 10 >= static_cast<int>(corpus.size()) * 8);
  CHECK(mean_metrics(reports).accuracy >= 0.95);
}
