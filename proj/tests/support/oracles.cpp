#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace oracle {

using namespace authorprint;

std::vector<int> canonical(const std::vector<int>& group_of) {
  std::map<int, int> first;
  for (std::size_t i = 0; i < group_of.size(); ++i) first.emplace(group_of[i], static_cast<int>(i));
  std::vector<int> out;
  for (int g : group_of) out.push_back(first[g]);
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

bool under(const std::string& name, const std::string& prefix) {
  return name == prefix || (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0 &&
                            name[prefix.size()] == '.');
}

}  // namespace

std::vector<int> aggregation_partition(const PackageRelationGraph& graph,
                                       const std::vector<std::string>& libraries,
                                       const ManifestInfo& manifest) {
  const std::size_t n = graph.size();
  UnionFind uf(n);

  std::vector<std::string> prefixes;
  for (auto p : libraries) {
    while (!p.empty() && p.back() == '.') p.pop_back();
    prefixes.push_back(p);
  }
  std::map<std::string, int> first_of_library;
  for (std::size_t i = 0; i < n; ++i) {
    std::string best;
    bool found = false;
    for (const auto& p : prefixes) {
      if (under(graph.node(i).str(), p) && (!found || p.size() > best.size())) {
        best = p;
        found = true;
      }
    }
    if (!found) continue;
    auto [it, inserted] = first_of_library.emplace(best, static_cast<int>(i));
    if (!inserted) uf.join(it->second, static_cast<int>(i));
  }

  int host = -1;
  for (const auto& c : manifest.components) {
    const auto dot = c.name.rfind('.');
    const auto pkg = dot == std::string::npos ? std::string() : c.name.substr(0, dot);
    for (std::size_t i = 0; i < n; ++i) {
      if (graph.node(i).str() != pkg) continue;
      if (host < 0) host = static_cast<int>(i);
      else uf.join(host, static_cast<int>(i));
    }
  }

  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (const auto& [key, count] : graph.edges()) {
      reach[uf.find(static_cast<int>(key.from))][uf.find(static_cast<int>(key.to))] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (reach[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (reach[k][j]) reach[i][j] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (reach[i][j] && reach[j][i]) changed |= uf.join(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }

  std::vector<int> group(n);
  for (std::size_t i = 0; i < n; ++i) group[i] = uf.find(static_cast<int>(i));
  return canonical(group);
}

Eigen::MatrixXd path_enumeration(const Eigen::MatrixXd& direct) {
  const auto n = direct.rows();
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best = Eigen::MatrixXd::Constant(n, n, inf);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<void(Eigen::Index, Eigen::Index, double)> walk = [&](Eigen::Index s, Eigen::Index v, double len) {
    best(s, v) = std::min(best(s, v), len);
    for (Eigen::Index w = 0; w < n; ++w) {
      if (used[w] || w == v || !std::isfinite(direct(v, w))) continue;
      used[w] = 1;
      walk(s, w, len + direct(v, w));
      used[w] = 0;
    }
  };
  for (Eigen::Index s = 0; s < n; ++s) {
    used.assign(static_cast<std::size_t>(n), 0);
    used[s] = 1;
    walk(s, s, 0.0);
  }
  return best;
}

double modularity(const Eigen::MatrixXd& a, const std::vector<int>& community) {
  const double two_m = a.sum();
  if (two_m <= 0.0) return 0.0;
  double q = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (community[i] != community[j]) continue;
      q += a(i, j) - a.row(i).sum() * a.row(j).sum() / two_m;
    }
  }
  return q / two_m;
}

BestPartition best_modularity(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  BestPartition best;
  best.q = -std::numeric_limits<double>::infinity();
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      const double q = modularity(a, rgs);
      if (q > best.q + 1e-12) {
        best.q = q;
        best.community = rgs;
      }
      return;
    }
    for (int c = 0; c <= used; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) return {0.0, {}};
  rgs[0] = 0;
  rec(1, 1);
  return best;
}

TfidfSelection tfidf_selection(const std::vector<std::vector<std::string>>& corpus, int min_n, int max_n,
                               int min_df, int max_features) {
  std::map<std::string, long long> total;
  std::map<std::string, std::set<std::size_t>> docs;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& seq = corpus[d];
    for (int n = min_n; n <= max_n; ++n) {
      for (std::size_t i = 0; i + n <= seq.size(); ++i) {
        std::string key = seq[i];
        for (int k = 1; k < n; ++k) key += " " + seq[i + k];
        ++total[key];
        docs[key].insert(d);
      }
    }
  }
  const double n_docs = static_cast<double>(corpus.size());
  std::vector<std::tuple<double, std::string, double, int>> ranked;
  for (const auto& [key, count] : total) {
    const int df = static_cast<int>(docs[key].size());
    if (df < min_df) continue;
    const double idf = std::log((1.0 + n_docs) / (1.0 + df)) + 1.0;
    ranked.emplace_back(-(idf * static_cast<double>(count)), key, idf, df);
  }
  std::sort(ranked.begin(), ranked.end());
  TfidfSelection out;
  for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(max_features); ++i) {
    out.selected.push_back(std::get<1>(ranked[i]));
    out.idf.push_back(std::get<2>(ranked[i]));
    out.df.push_back(std::get<3>(ranked[i]));
  }
  return out;
}

AppBundle random_bundle(Rng& rng, int packages, bool with_libraries) {
  static const std::vector<std::string> tops = {"com", "org", "io"};
  static const std::vector<std::string> mids = {"alpha", "beta", "gamma"};
  static const std::vector<std::string> leaves = {"ui", "net", "data", "core", "util"};
  static const std::vector<std::string> ops = {"const/4", "invoke-virtual", "move-result", "return-void",
                                               "iget", "if-eqz", "goto"};
  static const std::vector<std::string> apis = {"android.widget.TextView.setText",
                                                "android.app.Activity.findViewById",
                                                "java.lang.String.format", "android.util.Log.d"};
  static const std::vector<std::string> odd = {"camera", "gps", "wifi\"direct\"", "caf\xC3\xA9", "a\\b"};

  AppBundle b;
  b.app_id = "app-" + std::to_string(rng.below(100000));
  if (rng.chance(0.7)) b.author_label = "dev-" + std::to_string(rng.below(5));

  std::set<std::string> names;
  while (static_cast<int>(names.size()) < packages) {
    std::string p = rng.pick(tops) + "." + rng.pick(mids);
    if (rng.chance(0.7)) p += "." + rng.pick(leaves);
    if (rng.chance(0.3)) p += "." + rng.pick(leaves);
    names.insert(p);
  }
  std::vector<std::string> pkgs(names.begin(), names.end());
  rng.shuffle(pkgs);
  if (rng.chance(0.3)) pkgs.push_back("android.app");
  for (const auto& p : pkgs) b.packages.emplace_back(p);

  std::vector<std::string> class_names;
  for (const auto& p : pkgs) {
    const int classes = rng.between(1, 3);
    for (int c = 0; c < classes; ++c) {
      ClassRecord cr;
      cr.name = p + ".K" + std::to_string(c) + (rng.chance(0.2) ? "$Inner" : "");
      cr.package = PackageName(p);
      if (!class_names.empty() && rng.chance(0.4)) cr.superclass = rng.pick(class_names);
      else if (rng.chance(0.2)) cr.superclass = "android.app.Activity";
      for (int f = rng.between(0, 3); f > 0; --f) cr.fields.push_back("m" + rng.pick(mids) + rng.pick(odd));
      for (int m = rng.between(0, 3); m > 0; --m) {
        MethodRecord mr;
        mr.name = rng.chance(0.2) ? "onCreate" : "do" + rng.pick(leaves) + std::to_string(m);
        mr.overrides_framework = mr.name == "onCreate";
        for (int t = rng.between(0, 6); t > 0; --t) mr.instructions.push_back(rng.pick(ops));
        for (int t = rng.between(0, 3); t > 0; --t) mr.api_calls.push_back(rng.pick(apis));
        cr.methods.push_back(std::move(mr));
      }
      class_names.push_back(cr.name);
      b.classes.push_back(std::move(cr));
    }
  }

  const int relations = rng.between(0, packages * 2);
  for (int r = 0; r < relations; ++r) {
    RelationRecord rr;
    rr.from_pkg = b.packages[rng.below(b.packages.size())];
    rr.to_pkg = b.packages[rng.below(b.packages.size())];
    rr.kind = static_cast<RelationKind>(rng.below(3));
    rr.count = rng.between(1, 5);
    b.relations.push_back(std::move(rr));
  }

  static const std::vector<ComponentKind> kinds = {ComponentKind::activity, ComponentKind::service,
                                                   ComponentKind::receiver, ComponentKind::provider};
  for (int c = rng.between(0, 3); c > 0; --c) {
    const auto kind = rng.pick(kinds);
    const auto& name = rng.pick(class_names);
    b.manifest.components.push_back({kind, name});
    if (kind == ComponentKind::activity && !b.manifest.main_activity && rng.chance(0.8)) {
      b.manifest.main_activity = name;
    }
  }
  for (int f = rng.between(0, 3); f > 0; --f) b.manifest.uses_features.push_back(rng.pick(odd));
  if (with_libraries) {
    for (int l = rng.between(0, 2); l > 0; --l) {
      b.libraries.push_back(rng.pick(tops) + "." + rng.pick(mids) + (rng.chance(0.5) ? "" : "." + rng.pick(leaves)));
    }
  }
  return b;
}

Eigen::MatrixXd two_cliques(int p, int q, double bridge) {
  const int n = p + q;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && ((i < p) == (j < p))) a(i, j) = 1.0;
    }
  }
  a(p - 1, p) = a(p, p - 1) = bridge;
  return a;
}

}  // namespace oracle
