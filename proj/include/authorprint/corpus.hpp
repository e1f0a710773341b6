#pragma once

// Labeled app corpora: synthetic generation with class-level provenance,
// on-disk layout, author filtering and stratified folds.

#include <cstdint>
#include <string>
#include <vector>

#include "authorprint/bundle.hpp"
#include "authorprint/metrics.hpp"

namespace authorprint {

struct LabeledApp {
  AppBundle bundle;
  GroundTruth truth;
};

struct GeneratorOptions {
  int authors = 5;
  int apps_per_author = 10;
  // Total modules per app, the primary one included.
  int min_modules = 1;
  int max_modules = 5;
  int library_pool = 10;
  // Probability that a style choice comes from the author's own habits
  // rather than the shared generic pool.
  double distinctiveness = 0.8;
  // How many idioms of each shared pool an author favors; the fewer, the
  // more concentrated the habits.
  int favorite_idioms = 3;
  // Probability that an included library is listed in the bundle's known
  // library prefixes.
  double list_library_probability = 0.7;
  // Probability that an included library comes from the author's preferred
  // set instead of the whole pool.
  double library_preference = 0.3;
  // Upper bound on the call count of each primary-to-library relation.
  // Intra-module relations carry 4-25 calls, so this sets how loosely an app
  // is coupled to the libraries it uses.
  int max_library_calls = 3;
  std::uint64_t seed = 42;
};

// One primary module per app written in its author's style, plus shared
// library modules drawn from a pool common to all authors. Apps are ordered
// by author, then app index. Deterministic per seed.
std::vector<LabeledApp> generate_corpus(const GeneratorOptions& options);

// <dir>/<app_id>.bundle.json and <dir>/<app_id>.truth.json per app.
void write_corpus(const std::vector<LabeledApp>& corpus, const std::string& dir);
std::string write_truth(const GroundTruth& truth);
GroundTruth parse_truth(std::string_view document);

struct LoadedCorpus {
  std::vector<LabeledApp> apps;  // sorted by app_id; truth empty when no sidecar
  std::vector<std::string> failures;  // "path: reason"
};
// Loads every *.bundle.json under dir; unreadable files are reported, not fatal.
LoadedCorpus load_corpus(const std::string& dir);

// Keeps only authors with at least `min_apps` apps. Throws EmptyResult when
// nothing remains; unlabeled apps are always dropped.
std::vector<LabeledApp> least_apps_filter(const std::vector<LabeledApp>& corpus, int min_apps);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified by author label: each author's apps are shuffled and dealt
// round-robin over the folds. Throws KTooLarge when k < 2 or some author has
// fewer than k apps.
std::vector<Fold> kfold_split(const std::vector<LabeledApp>& corpus, int k, std::uint64_t seed);

// Sorted distinct author labels; class id = position.
std::vector<std::string> label_index(const std::vector<LabeledApp>& corpus);

}  // namespace authorprint
