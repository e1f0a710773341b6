#pragma once

// Skip-gram token embeddings trained with negative sampling, and the per-app
// fingerprint assembled from them.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "authorprint/stylometry.hpp"
#include "authorprint/tfidf.hpp"

namespace authorprint {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kMaxFingerprintColumns = 1000;

struct EmbeddingOptions {
  int window = 3;
  int min_count = 10;
  int dimension = 100;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
};

struct EmbeddingTable {
  std::vector<std::string> tokens;  // ascending; row i of `vectors`
  RowMatrix vectors;                // input (token) vectors
  RowMatrix context;                // output vectors; empty after deserialization
  std::vector<long long> counts;
  EmbeddingOptions options;
  std::vector<double> epoch_loss;  // mean loss per epoch

  std::unordered_map<std::string, Eigen::Index> lookup;  // token -> row

  std::optional<Eigen::Index> find(std::string_view token) const;
  Eigen::Index dimension() const { return vectors.cols(); }
};

// Restores the token lookup after `tokens` was filled externally.
void rebuild_index(EmbeddingTable& table);

// Loss and gradients of one (center, context) pair with K negative context
// vectors (rows of `negatives`):
//   L = -log s(w . c) - sum_k log s(-w . n_k).
struct SgnsGradient {
  double loss = 0.0;
  Eigen::VectorXd center;
  Eigen::VectorXd context;
  Eigen::MatrixXd negatives;
};
SgnsGradient sgns_loss_gradient(const Eigen::VectorXd& center, const Eigen::VectorXd& context,
                                const Eigen::MatrixXd& negatives);

// Tokens seen fewer than min_count times are dropped before training; every
// remaining token pairs with each neighbor up to `window` positions away.
// Deterministic given options.seed. Throws EmptyVocabulary when no token
// reaches min_count.
EmbeddingTable train_embedding(std::span<const std::vector<std::string>> corpus,
                               const EmbeddingOptions& options = {});

// Score of `context_token` as a context of `center_token` (w . c).
double context_score(const EmbeddingTable& table, std::string_view center_token,
                     std::string_view context_token);

struct FingerprintLayout {
  int block = 0;
  std::array<int, kCategoryCount> offsets{};
  int length = 0;
};
FingerprintLayout fingerprint_layout(int dimension);

// Concatenates one block per category. A block is the tf-idf-weighted mean
// of the vectors of the profile's selected n-grams, an n-gram's vector being
// the mean of its in-vocabulary tokens. Empty categories give zero blocks.
// `vocabs` holds one vocabulary per category in category order. Throws
// DimensionOverflow when the vector would exceed 1000 columns.
Eigen::VectorXd fingerprint(const StyleProfile& profile,
                            std::span<const TfidfVocabulary> vocabs,
                            const EmbeddingTable& embedding);

}  // namespace authorprint
