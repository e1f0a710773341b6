#include "authorprint/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "authorprint/errors.hpp"
#include "authorprint/random.hpp"

namespace authorprint {

std::optional<Eigen::Index> EmbeddingTable::find(std::string_view token) const {
  auto it = lookup.find(std::string(token));
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

void rebuild_index(EmbeddingTable& table) {
  table.lookup.clear();
  for (std::size_t i = 0; i < table.tokens.size(); ++i) {
    table.lookup.emplace(table.tokens[i], static_cast<Eigen::Index>(i));
  }
}

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log(sigmoid(x)) without overflow.
double neg_log_sigmoid(double x) {
  return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

}  // namespace

SgnsGradient sgns_loss_gradient(const Eigen::VectorXd& center, const Eigen::VectorXd& context,
                                const Eigen::MatrixXd& negatives) {
  SgnsGradient g;
  const double pos = center.dot(context);
  g.loss = neg_log_sigmoid(pos);
  const double pos_coeff = sigmoid(pos) - 1.0;
  g.center = pos_coeff * context;
  g.context = pos_coeff * center;
  g.negatives.resize(negatives.rows(), negatives.cols());
  for (Eigen::Index k = 0; k < negatives.rows(); ++k) {
    const double s = center.dot(negatives.row(k).transpose());
    g.loss += neg_log_sigmoid(-s);
    const double coeff = sigmoid(s);
    g.center += coeff * negatives.row(k).transpose();
    g.negatives.row(k) = coeff * center.transpose();
  }
  return g;
}

EmbeddingTable train_embedding(std::span<const std::vector<std::string>> corpus,
                               const EmbeddingOptions& options) {
  std::map<std::string, long long> frequency;
  for (const auto& sentence : corpus) {
    for (const auto& t : sentence) ++frequency[t];
  }

  EmbeddingTable table;
  table.options = options;
  for (const auto& [token, count] : frequency) {
    if (count >= options.min_count) {
      table.tokens.push_back(token);
      table.counts.push_back(count);
    }
  }
  if (table.tokens.empty()) {
    throw EmptyVocabulary("no token occurs at least " + std::to_string(options.min_count) +
                          " times");
  }
  rebuild_index(table);

  const auto vocab = static_cast<Eigen::Index>(table.tokens.size());
  const int d = options.dimension;
  Rng rng(options.seed);
  table.vectors.resize(vocab, d);
  for (Eigen::Index i = 0; i < vocab; ++i) {
    for (int j = 0; j < d; ++j) table.vectors(i, j) = (rng.uniform() - 0.5) / d;
  }
  table.context = RowMatrix::Zero(vocab, d);

  // Unigram^0.75 noise distribution.
  std::vector<double> cumulative(table.counts.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < table.counts.size(); ++i) {
    acc += std::pow(static_cast<double>(table.counts[i]), 0.75);
    cumulative[i] = acc;
  }
  auto draw_negative = [&]() {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<Eigen::Index>(it - cumulative.begin());
  };

  std::vector<std::vector<Eigen::Index>> sentences;
  long long total_pairs = 0;
  for (const auto& sentence : corpus) {
    std::vector<Eigen::Index> ids;
    for (const auto& t : sentence) {
      if (auto id = table.find(t)) ids.push_back(*id);
    }
    const auto len = static_cast<long long>(ids.size());
    for (long long i = 0; i < len; ++i) {
      total_pairs += std::min<long long>(i, options.window) +
                     std::min<long long>(len - 1 - i, options.window);
    }
    sentences.push_back(std::move(ids));
  }
  const double total_steps = static_cast<double>(std::max<long long>(1, total_pairs)) * options.epochs;

  Eigen::VectorXd center_grad(d);
  std::vector<Eigen::Index> negatives(static_cast<std::size_t>(options.negatives));
  long long step = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    double loss = 0.0;
    long long pairs = 0;
    for (const auto& ids : sentences) {
      const auto len = static_cast<long long>(ids.size());
      for (long long i = 0; i < len; ++i) {
        const Eigen::Index center = ids[i];
        const long long lo = std::max<long long>(0, i - options.window);
        const long long hi = std::min<long long>(len - 1, i + options.window);
        for (long long j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const Eigen::Index target = ids[j];
          const double lr = options.learning_rate *
                            std::max(1e-4, 1.0 - static_cast<double>(step) / total_steps);
          ++step;
          for (auto& n : negatives) n = draw_negative();

          auto w = table.vectors.row(center);
          center_grad.setZero();
          const double pos = w.dot(table.context.row(target));
          loss += neg_log_sigmoid(pos);
          const double pos_coeff = sigmoid(pos) - 1.0;
          center_grad += pos_coeff * table.context.row(target).transpose();
          table.context.row(target) -= lr * pos_coeff * w;
          for (auto n : negatives) {
            if (n == target) continue;
            const double s = w.dot(table.context.row(n));
            loss += neg_log_sigmoid(-s);
            const double coeff = sigmoid(s);
            center_grad += coeff * table.context.row(n).transpose();
            table.context.row(n) -= lr * coeff * w;
          }
          table.vectors.row(center) -= lr * center_grad.transpose();
          ++pairs;
        }
      }
    }
    table.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }
  return table;
}

double context_score(const EmbeddingTable& table, std::string_view center_token,
                     std::string_view context_token) {
  const auto c = table.find(center_token);
  const auto o = table.find(context_token);
  if (!c || !o || table.context.rows() == 0) return 0.0;
  return table.vectors.row(*c).dot(table.context.row(*o));
}

FingerprintLayout fingerprint_layout(int dimension) {
  FingerprintLayout layout;
  layout.block = dimension;
  for (std::size_t c = 0; c < kCategoryCount; ++c) layout.offsets[c] = static_cast<int>(c) * dimension;
  layout.length = static_cast<int>(kCategoryCount) * dimension;
  return layout;
}

Eigen::VectorXd fingerprint(const StyleProfile& profile,
                            std::span<const TfidfVocabulary> vocabs,
                            const EmbeddingTable& embedding) {
  const auto d = static_cast<int>(embedding.dimension());
  const auto layout = fingerprint_layout(d);
  if (layout.length > kMaxFingerprintColumns) {
    throw DimensionOverflow(std::to_string(kCategoryCount) + " blocks of " + std::to_string(d) +
                            " columns exceed " + std::to_string(kMaxFingerprintColumns));
  }
  if (vocabs.size() != kCategoryCount) {
    throw ShapeMismatch("expected one vocabulary per feature category");
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.length);
  Eigen::VectorXd gram(d);
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    const auto category = kAllCategories[c];
    const auto weights = transform_tfidf(vocabs[c], category, profile[category]);
    auto block = out.segment(layout.offsets[c], d);
    double weight_sum = 0.0;
    for (const auto& [key, weight] : weights) {
      gram.setZero();
      int known = 0;
      for (const auto& token : ngram_tokens(key)) {
        if (auto row = embedding.find(token)) {
          gram += embedding.vectors.row(*row).transpose();
          ++known;
        }
      }
      if (known == 0) continue;
      block += weight * (gram / known);
      weight_sum += weight;
    }
    if (weight_sum > 0.0) block /= weight_sum;
  }
  return out;
}

}  // namespace authorprint
