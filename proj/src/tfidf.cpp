#include "authorprint/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "authorprint/errors.hpp"

namespace authorprint {

std::string ngram_key(std::span<const std::string> tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) key += ' ';
    key += tokens[i];
  }
  return key;
}

std::vector<std::string> ngram_tokens(const std::string& key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= key.size()) {
    const auto space = key.find(' ', start);
    out.push_back(key.substr(start, space == std::string::npos ? std::string::npos : space - start));
    if (space == std::string::npos) break;
    start = space + 1;
  }
  return out;
}

double smoothed_idf(int documents, int document_frequency) {
  return std::log((1.0 + documents) / (1.0 + document_frequency)) + 1.0;
}

namespace {

template <typename Visit>
void for_each_window(std::span<const std::string> seq, const TfidfOptions& opt, Visit visit) {
  for (int n = opt.min_n; n <= opt.max_n; ++n) {
    const auto len = static_cast<std::size_t>(n);
    if (seq.size() < len) break;
    for (std::size_t i = 0; i + len <= seq.size(); ++i) visit(ngram_key(seq.subspan(i, len)));
  }
}

}  // namespace

TfidfVocabulary fit_tfidf(FeatureCategory category,
                          std::span<const std::vector<std::string>> corpus,
                          const TfidfOptions& options) {
  struct Stats {
    long long count = 0;
    int df = 0;
    std::size_t last_doc = SIZE_MAX;
  };
  std::unordered_map<std::string, Stats> stats;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for_each_window(std::span<const std::string>(corpus[d]), options, [&](std::string key) {
      auto& s = stats[std::move(key)];
      ++s.count;
      if (s.last_doc != d) {
        s.last_doc = d;
        ++s.df;
      }
    });
  }

  const int documents = static_cast<int>(corpus.size());
  struct Candidate {
    double score;
    const std::string* key;
  };
  std::vector<Candidate> candidates;
  for (const auto& [key, s] : stats) {
    if (s.df < options.min_df) continue;
    candidates.push_back({smoothed_idf(documents, s.df) * static_cast<double>(s.count), &key});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return *a.key < *b.key;
  });
  if (candidates.size() > static_cast<std::size_t>(options.max_features)) {
    candidates.resize(static_cast<std::size_t>(options.max_features));
  }

  TfidfVocabulary vocab;
  vocab.category = category;
  vocab.documents = documents;
  for (const auto& c : candidates) {
    const auto& s = stats.at(*c.key);
    vocab.selected.push_back(*c.key);
    vocab.idf[*c.key] = smoothed_idf(documents, s.df);
    vocab.document_frequency[*c.key] = s.df;
  }
  return vocab;
}

SparseWeights transform_tfidf(const TfidfVocabulary& vocab, FeatureCategory category,
                              std::span<const std::string> sequence) {
  if (category != vocab.category) {
    throw CategoryMismatch("vocabulary for '" + std::string(to_string(vocab.category)) +
                           "' applied to '" + std::string(to_string(category)) + "'");
  }
  std::map<std::string, long long> counts;
  TfidfOptions windows;
  windows.min_n = 1 << 30;
  windows.max_n = 0;
  for (const auto& key : vocab.selected) {
    const int n = static_cast<int>(std::count(key.begin(), key.end(), ' ')) + 1;
    windows.min_n = std::min(windows.min_n, n);
    windows.max_n = std::max(windows.max_n, n);
  }
  if (vocab.selected.empty()) return {};
  for_each_window(sequence, windows, [&](std::string key) {
    if (vocab.idf.contains(key)) ++counts[std::move(key)];
  });
  SparseWeights out;
  for (const auto& [key, count] : counts) out[key] = static_cast<double>(count) * vocab.idf.at(key);
  return out;
}

SparseWeights transform_tfidf(const TfidfVocabulary& vocab, const StyleProfile& profile) {
  return transform_tfidf(vocab, vocab.category, profile[vocab.category]);
}

}  // namespace authorprint
