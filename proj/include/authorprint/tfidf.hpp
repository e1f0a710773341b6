#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "authorprint/stylometry.hpp"

namespace authorprint {

struct TfidfOptions {
  int min_n = 3;
  int max_n = 5;
  int min_df = 3;
  int max_features = 50;
};

// Selected n-grams of one feature category. N-gram keys are the tokens
// joined by single spaces (tokens never contain whitespace).
struct TfidfVocabulary {
  FeatureCategory category = FeatureCategory::identifiers;
  std::vector<std::string> selected;  // rank order
  std::map<std::string, double> idf;
  std::map<std::string, int> document_frequency;
  int documents = 0;

  friend bool operator==(const TfidfVocabulary&, const TfidfVocabulary&) = default;
};

using SparseWeights = std::map<std::string, double>;

std::string ngram_key(std::span<const std::string> tokens);
std::vector<std::string> ngram_tokens(const std::string& key);

// idf = ln((1 + N) / (1 + df)) + 1.
double smoothed_idf(int documents, int document_frequency);

// Candidates are contiguous windows of min_n..max_n tokens; those seen in
// fewer than min_df documents are dropped. The rest are ranked by total
// tf-idf mass (idf times the corpus-wide raw count), ties broken by key, and
// the top max_features kept.
TfidfVocabulary fit_tfidf(FeatureCategory category,
                          std::span<const std::vector<std::string>> corpus,
                          const TfidfOptions& options = {});

// Raw count of each selected n-gram in the sequence times its idf; n-grams
// that do not occur are omitted. Throws CategoryMismatch when `category`
// differs from the vocabulary's.
SparseWeights transform_tfidf(const TfidfVocabulary& vocab, FeatureCategory category,
                              std::span<const std::string> sequence);
SparseWeights transform_tfidf(const TfidfVocabulary& vocab, const StyleProfile& profile);

}  // namespace authorprint
