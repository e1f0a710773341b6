#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "authorprint/bundle.hpp"
#include "authorprint/decouple.hpp"

namespace authorprint {

struct ClassMetrics {
  int label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long long support = 0;
};

// Macro-averaged precision/recall/F1 and overall accuracy. confusion[t][p]
// counts samples of true class t predicted as p.
struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::vector<std::vector<long long>> confusion;
  std::vector<ClassMetrics> per_class;
};

// Classes averaged are those occurring in either labels or predictions.
// Throws LengthMismatch when the spans differ in length.
MetricsReport classification_metrics(std::span<const int> predictions, std::span<const int> labels);

enum class Provenance { primary, library };
std::string_view to_string(Provenance p);
// Fully qualified class name -> provenance.
using GroundTruth = std::map<std::string, Provenance>;

// Binary report for one app with "primary" as the positive class (index 1 in
// the confusion matrix). Classes outside the partition's scope are skipped.
MetricsReport decoupling_metrics(const AppBundle& bundle, const AuthorshipPartition& partition,
                                 const GroundTruth& truth);

// Unweighted mean of precision/recall/F1/accuracy; confusion matrices summed.
MetricsReport mean_metrics(std::span<const MetricsReport> reports);

}  // namespace authorprint
