#include "authorprint/metrics.hpp"

#include <algorithm>
#include <set>

#include "authorprint/errors.hpp"

namespace authorprint {

namespace {

double ratio(long long num, long long den, bool vacuous) {
  if (den == 0) return vacuous ? 1.0 : 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

MetricsReport classification_metrics(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw LengthMismatch("predictions and labels differ in length");
  }
  MetricsReport report;
  std::set<int> classes(labels.begin(), labels.end());
  classes.insert(predictions.begin(), predictions.end());
  const int k = classes.empty() ? 0 : *classes.rbegin() + 1;
  report.confusion.assign(static_cast<std::size_t>(k), std::vector<long long>(static_cast<std::size_t>(k), 0));
  long long correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++report.confusion[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(predictions[i])];
    if (labels[i] == predictions[i]) ++correct;
  }
  report.accuracy = labels.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(labels.size());

  for (int c : classes) {
    const auto ci = static_cast<std::size_t>(c);
    long long tp = report.confusion[ci][ci], predicted = 0, actual = 0;
    for (int o = 0; o < k; ++o) {
      predicted += report.confusion[static_cast<std::size_t>(o)][ci];
      actual += report.confusion[ci][static_cast<std::size_t>(o)];
    }
    ClassMetrics m;
    m.label = c;
    m.support = actual;
    m.precision = ratio(tp, predicted, false);
    m.recall = ratio(tp, actual, false);
    m.f1 = harmonic(m.precision, m.recall);
    report.precision += m.precision;
    report.recall += m.recall;
    report.f1 += m.f1;
    report.per_class.push_back(m);
  }
  if (!classes.empty()) {
    const auto n = static_cast<double>(classes.size());
    report.precision /= n;
    report.recall /= n;
    report.f1 /= n;
  }
  return report;
}

std::string_view to_string(Provenance p) {
  return p == Provenance::primary ? "primary" : "library";
}

MetricsReport decoupling_metrics(const AppBundle& bundle, const AuthorshipPartition& partition,
                                 const GroundTruth& truth) {
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  for (const auto& c : bundle.classes) {
    if (partition.module_of_package(c.package.str()) < 0) continue;
    auto it = truth.find(c.name);
    if (it == truth.end()) continue;
    const bool actual = it->second == Provenance::primary;
    const bool predicted = partition.in_primary(c.package.str());
    if (actual && predicted) ++tp;
    else if (!actual && predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  MetricsReport r;
  r.confusion = {{tn, fp}, {fn, tp}};
  const long long total = tp + fp + fn + tn;
  r.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 1.0;
  r.precision = ratio(tp, tp + fp, fn == 0);
  r.recall = ratio(tp, tp + fn, fp == 0);
  r.f1 = harmonic(r.precision, r.recall);
  r.per_class = {ClassMetrics{1, r.precision, r.recall, r.f1, tp + fn}};
  return r;
}

MetricsReport mean_metrics(std::span<const MetricsReport> reports) {
  MetricsReport out;
  if (reports.empty()) return out;
  for (const auto& r : reports) {
    out.precision += r.precision;
    out.recall += r.recall;
    out.f1 += r.f1;
    out.accuracy += r.accuracy;
    if (out.confusion.size() < r.confusion.size()) {
      out.confusion.resize(r.confusion.size());
      for (auto& row : out.confusion) row.resize(r.confusion.size(), 0);
    }
    for (std::size_t i = 0; i < r.confusion.size(); ++i) {
      for (std::size_t j = 0; j < r.confusion[i].size(); ++j) out.confusion[i][j] += r.confusion[i][j];
    }
  }
  const auto n = static_cast<double>(reports.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  out.accuracy /= n;
  return out;
}

}  // namespace authorprint
