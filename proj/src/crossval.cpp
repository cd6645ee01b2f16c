#include "cvfspeech/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace cvf {

namespace {

// Fisher-Yates with explicit bounded draws; avoids std::shuffle's
// implementation-defined sequence.
void deterministic_shuffle(std::vector<size_t>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

uint64_t fold_seed(uint64_t seed, int fold) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(fold + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<int> stratified_folds(const std::vector<std::string>& labels,
                                  int k, uint64_t seed) {
  if (k < 2) throw validation_error("cross-validation needs k >= 2");
  std::map<std::string, std::vector<size_t>> by_label;
  for (size_t i = 0; i < labels.size(); ++i)
    by_label[labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<int> fold(labels.size(), -1);
  for (auto& [label, indices] : by_label) {
    if (static_cast<int>(indices.size()) < k)
      throw validation_error("class '" + label + "' has " +
                             std::to_string(indices.size()) +
                             " rows, fewer than k=" + std::to_string(k));
    deterministic_shuffle(indices, rng);
    for (size_t j = 0; j < indices.size(); ++j)
      fold[indices[j]] = static_cast<int>(j % static_cast<size_t>(k));
  }
  return fold;
}

std::pair<double, double> confidence_interval(double p_hat, long n,
                                              double level) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0))
    throw validation_error("confidence interval: p_hat must be in [0,1]");
  if (n < 1) throw validation_error("confidence interval: n must be >= 1");
  double z;
  if (level == 0.95)
    z = 1.960;
  else if (level == 0.90)
    z = 1.645;
  else if (level == 0.80)
    z = 1.282;
  else
    throw validation_error(
        "confidence interval: level must be 0.95, 0.90 or 0.80");
  const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / n);
  return {std::max(0.0, p_hat - half), std::min(1.0, p_hat + half)};
}

EvalReport cross_validate(const std::vector<std::vector<double>>& rows,
                          const std::vector<std::string>& labels, int k,
                          const SvmConfig& cfg, uint64_t seed,
                          const std::string& feature_set) {
  if (rows.size() != labels.size() || rows.empty())
    throw validation_error("cross-validation: rows and labels must align");

  const std::vector<int> fold = stratified_folds(labels, k, seed);

  EvalReport report;
  report.k = k;
  report.seed = seed;
  report.feature_set = feature_set;
  report.n = static_cast<long>(rows.size());

  long covered = 0;
  for (int f = 0; f < k; ++f) {
    std::vector<std::vector<double>> train_x;
    std::vector<std::string> train_y;
    std::vector<size_t> test_rows;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (fold[i] == f) {
        test_rows.push_back(i);
      } else {
        train_x.push_back(rows[i]);
        train_y.push_back(labels[i]);
      }
    }
    const SvmModel model = train_smo(train_x, train_y, cfg, fold_seed(seed, f));
    if (f == 0) report.classes = {model.class_neg, model.class_pos};

    for (size_t i : test_rows) {
      const Prediction pred = predict(model, rows[i]);
      const int true_idx = labels[i] == model.class_pos ? 1 : 0;
      const int pred_idx = pred.label == model.class_pos ? 1 : 0;
      ++report.confusion[true_idx][pred_idx];

      // smallest class set whose summed confidence reaches 0.95
      const double p_pos = 1.0 / (1.0 + std::exp(-2.0 * pred.margin));
      const double top = std::max(p_pos, 1.0 - p_pos);
      if (top >= 0.95) {
        const int top_idx = p_pos >= 0.5 ? 1 : 0;
        covered += top_idx == true_idx ? 1 : 0;
      } else {
        ++covered;  // both classes needed, true class always inside
      }
    }
  }

  finalize_report(report, covered);
  return report;
}

void finalize_report(EvalReport& report, long covered) {
  const long n0 = report.confusion[0][0] + report.confusion[0][1];
  const long n1 = report.confusion[1][0] + report.confusion[1][1];
  report.n = n0 + n1;
  if (report.n <= 0)
    throw validation_error("report: empty confusion matrix");
  const long errors = report.confusion[0][1] + report.confusion[1][0];
  report.cer_neg = n0 > 0 ? 100.0 * report.confusion[0][1] / n0 : 0.0;
  report.cer_pos = n1 > 0 ? 100.0 * report.confusion[1][0] / n1 : 0.0;
  report.cer_global = 100.0 * errors / report.n;
  report.accuracy = 100.0 - report.cer_global;
  report.coverage95 = 100.0 * covered / report.n;

  const double p = report.accuracy / 100.0;
  std::tie(report.ci95_lo, report.ci95_hi) =
      confidence_interval(p, report.n, 0.95);
  std::tie(report.ci90_lo, report.ci90_hi) =
      confidence_interval(p, report.n, 0.90);
  std::tie(report.ci80_lo, report.ci80_hi) =
      confidence_interval(p, report.n, 0.80);
  report.ci95_lo *= 100.0;
  report.ci95_hi *= 100.0;
  report.ci90_lo *= 100.0;
  report.ci90_hi *= 100.0;
  report.ci80_lo *= 100.0;
  report.ci80_hi *= 100.0;
}

}  // namespace cvf
