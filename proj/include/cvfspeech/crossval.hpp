#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cvfspeech/svm.hpp"

namespace cvf {

/// Cross-validation outcome. Confusion rows are the true class, columns the
/// predicted class, both in [neg, pos] order; rates are percentages.
struct EvalReport {
  int k = 0;
  uint64_t seed = 0;
  std::string feature_set;
  long n = 0;
  std::array<std::string, 2> classes;  // [neg, pos]
  std::array<std::array<long, 2>, 2> confusion{};
  double cer_neg = 0.0;
  double cer_pos = 0.0;
  double cer_global = 0.0;
  double accuracy = 0.0;
  double coverage95 = 0.0;
  // accuracy CI bounds in percent, at the 95/90/80 levels
  double ci95_lo = 0.0, ci95_hi = 0.0;
  double ci90_lo = 0.0, ci90_hi = 0.0;
  double ci80_lo = 0.0, ci80_hi = 0.0;
};

/// Seeded stratified fold assignment: per class, indices are shuffled and
/// dealt round-robin, keeping class proportions within one row per fold.
std::vector<int> stratified_folds(const std::vector<std::string>& labels,
                                  int k, uint64_t seed);

/// Derives CER/accuracy/coverage/CI fields from the confusion matrix and
/// the covered-instance count; n is taken from the confusion totals.
void finalize_report(EvalReport& report, long covered);

/// Normal-approximation interval p +- z * sqrt(p (1-p) / n), clipped to
/// [0, 1]; level must be one of 0.95, 0.90, 0.80 (z = 1.960, 1.645, 1.282).
std::pair<double, double> confidence_interval(double p_hat, long n,
                                              double level);

/// Stratified k-fold cross-validation. Standardization is fitted inside
/// train_smo on each fold's training rows only, so held-out rows never leak
/// into the scaling. Coverage of cases uses a logistic squash of the margin
/// as the per-class confidence (an approximation, flagged in reports).
EvalReport cross_validate(const std::vector<std::vector<double>>& rows,
                          const std::vector<std::string>& labels, int k,
                          const SvmConfig& cfg, uint64_t seed,
                          const std::string& feature_set = "");

}  // namespace cvf
