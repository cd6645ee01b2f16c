#pragma once

#include <string>
#include <vector>

#include "cvfspeech/feature_matrix.hpp"

namespace cvf {

struct AnovaResult {
  int feature_id = -1;
  double f = 0.0;
  double p = 1.0;
  int d1 = 0;
  int d2 = 0;
  std::vector<double> group_means;
  double grand_mean = 0.0;
};

/// Per-feature ANOVA outcomes plus the retained index set
/// {i : p_i < alpha}, ordered by ascending p (feature index breaks ties).
struct SelectionResult {
  double alpha = 0.05;
  std::vector<AnovaResult> per_feature;
  std::vector<int> retained;
};

/// One-way ANOVA over two or more groups. SSW = 0 with SSB > 0 yields
/// p = 0 (perfect separation); SSW = SSB = 0 yields F = 0, p = 1.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

/// CDF of the F distribution via the regularized incomplete beta function,
/// continued-fraction evaluation with absolute tolerance 1e-12.
double f_cdf(double x, int d1, int d2);

/// Grouped by label, one ANOVA per feature column.
SelectionResult select_features(const FeatureMatrix& matrix, double alpha);

/// feature_name<TAB>F<TAB>p<TAB>retained, sorted by ascending p.
std::string selection_table(const SelectionResult& selection,
                            const std::vector<std::string>& names);

}  // namespace cvf
