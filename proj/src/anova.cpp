#include "cvfspeech/anova.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace cvf {

namespace {

constexpr double kBetaTol = 1e-12;

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kBetaTol) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log(1.0 - x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double f_cdf(double x, int d1, int d2) {
  if (d1 < 1 || d2 < 1)
    throw validation_error("f_cdf: degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  const double arg = d1 * x / (d1 * x + d2);
  return incomplete_beta(d1 / 2.0, d2 / 2.0, arg);
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2)
    throw validation_error("anova needs at least 2 groups");
  size_t n_total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2)
      throw validation_error("anova needs at least 2 observations per group");
    for (double v : g)
      if (!std::isfinite(v))
        throw validation_error("anova: non-finite observation");
    n_total += g.size();
  }
  if (n_total <= groups.size())
    throw validation_error("anova needs more observations than groups");

  AnovaResult res;
  res.d1 = static_cast<int>(groups.size()) - 1;
  res.d2 = static_cast<int>(n_total - groups.size());

  double grand = 0.0;
  for (const auto& g : groups)
    for (double v : g) grand += v;
  grand /= static_cast<double>(n_total);
  res.grand_mean = grand;

  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    res.group_means.push_back(mean);
    ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) ssw += (v - mean) * (v - mean);
  }

  if (ssw == 0.0) {
    if (ssb > 0.0) {
      res.f = std::numeric_limits<double>::infinity();
      res.p = 0.0;
    } else {
      res.f = 0.0;
      res.p = 1.0;
    }
    return res;
  }
  res.f = (ssb / res.d1) / (ssw / res.d2);
  res.p = 1.0 - f_cdf(res.f, res.d1, res.d2);
  return res;
}

SelectionResult select_features(const FeatureMatrix& matrix, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw validation_error("selection alpha must be in (0,1)");

  std::map<std::string, std::vector<size_t>> by_label;
  for (size_t r = 0; r < matrix.rows(); ++r)
    by_label[matrix.labels[r]].push_back(r);
  if (by_label.size() < 2)
    throw validation_error("selection needs at least 2 classes");
  for (const auto& [label, rows] : by_label)
    if (rows.size() < 2)
      throw validation_error("selection: class '" + label +
                             "' has fewer than 2 rows");

  SelectionResult sel;
  sel.alpha = alpha;
  for (size_t c = 0; c < matrix.cols(); ++c) {
    std::vector<std::vector<double>> groups;
    for (const auto& [label, rows] : by_label) {
      std::vector<double> g;
      g.reserve(rows.size());
      for (size_t r : rows) g.push_back(matrix.at(r, c));
      groups.push_back(std::move(g));
    }
    AnovaResult res = anova_oneway(groups);
    res.feature_id = static_cast<int>(c);
    sel.per_feature.push_back(std::move(res));
  }

  for (const auto& res : sel.per_feature)
    if (res.p < alpha) sel.retained.push_back(res.feature_id);
  std::sort(sel.retained.begin(), sel.retained.end(), [&](int a, int b) {
    const double pa = sel.per_feature[static_cast<size_t>(a)].p;
    const double pb = sel.per_feature[static_cast<size_t>(b)].p;
    return pa != pb ? pa < pb : a < b;
  });
  return sel;
}

std::string selection_table(const SelectionResult& selection,
                            const std::vector<std::string>& names) {
  std::vector<int> order;
  for (const auto& res : selection.per_feature) order.push_back(res.feature_id);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double pa = selection.per_feature[static_cast<size_t>(a)].p;
    const double pb = selection.per_feature[static_cast<size_t>(b)].p;
    return pa != pb ? pa < pb : a < b;
  });

  std::string out = "feature_name\tF\tp\tretained\n";
  char buf[128];
  for (int id : order) {
    const auto& res = selection.per_feature[static_cast<size_t>(id)];
    const bool kept = res.p < selection.alpha;
    std::snprintf(buf, sizeof(buf), "%s\t%.6g\t%.6g\t%d\n",
                  names[static_cast<size_t>(id)].c_str(), res.f, res.p,
                  kept ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace cvf
