#include <doctest.h>

#include <cmath>
#include <map>

#include "cvfspeech/crossval.hpp"
#include "helpers.hpp"

using namespace cvf;
using namespace testutil;

namespace {

struct Blobs {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
};

Blobs gaussian_blobs(int per_class, double separation, uint64_t seed,
                     int dim = 2) {
  SplitMix64 rng(seed);
  Blobs b;
  for (int i = 0; i < 2 * per_class; ++i) {
    const bool pos = i >= per_class;
    std::vector<double> row(dim);
    for (int j = 0; j < dim; ++j)
      row[j] = rng.gauss() + (j == 0 ? (pos ? separation : 0.0) : 0.0);
    b.rows.push_back(std::move(row));
    b.labels.push_back(pos ? "MCI" : "CR");
  }
  return b;
}

std::string report_signature(const EvalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d|%llu|%ld|%ld|%ld|%ld|%.9f|%.9f|%.9f",
                r.k, static_cast<unsigned long long>(r.seed),
                r.confusion[0][0], r.confusion[0][1], r.confusion[1][0],
                r.confusion[1][1], r.accuracy, r.coverage95, r.ci95_lo);
  return buf;
}

}  // namespace

TEST_CASE("stratified folds partition every row and balance classes") {
  std::vector<std::string> labels;
  for (int i = 0; i < 47; ++i) labels.push_back("CR");
  for (int i = 0; i < 53; ++i) labels.push_back("MCI");
  const auto fold = stratified_folds(labels, 10, 7);

  REQUIRE(fold.size() == labels.size());
  std::map<int, std::map<std::string, int>> per_fold;
  for (size_t i = 0; i < labels.size(); ++i) {
    CHECK(fold[i] >= 0);
    CHECK(fold[i] < 10);
    ++per_fold[fold[i]][labels[i]];
  }
  CHECK(per_fold.size() == 10);
  for (const auto& [f, counts] : per_fold) {
    CHECK(std::abs(counts.at("CR") - 4.7) <= 1.0);
    CHECK(std::abs(counts.at("MCI") - 5.3) <= 1.0);
  }
}

TEST_CASE("folds reject classes smaller than k") {
  std::vector<std::string> labels(12, "CR");
  labels.resize(17, "MCI");  // 5 MCI rows
  CHECK_THROWS_AS(stratified_folds(labels, 10, 1), Error);
}

TEST_CASE("confidence interval arithmetic") {
  const auto [lo95, hi95] = confidence_interval(0.5, 100, 0.95);
  CHECK_NEAR(lo95, 0.402, 1e-12);
  CHECK_NEAR(hi95, 0.598, 1e-12);

  const auto [lo1, hi1] = confidence_interval(1.0, 37, 0.95);
  CHECK(lo1 == 1.0);
  CHECK(hi1 == 1.0);

  const auto [lo80, hi80] = confidence_interval(0.9, 50, 0.80);
  CHECK_NEAR(hi80 - 0.9, 0.05439065360886924, 1e-9);
  CHECK_NEAR(0.9 - lo80, 0.05439065360886924, 1e-9);

  CHECK_THROWS_AS(confidence_interval(0.5, 100, 0.99), Error);
  CHECK_THROWS_AS(confidence_interval(1.5, 100, 0.95), Error);
  CHECK_THROWS_AS(confidence_interval(0.5, 0, 0.95), Error);
}

TEST_CASE("separable blobs cross-validate nearly perfectly") {
  const Blobs b = gaussian_blobs(50, 10.0, 17);
  const EvalReport report =
      cross_validate(b.rows, b.labels, 10, SvmConfig{}, 3, "blobs");
  CHECK(report.cer_global <= 2.0);
  CHECK(report.n == 100);
  CHECK(report.classes[0] == "CR");
  CHECK(report.classes[1] == "MCI");
  long total = 0;
  for (int t = 0; t < 2; ++t)
    for (int p = 0; p < 2; ++p) total += report.confusion[t][p];
  CHECK(total == 100);
  // coverage can only drop below accuracy through confidently wrong calls
  CHECK(report.coverage95 >= report.accuracy - 1e-9);
  CHECK(report.coverage95 <= 100.0 + 1e-9);
}

TEST_CASE("shuffled labels land near chance") {
  const Blobs b = gaussian_blobs(30, 8.0, 23);
  SplitMix64 rng(1234);
  double acc_sum = 0.0;
  const int reps = 5;
  for (int rep = 0; rep < reps; ++rep) {
    auto labels = b.labels;
    for (size_t i = labels.size(); i > 1; --i)
      std::swap(labels[i - 1], labels[rng.next() % i]);
    const EvalReport report =
        cross_validate(b.rows, labels, 10, SvmConfig{}, 100 + rep, "perm");
    acc_sum += report.accuracy;
  }
  const double mean_acc = acc_sum / reps;
  CHECK(mean_acc >= 35.0);
  CHECK(mean_acc <= 65.0);
}

TEST_CASE("cross-validation is deterministic given the seed") {
  const Blobs b = gaussian_blobs(20, 2.0, 31);
  const EvalReport r1 =
      cross_validate(b.rows, b.labels, 5, SvmConfig{}, 11, "det");
  const EvalReport r2 =
      cross_validate(b.rows, b.labels, 5, SvmConfig{}, 11, "det");
  CHECK(report_signature(r1) == report_signature(r2));
}

TEST_CASE("standardization is fitted on training rows only") {
  Blobs b = gaussian_blobs(15, 3.0, 41);
  const auto fold = stratified_folds(b.labels, 5, 9);

  std::vector<std::vector<double>> train_rows;
  for (size_t i = 0; i < b.rows.size(); ++i)
    if (fold[i] != 0) train_rows.push_back(b.rows[i]);
  const Standardization before = fit_standardization(train_rows);

  // blow up every test-fold row; the training-fold fit must not move
  for (size_t i = 0; i < b.rows.size(); ++i)
    if (fold[i] == 0)
      for (double& v : b.rows[i]) v = 1e9;
  std::vector<std::vector<double>> train_rows2;
  for (size_t i = 0; i < b.rows.size(); ++i)
    if (fold[i] != 0) train_rows2.push_back(b.rows[i]);
  const Standardization after = fit_standardization(train_rows2);

  CHECK(before.means == after.means);
  CHECK(before.scales == after.scales);

  // and the trained fold model is identical
  std::vector<std::string> train_labels;
  for (size_t i = 0; i < b.labels.size(); ++i)
    if (fold[i] != 0) train_labels.push_back(b.labels[i]);
  const SvmModel m1 = train_smo(train_rows, train_labels, SvmConfig{}, 5);
  const SvmModel m2 = train_smo(train_rows2, train_labels, SvmConfig{}, 5);
  CHECK(model_to_string(m1) == model_to_string(m2));
}

TEST_CASE("metrics derive from the confusion matrix") {
  EvalReport report;
  report.classes = {"CR", "MCI"};
  report.confusion = {{{9, 1}, {2, 8}}};
  finalize_report(report, 20);
  CHECK(report.n == 20);
  CHECK(report.cer_neg == 10.0);
  CHECK(report.cer_pos == 20.0);
  CHECK(report.cer_global == 15.0);
  CHECK(report.accuracy == 85.0);
  CHECK(report.coverage95 == 100.0);

  // per-class CER agrees with a direct recount
  const double recount_neg =
      100.0 * report.confusion[0][1] /
      (report.confusion[0][0] + report.confusion[0][1]);
  CHECK(report.cer_neg == recount_neg);
}
