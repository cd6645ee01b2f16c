#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cvfspeech/error.hpp"

namespace cvf {

enum class KernelKind { linear, rbf };

struct SvmConfig {
  double c = 1.0;
  KernelKind kernel = KernelKind::linear;
  double gamma = 1.0;
  double kkt_tolerance = 1e-3;
  int max_passes = 10;  // consecutive changeless sweeps before stopping
  bool standardize = true;

  void validate() const;
};

/// Per-feature z-score parameters; a zero-variance feature keeps scale 1.
struct Standardization {
  std::vector<double> means;
  std::vector<double> scales;

  bool active() const { return !means.empty(); }
  std::vector<double> apply(std::span<const double> x) const;
};

Standardization fit_standardization(
    const std::vector<std::vector<double>>& rows);

/// Trained two-class SVM. Support vectors are stored in standardized space;
/// class_neg/class_pos is the lexicographic label mapping to -1/+1.
struct SvmModel {
  KernelKind kernel = KernelKind::linear;
  double c = 1.0;
  double gamma = 1.0;
  double bias = 0.0;
  size_t dim = 0;
  std::vector<double> alpha;
  std::vector<int> y;
  std::vector<std::vector<double>> support_vectors;
  Standardization standardization;
  std::string class_neg;
  std::string class_pos;

  // full dual solution in training-row order; solver diagnostic, not
  // serialized
  std::vector<double> training_alpha;
};

struct Prediction {
  std::string label;
  double margin = 0.0;
};

/// Sequential minimal optimization on the dual problem: pairwise alpha
/// updates until every example satisfies the KKT conditions within
/// kkt_tolerance for max_passes consecutive sweeps. Second-choice candidate
/// scans start at seeded random positions, so training is deterministic
/// given the seed.
SvmModel train_smo(const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>& labels,
                   const SvmConfig& cfg, uint64_t seed);

/// f(x) = sum alpha_i y_i K(sv_i, x) + bias, in standardized space.
double decision_value(const SvmModel& model, std::span<const double> x);

/// sign(f(x)) mapped to class names; a tie at f(x) = 0 resolves to the
/// positive class.
Prediction predict(const SvmModel& model, std::span<const double> x);

/// Line-oriented text format, 12 significant digits; reloading reproduces
/// predictions bit-exactly at the serialized precision.
std::string model_to_string(const SvmModel& model);
SvmModel model_from_string(const std::string& text);
void save_model(const SvmModel& model, const std::string& path);
SvmModel load_model(const std::string& path);

}  // namespace cvf
