#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cvfspeech/anova.hpp"
#include "cvfspeech/config.hpp"
#include "cvfspeech/crossval.hpp"
#include "cvfspeech/feature_matrix.hpp"
#include "cvfspeech/features_linear.hpp"
#include "cvfspeech/features_nonlinear.hpp"

namespace cvf {

inline constexpr size_t kFeatureCount = 80;
inline const std::vector<std::string> kClassLabels = {"CR", "MCI"};

enum class FeatureSet { lf, lf_cfd, lf_cfd_pe };

/// The canonical 80-column registry: 70 linear features followed by the
/// 5 fractal-dimension and 5 permutation-entropy columns. Names and order
/// are fixed across runs and platforms.
const std::vector<std::string>& feature_names();

/// LF -> the 70 linear columns, LF+CFD -> 75, LF+CFD+PE -> all 80.
std::vector<int> feature_set_columns(FeatureSet set);
FeatureSet parse_feature_set(const std::string& text);
std::string feature_set_name(FeatureSet set);

struct CorpusEntry {
  std::string path;
  std::string label;
  std::string subject_id;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  long count(const std::string& label) const;
};

/// Manifest CSV: required header `path,label,subject_id`, one entry per
/// line, paths resolved relative to the manifest location. Duplicate paths,
/// unknown labels, missing files and empty classes are rejected with the
/// offending line.
Corpus ingest_manifest(const std::string& path);

/// One feature vector in registry order.
std::array<double, kFeatureCount> extract_features(const AudioSignal& signal,
                                                   const VadConfig& vad_cfg,
                                                   const NldConfig& nld_cfg);

/// All recordings of a corpus, rows in manifest order. Per-file failures
/// are collected and reported together; the matrix is produced only when
/// every row succeeds. With require_uniform_rate set, mixed sample rates
/// are rejected.
FeatureMatrix extract_all(const Corpus& corpus, const VadConfig& vad_cfg,
                          const NldConfig& nld_cfg,
                          bool require_uniform_rate = false);

struct ExperimentConfig {
  FeatureSet feature_set = FeatureSet::lf_cfd_pe;
  bool anova_selection = true;
  double alpha = 0.05;
  SvmConfig svm;
  int k = 10;
  uint64_t seed = 1;
};

/// Two-stage outcome: cross-validation on the masked feature set, then on
/// the ANOVA-retained columns. The post-selection stage is absent (with a
/// diagnostic) when nothing survives the threshold.
struct ExperimentResult {
  EvalReport stage1;
  std::optional<EvalReport> stage2;
  std::optional<SelectionResult> selection;
  std::vector<std::string> masked_names;
  int masked_count = 0;
  int retained_count = 0;
  double reduction_pct = 0.0;
  std::string diagnostic;
};

ExperimentResult run_experiment(const FeatureMatrix& matrix,
                                const ExperimentConfig& cfg);

enum class ReportFormat { text, csv };

/// Text renders confusion matrices, CER, accuracy, coverage, CIs and the
/// retained-feature table; CSV is machine-stable with a fixed column order
/// and 6 decimals.
std::string emit_report(const ExperimentResult& result, ReportFormat format);

}  // namespace cvf
