#include "cvfspeech/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace cvf {

namespace {

std::vector<std::string> build_registry() {
  std::vector<std::string> names;
  names.reserve(kFeatureCount);
  for (const char* kind : {"voiced", "unvoiced"}) {
    const std::string k = kind;
    names.push_back(k + "_dur_mean_s");
    names.push_back(k + "_dur_max_s");
    names.push_back(k + "_dur_min_s");
    names.push_back(k + "_time_pct");
    for (int b = 1; b <= 6; ++b)
      names.push_back(k + "_hist_b" + std::to_string(b));
    names.push_back(k + "_dur_slope_s");
  }
  for (const char* n : {"energy_mean", "energy_std", "energy_delta_mean",
                        "energy_delta_std", "centroid_mean_hz",
                        "centroid_std_hz"})
    names.emplace_back(n);
  for (int j = 1; j <= 12; ++j)
    names.push_back("mfcc" + std::to_string(j) + "_mean");
  for (int j = 1; j <= 12; ++j)
    names.push_back("mfcc" + std::to_string(j) + "_std");
  for (const char* n :
       {"pitch_mean_hz", "pitch_std_hz", "pitch_max_hz", "pitch_min_hz",
        "intensity_mean_db", "intensity_std_db", "intensity_max_db",
        "intensity_min_db", "period_mean_s", "period_std_s", "rms_amplitude",
        "jitter_local_pct", "shimmer_local_pct", "nhr", "hnr_db",
        "autocorr_mean", "unvoiced_frames_pct", "voice_breaks_pct"})
    names.emplace_back(n);
  for (const char* n : {"cfd_win_mean", "cfd_win_std", "cfd_win_max",
                        "cfd_win_min", "cfd_global"})
    names.emplace_back(n);
  for (const char* n : {"pe3_win_mean", "pe3_win_std", "pe5_win_mean",
                        "pe5_win_std", "pe5_global"})
    names.emplace_back(n);
  return names;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string report_csv_row(const std::string& stage, const EvalReport& rep,
                           int n_features, int retained, double reduction) {
  std::string out = stage;
  out += "," + rep.feature_set;
  out += "," + std::to_string(n_features);
  out += "," + std::to_string(retained);
  out += "," + fmt6(reduction);
  out += "," + std::to_string(rep.n);
  out += "," + std::to_string(rep.k);
  out += "," + std::to_string(rep.seed);
  out += "," + rep.classes[0] + "," + rep.classes[1];
  for (int t = 0; t < 2; ++t)
    for (int p = 0; p < 2; ++p)
      out += "," + std::to_string(rep.confusion[t][p]);
  for (double v : {rep.cer_neg, rep.cer_pos, rep.cer_global, rep.accuracy,
                   rep.coverage95, rep.ci95_lo, rep.ci95_hi, rep.ci90_lo,
                   rep.ci90_hi, rep.ci80_lo, rep.ci80_hi})
    out += "," + fmt6(v);
  return out + "\n";
}

void report_text_block(std::string& out, const std::string& title,
                       const EvalReport& rep) {
  out += "== " + title + " ==\n";
  out += "feature set: " + rep.feature_set + ", n=" + std::to_string(rep.n) +
         ", k=" + std::to_string(rep.k) +
         ", seed=" + std::to_string(rep.seed) + "\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-12s %10s %10s\n", "true\\pred",
                rep.classes[0].c_str(), rep.classes[1].c_str());
  out += buf;
  for (int t = 0; t < 2; ++t) {
    std::snprintf(buf, sizeof(buf), "%-12s %10ld %10ld\n",
                  rep.classes[t].c_str(), rep.confusion[t][0],
                  rep.confusion[t][1]);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "CER %s: %.2f %%   CER %s: %.2f %%\n",
                rep.classes[0].c_str(), rep.cer_neg, rep.classes[1].c_str(),
                rep.cer_pos);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "global CER: %.2f %%   accuracy: %.2f %%\n", rep.cer_global,
                rep.accuracy);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "coverage of cases (0.95): %.2f %% "
                "[logistic-margin approximation]\n",
                rep.coverage95);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "accuracy CI 95%%: [%.2f, %.2f]  90%%: [%.2f, %.2f]  "
                "80%%: [%.2f, %.2f]\n",
                rep.ci95_lo, rep.ci95_hi, rep.ci90_lo, rep.ci90_hi,
                rep.ci80_lo, rep.ci80_hi);
  out += buf;
}

}  // namespace

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = build_registry();
  return names;
}

std::vector<int> feature_set_columns(FeatureSet set) {
  size_t n = kFeatureCount;
  if (set == FeatureSet::lf) n = 70;
  if (set == FeatureSet::lf_cfd) n = 75;
  std::vector<int> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  return cols;
}

FeatureSet parse_feature_set(const std::string& text) {
  if (text == "LF") return FeatureSet::lf;
  if (text == "LF+CFD") return FeatureSet::lf_cfd;
  if (text == "LF+CFD+PE") return FeatureSet::lf_cfd_pe;
  throw validation_error("unknown feature set '" + text +
                         "'; expected LF, LF+CFD or LF+CFD+PE");
}

std::string feature_set_name(FeatureSet set) {
  switch (set) {
    case FeatureSet::lf:
      return "LF";
    case FeatureSet::lf_cfd:
      return "LF+CFD";
    default:
      return "LF+CFD+PE";
  }
}

long Corpus::count(const std::string& label) const {
  long n = 0;
  for (const auto& e : entries) n += e.label == label;
  return n;
}

Corpus ingest_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open manifest: " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::string line;
  if (!std::getline(f, line))
    throw validation_error(path + ": empty manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "path,label,subject_id")
    throw validation_error(path +
                           ":1: manifest header must be path,label,subject_id");

  Corpus corpus;
  std::set<std::string> seen;
  size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos)
      throw validation_error(path + ":" + std::to_string(line_no) +
                             ": expected path,label,subject_id");
    CorpusEntry entry;
    entry.path = line.substr(0, c1);
    entry.label = line.substr(c1 + 1, c2 - c1 - 1);
    entry.subject_id = line.substr(c2 + 1);

    if (std::find(kClassLabels.begin(), kClassLabels.end(), entry.label) ==
        kClassLabels.end())
      throw validation_error(path + ":" + std::to_string(line_no) +
                             ": unknown label '" + entry.label +
                             "'; allowed: CR, MCI");
    const std::filesystem::path resolved =
        std::filesystem::path(entry.path).is_absolute()
            ? std::filesystem::path(entry.path)
            : base / entry.path;
    entry.path = resolved.string();
    if (!seen.insert(entry.path).second)
      throw validation_error(path + ":" + std::to_string(line_no) +
                             ": duplicate path '" + entry.path + "'");
    if (!std::filesystem::exists(resolved))
      throw io_error(path + ":" + std::to_string(line_no) +
                     ": missing audio file '" + entry.path + "'");
    corpus.entries.push_back(std::move(entry));
  }

  for (const auto& label : kClassLabels)
    if (corpus.count(label) == 0)
      throw validation_error(path + ": class '" + label + "' is empty");
  return corpus;
}

std::array<double, kFeatureCount> extract_features(const AudioSignal& signal,
                                                   const VadConfig& vad_cfg,
                                                   const NldConfig& nld_cfg) {
  std::array<double, kFeatureCount> out{};
  const auto linear = linear_block(signal, vad_cfg);
  const auto nld = nld_block(signal, nld_cfg);
  std::copy(linear.begin(), linear.end(), out.begin());
  std::copy(nld.begin(), nld.end(), out.begin() + linear.size());
  return out;
}

FeatureMatrix extract_all(const Corpus& corpus, const VadConfig& vad_cfg,
                          const NldConfig& nld_cfg,
                          bool require_uniform_rate) {
  FeatureMatrix matrix;
  matrix.names = feature_names();
  std::string failures;
  std::set<int> rates;

  for (const auto& entry : corpus.entries) {
    try {
      const AudioSignal signal = load_wav(entry.path);
      rates.insert(signal.sample_rate);
      const auto row = extract_features(signal, vad_cfg, nld_cfg);
      matrix.ids.push_back(signal.source_id);
      matrix.labels.push_back(entry.label);
      matrix.data.insert(matrix.data.end(), row.begin(), row.end());
    } catch (const Error& e) {
      failures += std::string("  ") + entry.path + ": " + e.what() + "\n";
    }
  }
  if (!failures.empty())
    throw validation_error("feature extraction failed for some files:\n" +
                           failures);
  if (require_uniform_rate && rates.size() > 1) {
    std::string list;
    for (int r : rates) list += (list.empty() ? "" : ", ") + std::to_string(r);
    throw validation_error("mixed sample rates in corpus: " + list);
  }
  matrix.validate();
  return matrix;
}

ExperimentResult run_experiment(const FeatureMatrix& matrix,
                                const ExperimentConfig& cfg) {
  ExperimentResult result;
  const std::vector<int> cols = feature_set_columns(cfg.feature_set);
  const FeatureMatrix masked = matrix.select_columns(cols);
  result.masked_names = masked.names;
  result.masked_count = static_cast<int>(masked.cols());

  std::vector<std::vector<double>> rows;
  rows.reserve(masked.rows());
  for (size_t r = 0; r < masked.rows(); ++r) {
    auto row = masked.row(r);
    rows.emplace_back(row.begin(), row.end());
  }
  result.stage1 = cross_validate(rows, masked.labels, cfg.k, cfg.svm, cfg.seed,
                                 feature_set_name(cfg.feature_set));

  if (!cfg.anova_selection) return result;

  result.selection = select_features(masked, cfg.alpha);
  result.retained_count = static_cast<int>(result.selection->retained.size());
  result.reduction_pct =
      100.0 * (1.0 - static_cast<double>(result.retained_count) /
                         result.masked_count);
  if (result.retained_count == 0) {
    result.diagnostic =
        "no features retained at alpha=" + fmt6(cfg.alpha).substr(0, 8) +
        "; post-selection stage skipped";
    return result;
  }

  const FeatureMatrix reduced =
      masked.select_columns(result.selection->retained);
  std::vector<std::vector<double>> rows2;
  rows2.reserve(reduced.rows());
  for (size_t r = 0; r < reduced.rows(); ++r) {
    auto row = reduced.row(r);
    rows2.emplace_back(row.begin(), row.end());
  }
  result.stage2 =
      cross_validate(rows2, reduced.labels, cfg.k, cfg.svm, cfg.seed,
                     feature_set_name(cfg.feature_set) + "/anova");
  return result;
}

std::string emit_report(const ExperimentResult& result, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out =
        "stage,feature_set,n_features,retained,reduction_pct,n,k,seed,"
        "class_neg,class_pos,cm_neg_neg,cm_neg_pos,cm_pos_neg,cm_pos_pos,"
        "cer_neg,cer_pos,cer_global,accuracy,coverage95,"
        "ci95_lo,ci95_hi,ci90_lo,ci90_hi,ci80_lo,ci80_hi\n";
    out += report_csv_row("full", result.stage1, result.masked_count,
                          result.masked_count, 0.0);
    if (result.stage2)
      out += report_csv_row("anova", *result.stage2, result.masked_count,
                            result.retained_count, result.reduction_pct);
    return out;
  }

  std::string out;
  report_text_block(out, "stage 1: all masked features (" +
                             std::to_string(result.masked_count) + ")",
                    result.stage1);
  if (!result.selection) return out;

  out += "\n";
  if (!result.stage2) {
    out += result.diagnostic + "\n";
    return out;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "stage 2: ANOVA-selected, retained %d of %d (reduction "
                "%.1f %%)",
                result.retained_count, result.masked_count,
                result.reduction_pct);
  report_text_block(out, buf, *result.stage2);

  out += "retained features (by ascending p):\n";
  for (int id : result.selection->retained) {
    const auto& res = result.selection->per_feature[static_cast<size_t>(id)];
    std::snprintf(buf, sizeof(buf), "  %-24s F=%-10.4g p=%.6g\n",
                  result.masked_names[static_cast<size_t>(id)].c_str(), res.f,
                  res.p);
    out += buf;
  }
  return out;
}

}  // namespace cvf
