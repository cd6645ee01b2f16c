#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "cvfspeech/pipeline.hpp"
#include "cvfspeech/synth.hpp"

namespace {

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw cvf::io_error("cannot open for writing: " + path);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw cvf::io_error("write failure: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verbal-fluency speech biomarker pipeline"};
  app.require_subcommand(0, 1);

  std::string config_path;
  bool show_config = false;
  app.add_option("--config", config_path,
                 "key = value file overriding pipeline defaults");
  app.add_flag("--print-config", show_config,
               "print the effective configuration and exit");

  auto* cmd_extract =
      app.add_subcommand("extract", "extract the feature matrix for a corpus");
  std::string manifest_path, extract_out;
  bool rate_check = false;
  cmd_extract->add_option("--manifest", manifest_path, "corpus manifest CSV")
      ->required();
  cmd_extract->add_option("--out", extract_out, "output feature CSV")
      ->required();
  cmd_extract->add_flag("--rate-check", rate_check,
                        "require a single sample rate across the corpus");

  auto* cmd_select =
      app.add_subcommand("select", "rank features by one-way ANOVA");
  std::string select_features_path, select_out;
  double select_alpha = 0.05;
  cmd_select->add_option("--features", select_features_path, "feature CSV")
      ->required();
  cmd_select->add_option("--alpha", select_alpha, "significance level");
  cmd_select->add_option("--out", select_out, "output TSV")->required();

  auto* cmd_evaluate = app.add_subcommand(
      "evaluate", "cross-validated SVM evaluation, optionally ANOVA-selected");
  std::string eval_features_path, eval_report_path, eval_set = "LF+CFD+PE";
  bool eval_select = false;
  int eval_k = -1;
  long eval_seed = -1;
  cmd_evaluate->add_option("--features", eval_features_path, "feature CSV")
      ->required();
  cmd_evaluate->add_flag("--select", eval_select,
                         "add the ANOVA-selected second stage");
  cmd_evaluate->add_option("--feature-set", eval_set,
                           "LF, LF+CFD or LF+CFD+PE");
  cmd_evaluate->add_option("--k", eval_k, "number of folds");
  cmd_evaluate->add_option("--seed", eval_seed, "fold shuffle seed");
  cmd_evaluate->add_option("--report", eval_report_path,
                           "report path (.csv for the machine format, "
                           "anything else for text)");

  auto* cmd_synth =
      app.add_subcommand("synth", "generate a synthetic two-class corpus");
  std::string synth_spec_path, synth_out_dir;
  long synth_seed = 1;
  cmd_synth->add_option("--spec", synth_spec_path, "synthesis spec file")
      ->required();
  cmd_synth->add_option("--seed", synth_seed, "corpus seed");
  cmd_synth->add_option("--out", synth_out_dir, "output directory")
      ->required();

  auto* cmd_segments =
      app.add_subcommand("segments", "print the voiced/unvoiced segment map");
  std::string segments_wav;
  cmd_segments->add_option("--wav", segments_wav, "input WAV file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    cvf::PipelineConfig cfg;
    if (!config_path.empty()) cfg = cvf::load_config(config_path);

    if (show_config) {
      std::fputs(cvf::print_config(cfg).c_str(), stdout);
      return 0;
    }

    if (cmd_extract->parsed()) {
      const cvf::Corpus corpus = cvf::ingest_manifest(manifest_path);
      const cvf::FeatureMatrix matrix =
          cvf::extract_all(corpus, cfg.vad, cfg.nld, rate_check);
      cvf::save_matrix_csv(matrix, extract_out);
      std::printf("wrote %zu rows x %zu features to %s\n", matrix.rows(),
                  matrix.cols(), extract_out.c_str());
    } else if (cmd_select->parsed()) {
      if (!cmd_select->count("--alpha")) select_alpha = cfg.select_alpha;
      const cvf::FeatureMatrix matrix =
          cvf::load_matrix_csv(select_features_path);
      const cvf::SelectionResult sel =
          cvf::select_features(matrix, select_alpha);
      write_text_file(select_out, cvf::selection_table(sel, matrix.names));
      std::printf("retained %zu of %zu features at alpha=%g -> %s\n",
                  sel.retained.size(), matrix.cols(), select_alpha,
                  select_out.c_str());
    } else if (cmd_evaluate->parsed()) {
      const cvf::FeatureMatrix matrix =
          cvf::load_matrix_csv(eval_features_path);
      cvf::ExperimentConfig exp;
      exp.feature_set = cvf::parse_feature_set(eval_set);
      exp.anova_selection = eval_select;
      exp.alpha = cfg.select_alpha;
      exp.svm = cfg.svm;
      exp.k = eval_k > 0 ? eval_k : cfg.eval_k;
      exp.seed = eval_seed >= 0 ? static_cast<uint64_t>(eval_seed)
                                : cfg.eval_seed;
      const cvf::ExperimentResult result = cvf::run_experiment(matrix, exp);
      if (eval_report_path.empty()) {
        std::fputs(cvf::emit_report(result, cvf::ReportFormat::text).c_str(),
                   stdout);
      } else {
        const bool csv =
            std::filesystem::path(eval_report_path).extension() == ".csv";
        write_text_file(eval_report_path,
                        cvf::emit_report(result, csv ? cvf::ReportFormat::csv
                                                     : cvf::ReportFormat::text));
        std::printf("stage 1 accuracy: %.2f %%\n", result.stage1.accuracy);
        if (result.stage2)
          std::printf("stage 2 accuracy: %.2f %% (retained %d of %d)\n",
                      result.stage2->accuracy, result.retained_count,
                      result.masked_count);
        else if (!result.diagnostic.empty())
          std::printf("%s\n", result.diagnostic.c_str());
        std::printf("report written to %s\n", eval_report_path.c_str());
      }
    } else if (cmd_synth->parsed()) {
      const cvf::SynthSpec spec = cvf::parse_synth_spec(synth_spec_path);
      const std::string manifest = cvf::synth_corpus(
          spec, static_cast<uint64_t>(synth_seed), synth_out_dir);
      std::printf("%s\n", manifest.c_str());
    } else if (cmd_segments->parsed()) {
      const cvf::AudioSignal signal = cvf::load_wav(segments_wav);
      const cvf::SegmentMap map = cvf::segment_voicing(signal, cfg.vad);
      std::fputs(cvf::segment_table(map).c_str(), stdout);
    } else {
      std::fputs(app.help().c_str(), stdout);
    }
  } catch (const cvf::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == cvf::ErrorKind::io ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
