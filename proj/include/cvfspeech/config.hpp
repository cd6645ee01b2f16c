#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cvfspeech/features_nonlinear.hpp"
#include "cvfspeech/svm.hpp"
#include "cvfspeech/vad.hpp"

namespace cvf {

/// All tunable defaults in one place, overridable from a line-oriented
/// `key = value` file.
struct PipelineConfig {
  VadConfig vad;
  NldConfig nld;
  SvmConfig svm;
  double select_alpha = 0.05;
  int eval_k = 10;
  uint64_t eval_seed = 1;
};

/// `key = value` lines; '#' starts a comment; unknown keys are rejected.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin);

PipelineConfig load_config(const std::string& path);
void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value);

/// Canonical `key = value` rendering of every default.
std::string print_config(const PipelineConfig& cfg);

}  // namespace cvf
