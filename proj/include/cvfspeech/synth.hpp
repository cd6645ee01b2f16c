#pragma once

#include <cstdint>
#include <string>

#include "cvfspeech/error.hpp"

namespace cvf {

/// Generative parameters for one class of synthetic one-minute recordings:
/// tone-burst "words" with per-period pitch jitter and amplitude shimmer,
/// optional in-burst broadband noise (white or logistic-map), gamma pauses
/// and a uniform noise floor.
struct SynthClassSpec {
  int count = 50;
  double burst_rate_per_min = 22.0;
  double burst_rate_std_per_min = 0.0;  // per-file spread of the rate
  double burst_dur_mean_s = 0.45;
  double burst_dur_std_s = 0.10;
  double f0_mean_hz = 140.0;
  double f0_file_std_hz = 15.0;
  double f0_jitter_pct = 0.5;
  double amp = 0.3;
  double shimmer_pct = 3.0;
  double burst_noise_amp = 0.02;
  std::string burst_noise_kind = "white";  // white | logistic
  double noise_floor_amp = 0.002;
  double pause_shape = 2.0;  // gamma shape (rounded to an integer >= 1)
};

struct SynthSpec {
  int sample_rate = 16000;
  double horizon_s = 60.0;
  SynthClassSpec cr;
  SynthClassSpec mci;

  void validate() const;
};

/// `key = value` file with `cr.` / `mci.` prefixed class parameters plus
/// sample_rate and horizon_s.
SynthSpec parse_synth_spec(const std::string& path);
SynthSpec parse_synth_spec_text(const std::string& text,
                                const std::string& origin);

/// Canonical rendering of a spec (every key present).
std::string synth_spec_to_string(const SynthSpec& spec);

/// Writes WAV files and a manifest (`path,label,subject_id`, paths relative
/// to the output directory) fully determined by the seed. Returns the
/// manifest path.
std::string synth_corpus(const SynthSpec& spec, uint64_t seed,
                         const std::string& out_dir);

}  // namespace cvf
