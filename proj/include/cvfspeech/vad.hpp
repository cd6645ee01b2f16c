#pragma once

#include <string>
#include <vector>

#include "cvfspeech/audio.hpp"

namespace cvf {

/// Voiced/unvoiced decision parameters. The energy gate is relative to the
/// recording's own 95th-percentile frame energy, so absolute gain does not
/// matter; the periodicity gate uses the normalized autocorrelation peak in
/// the 75-400 Hz pitch band.
struct VadConfig {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  double energy_floor_ratio = 0.03;
  double voicing_autocorr_min = 0.45;
  double min_segment_ms = 50.0;
  int hangover_frames = 2;

  void validate() const;
};

enum class SegmentKind { voiced, unvoiced };

struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  SegmentKind kind = SegmentKind::unvoiced;

  double duration_s() const { return end_s - start_s; }
};

/// Ordered, contiguous, alternating voiced/unvoiced intervals covering the
/// whole recording.
struct SegmentMap {
  std::vector<Segment> segments;
  double total_duration_s = 0.0;
};

/// Per-frame measurements shared by the voicing decision and the pitch
/// tracker: rectangular short-time energy, the normalized autocorrelation
/// peak in the pitch lag band and its parabolically refined lag, plus the
/// final voiced flags (hangover applied).
struct FrameAnalysis {
  int frame_len = 0;
  int hop = 0;
  int sample_rate = 0;
  std::vector<double> energy;
  std::vector<double> acf_peak;  // 0 when not computed or undefined
  std::vector<double> acf_lag;   // fractional lag in samples; 0 when none
  std::vector<char> voiced;
};

/// E_i = sum(x^2) / frame_len.
std::vector<double> short_time_energy(const FrameSequence& frames);

FrameAnalysis analyze_frames(const AudioSignal& signal, const VadConfig& cfg);

/// Voiced flag per frame: energy above the relative floor AND autocorrelation
/// peak above the voicing threshold, extended by the hangover.
std::vector<char> frame_voicing(const AudioSignal& signal,
                                const VadConfig& cfg);

/// Maximal voiced/unvoiced runs; runs shorter than min_segment_ms are
/// absorbed into their neighbor so the map stays contiguous.
SegmentMap segment_voicing(const AudioSignal& signal, const VadConfig& cfg);
SegmentMap segments_from_flags(const FrameAnalysis& analysis,
                               double total_duration_s, const VadConfig& cfg);

/// One line per segment: start_s<TAB>end_s<TAB>kind, 6 decimal places.
std::string segment_table(const SegmentMap& map);

}  // namespace cvf
