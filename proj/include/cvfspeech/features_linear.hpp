#pragma once

#include <array>
#include <span>
#include <vector>

#include "cvfspeech/audio.hpp"
#include "cvfspeech/vad.hpp"

namespace cvf {

/// Per-frame pitch measurements. f0 and period are defined only on voiced
/// frames (0 elsewhere); peak_amp is the max |sample| over the first pitch
/// period of the frame; autocorr is the normalized autocorrelation peak.
struct PitchTrack {
  std::vector<char> voiced;
  std::vector<double> f0;
  std::vector<double> period;
  std::vector<double> peak_amp;
  std::vector<double> autocorr;

  int total_frames() const { return static_cast<int>(voiced.size()); }
  int voiced_frames() const;
};

struct MfccConfig {
  int n_filters = 26;
  int n_coeffs = 12;
  double log_floor = 1e-10;
};

/// Segment-duration statistics per kind, 11 values each, voiced first:
/// mean/max/min duration over relevant segments (>= 50 ms), percentage of
/// total time, 6 histogram bin counts with edges
/// {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, inf} s, and the least-squares slope of
/// duration against segment index. A kind with no relevant segment yields
/// zeros for all its entries.
std::array<double, 22> duration_features(const SegmentMap& map);

/// Mean/std of the short-time energy (25 ms / 10 ms Hamming frames) and
/// mean/std of its absolute first difference.
std::array<double, 4> energy_features(const AudioSignal& signal);

/// Magnitude-weighted mean frequency over DFT bins 0..frame_len/2; 0 for an
/// all-zero frame.
double spectral_centroid(std::span<const double> frame, int sample_rate);

/// c1..c12 of the mel cepstrum: magnitude spectrum -> 26 triangular mel
/// filters over 0..fs/2 -> floored natural log -> orthonormal DCT-II.
std::array<double, 12> mfcc(std::span<const double> frame, int sample_rate,
                            const MfccConfig& cfg = {});

PitchTrack pitch_track(const AudioSignal& signal, const VadConfig& cfg);
PitchTrack pitch_track_from_analysis(const FrameAnalysis& analysis,
                                     const AudioSignal& signal);

/// pitch mean/std/max/min (Hz, voiced frames), intensity mean/std/max/min
/// (dB re 1e-10 frame energy), period mean/std (s), global RMS amplitude.
std::array<double, 11> acoustic_features(const PitchTrack& track,
                                         const AudioSignal& signal);

/// local jitter %, local shimmer %, NHR, HNR (dB), mean voiced-frame
/// autocorrelation. Jitter/shimmer need at least two consecutive voiced
/// frames, otherwise they are 0; with no voiced frames all five are 0.
std::array<double, 5> voice_quality(const PitchTrack& track);

/// Fraction of locally unvoiced frames (%) and degree of voice breaks (%):
/// unvoiced time strictly between the first and last voiced segment over
/// total duration.
std::array<double, 2> duration_ratios(const PitchTrack& track,
                                      const SegmentMap& map);

/// The 70 linear features in registry order: 22 duration, 4 energy,
/// 2 spectral centroid (mean/std), 24 MFCC (12 means, 12 stds),
/// 11 acoustic, 5 voice quality, 2 duration ratios.
std::array<double, 70> linear_block(const AudioSignal& signal,
                                    const VadConfig& cfg);

}  // namespace cvf
