#pragma once

#include <array>
#include <span>

#include "cvfspeech/audio.hpp"

namespace cvf {

/// Sliding-window setup for the nonlinear features. Embedding orders below 3
/// give too few ordinal states, so m is restricted to [3, 7].
struct NldConfig {
  double window_ms = 500.0;
  double window_hop_ms = 250.0;
  int pe_delay = 1;
  bool pe_normalized = true;

  void validate() const;
};

/// Waveform fractal dimension from the total amplitude path length
/// L = sum |y[i+1] - y[i]| and the maximal excursion d = max |y[i] - y[0]|:
/// FD = log10(n-1) / (log10(n-1) + log10(d/L)). A constant window returns
/// 1.0; a vanishing denominator clamps to 10.0.
double castiglioni_fd(std::span<const double> window);

/// Shannon entropy of ordinal-pattern frequencies at embedding order m and
/// delay tau. Ties rank by position (earlier index lower), so a constant
/// window has a single pattern and zero entropy. Normalized output divides
/// by ln(m!).
double permutation_entropy(std::span<const double> window, int m, int tau,
                           bool normalized);

/// The 10 nonlinear features in registry order: fractal dimension windowed
/// mean/std/max/min and global, PE(m=3) windowed mean/std, PE(m=5) windowed
/// mean/std and global.
std::array<double, 10> nld_block(const AudioSignal& signal,
                                 const NldConfig& cfg = {});

}  // namespace cvf
