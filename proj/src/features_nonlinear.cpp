#include "cvfspeech/features_nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cvf {

namespace {

constexpr double kFdMax = 10.0;

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  double max = 0.0;
  double min = 0.0;
};

Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  s.max = s.min = v[0];
  for (double x : v) {
    s.mean += x;
    s.max = std::max(s.max, x);
    s.min = std::min(s.min, x);
  }
  s.mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(var / static_cast<double>(v.size()));
  return s;
}

}  // namespace

void NldConfig::validate() const {
  if (!(window_ms > 0.0 && window_hop_ms > 0.0 && window_ms >= window_hop_ms))
    throw validation_error("nld: window_ms >= window_hop_ms > 0 required");
  if (pe_delay < 1) throw validation_error("nld: pe_delay must be >= 1");
}

double castiglioni_fd(std::span<const double> window) {
  const auto n = static_cast<long>(window.size());
  if (n < 2) throw validation_error("fractal dimension needs >= 2 samples");

  double path = 0.0;
  double excursion = 0.0;
  for (long i = 1; i < n; ++i) {
    path += std::abs(window[i] - window[i - 1]);
    excursion = std::max(excursion, std::abs(window[i] - window[0]));
  }
  if (path == 0.0) return 1.0;

  const double log_n = std::log10(static_cast<double>(n - 1));
  const double denom = log_n + std::log10(excursion / path);
  if (denom <= 1e-12) return kFdMax;
  return std::min(log_n / denom, kFdMax);
}

double permutation_entropy(std::span<const double> window, int m, int tau,
                           bool normalized) {
  if (m < 3 || m > 7)
    throw validation_error("permutation entropy order m must be in [3, 7]");
  if (tau < 1) throw validation_error("permutation entropy delay must be >= 1");
  const auto n = static_cast<long>(window.size());
  if (n < static_cast<long>(m) * tau + 1)
    throw validation_error(
        "window too short for permutation entropy: need at least " +
        std::to_string(static_cast<long>(m) * tau + 1) + " samples");

  const long n_vectors = n - static_cast<long>(m - 1) * tau;
  std::vector<long> counts(static_cast<size_t>(factorial(m)), 0);
  std::vector<int> order(m);

  for (long t = 0; t < n_vectors; ++t) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return window[t + static_cast<long>(a) * tau] <
             window[t + static_cast<long>(b) * tau];
    });
    // Lehmer code of the sorting permutation
    long code = 0;
    for (int i = 0; i < m; ++i) {
      int smaller = 0;
      for (int j = i + 1; j < m; ++j) smaller += order[j] < order[i];
      code = code * (m - i) + smaller;
    }
    ++counts[static_cast<size_t>(code)];
  }

  double h = 0.0;
  for (long c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n_vectors);
    h -= p * std::log(p);
  }
  return normalized ? h / std::log(factorial(m)) : h;
}

std::array<double, 10> nld_block(const AudioSignal& signal,
                                 const NldConfig& cfg) {
  cfg.validate();
  const FrameSequence windows = frame_signal(
      signal, cfg.window_ms, cfg.window_hop_ms, WindowKind::rectangular);
  if (windows.frame_len() < 100)
    throw validation_error("nld window too small for the fractal dimension");

  std::vector<double> fd(windows.count());
  std::vector<double> pe3(windows.count());
  std::vector<double> pe5(windows.count());
  for (int i = 0; i < windows.count(); ++i) {
    auto w = windows.frame(i);
    fd[i] = castiglioni_fd(w);
    pe3[i] = permutation_entropy(w, 3, cfg.pe_delay, cfg.pe_normalized);
    pe5[i] = permutation_entropy(w, 5, cfg.pe_delay, cfg.pe_normalized);
  }

  const Summary sfd = summarize(fd);
  const Summary spe3 = summarize(pe3);
  const Summary spe5 = summarize(pe5);
  const double fd_global = castiglioni_fd(signal.samples);
  const double pe5_global =
      permutation_entropy(signal.samples, 5, cfg.pe_delay, cfg.pe_normalized);

  return {sfd.mean, sfd.std,  sfd.max,   sfd.min,  fd_global,
          spe3.mean, spe3.std, spe5.mean, spe5.std, pe5_global};
}

}  // namespace cvf
