#include "cvfspeech/vad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cvf {

namespace {

struct AcfPeak {
  double peak = 0.0;
  double lag = 0.0;
};

// Normalized autocorrelation peak over the pitch lag band. A periodic
// signal peaks equally at its period and at every multiple inside the band,
// so the smallest lag within 98% of the global peak wins (then hill-climbed
// to its local maximum and refined parabolically); otherwise pure tones
// resolve an octave down on numerical noise.
AcfPeak acf_pitch_peak(std::span<const double> x, int lag_min, int lag_max) {
  const int n = static_cast<int>(x.size());
  lag_max = std::min(lag_max, n - 1);
  if (lag_min < 1 || lag_min > lag_max) return {};

  std::vector<double> sq_prefix(n + 1, 0.0);
  for (int k = 0; k < n; ++k) sq_prefix[k + 1] = sq_prefix[k] + x[k] * x[k];

  std::vector<double> r(lag_max + 1, 0.0);
  double r_max = 0.0;
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    double num = 0.0;
    for (int k = 0; k + lag < n; ++k) num += x[k] * x[k + lag];
    const double e0 = sq_prefix[n - lag];
    const double e1 = sq_prefix[n] - sq_prefix[lag];
    const double den = std::sqrt(e0 * e1);
    r[lag] = den > 0.0 ? num / den : 0.0;
    r_max = std::max(r_max, r[lag]);
  }
  if (r_max <= 0.0) return {};

  int best = lag_min;
  while (best < lag_max && r[best] < 0.98 * r_max) ++best;
  while (best < lag_max && r[best + 1] > r[best]) ++best;

  double refined = best;
  if (best > lag_min && best < lag_max) {
    const double a = r[best - 1], b = r[best], c = r[best + 1];
    const double den = a - 2.0 * b + c;
    if (std::abs(den) > 1e-30) {
      double shift = 0.5 * (a - c) / den;
      shift = std::clamp(shift, -0.5, 0.5);
      refined = best + shift;
    }
  }
  return {std::clamp(r[best], 0.0, 1.0), refined};
}

double percentile95(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const auto n = static_cast<long>(values.size());
  long rank = static_cast<long>(std::ceil(0.95 * static_cast<double>(n)));
  rank = std::clamp(rank, 1L, n);
  return values[rank - 1];
}

struct Run {
  int first = 0;
  int last = 0;  // inclusive
  SegmentKind kind = SegmentKind::unvoiced;
};

}  // namespace

void VadConfig::validate() const {
  if (!(frame_ms >= hop_ms && hop_ms > 0.0))
    throw validation_error("vad: frame_ms >= hop_ms > 0 required");
  if (!(energy_floor_ratio > 0.0 && energy_floor_ratio < 1.0))
    throw validation_error("vad: energy_floor_ratio must be in (0,1)");
  if (!(voicing_autocorr_min > 0.0 && voicing_autocorr_min < 1.0))
    throw validation_error("vad: voicing_autocorr_min must be in (0,1)");
  if (!(min_segment_ms > 0.0))
    throw validation_error("vad: min_segment_ms must be > 0");
  if (hangover_frames < 0)
    throw validation_error("vad: hangover_frames must be >= 0");
}

std::vector<double> short_time_energy(const FrameSequence& frames) {
  std::vector<double> energy(frames.count());
  for (int i = 0; i < frames.count(); ++i) {
    auto f = frames.frame(i);
    double sum = 0.0;
    for (double v : f) sum += v * v;
    energy[i] = sum / static_cast<double>(frames.frame_len());
  }
  return energy;
}

FrameAnalysis analyze_frames(const AudioSignal& signal, const VadConfig& cfg) {
  cfg.validate();
  const FrameSequence frames =
      frame_signal(signal, cfg.frame_ms, cfg.hop_ms, WindowKind::rectangular);
  const int count = frames.count();
  const int fs = signal.sample_rate;
  const int lag_min = static_cast<int>(std::ceil(fs / 400.0));
  const int lag_max = static_cast<int>(std::floor(fs / 75.0));

  FrameAnalysis out;
  out.frame_len = frames.frame_len();
  out.hop = frames.hop();
  out.sample_rate = fs;
  out.energy = short_time_energy(frames);
  out.acf_peak.assign(count, 0.0);
  out.acf_lag.assign(count, 0.0);
  out.voiced.assign(count, 0);

  const double floor = cfg.energy_floor_ratio * percentile95(out.energy);

  std::vector<char> raw(count, 0);
  for (int i = 0; i < count; ++i) {
    if (out.energy[i] < floor) continue;
    const AcfPeak p = acf_pitch_peak(frames.frame(i), lag_min, lag_max);
    out.acf_peak[i] = p.peak;
    out.acf_lag[i] = p.lag;
    raw[i] = p.peak >= cfg.voicing_autocorr_min;
  }

  // hangover: the voiced state persists across evidence dropouts of up to
  // hangover_frames, so short dips do not chop a run
  for (int i = 0; i < count; ++i) out.voiced[i] = raw[i];
  int prev_evidence = -1;
  for (int i = 0; i < count; ++i) {
    if (!raw[i]) continue;
    if (prev_evidence >= 0 && i - prev_evidence - 1 <= cfg.hangover_frames)
      for (int j = prev_evidence + 1; j < i; ++j) out.voiced[j] = 1;
    prev_evidence = i;
  }

  // Hangover can mark frames voiced whose autocorrelation was never
  // measured; fill those in so every voiced frame carries a pitch lag.
  for (int i = 0; i < count; ++i) {
    if (out.voiced[i] && out.acf_lag[i] == 0.0) {
      const AcfPeak p = acf_pitch_peak(frames.frame(i), lag_min, lag_max);
      out.acf_peak[i] = p.peak;
      out.acf_lag[i] = p.lag;
    }
  }
  return out;
}

std::vector<char> frame_voicing(const AudioSignal& signal,
                                const VadConfig& cfg) {
  return analyze_frames(signal, cfg).voiced;
}

SegmentMap segments_from_flags(const FrameAnalysis& analysis,
                               double total_duration_s, const VadConfig& cfg) {
  const int count = static_cast<int>(analysis.voiced.size());
  std::vector<Run> runs;
  for (int i = 0; i < count; ++i) {
    const SegmentKind kind =
        analysis.voiced[i] ? SegmentKind::voiced : SegmentKind::unvoiced;
    if (!runs.empty() && runs.back().kind == kind)
      runs.back().last = i;
    else
      runs.push_back({i, i, kind});
  }

  const double hop_s =
      static_cast<double>(analysis.hop) / analysis.sample_rate;
  auto run_duration = [&](const Run& r, bool is_last) {
    const double start = r.first * hop_s;
    const double end = is_last ? total_duration_s : (r.last + 1) * hop_s;
    return end - start;
  };

  const double min_s = cfg.min_segment_ms / 1000.0;
  bool changed = true;
  while (changed && runs.size() > 1) {
    changed = false;
    for (size_t i = 0; i < runs.size(); ++i) {
      if (run_duration(runs[i], i + 1 == runs.size()) >= min_s) continue;
      if (i > 0) {
        // absorb into the left neighbor; the right neighbor (same kind as
        // the left, runs alternate) coalesces too
        runs[i - 1].last = i + 1 < runs.size() ? runs[i + 1].last : runs[i].last;
        runs.erase(runs.begin() + i, runs.begin() + std::min(i + 2, runs.size()));
      } else {
        runs[1].first = runs[0].first;
        runs.erase(runs.begin());
      }
      changed = true;
      break;
    }
  }

  SegmentMap map;
  map.total_duration_s = total_duration_s;
  for (size_t i = 0; i < runs.size(); ++i) {
    Segment seg;
    seg.start_s = i == 0 ? 0.0 : runs[i].first * hop_s;
    seg.end_s =
        i + 1 == runs.size() ? total_duration_s : (runs[i].last + 1) * hop_s;
    seg.kind = runs[i].kind;
    map.segments.push_back(seg);
  }
  return map;
}

SegmentMap segment_voicing(const AudioSignal& signal, const VadConfig& cfg) {
  const FrameAnalysis analysis = analyze_frames(signal, cfg);
  return segments_from_flags(analysis, signal.duration_s(), cfg);
}

std::string segment_table(const SegmentMap& map) {
  std::string out;
  char line[96];
  for (const Segment& s : map.segments) {
    std::snprintf(line, sizeof(line), "%.6f\t%.6f\t%s\n", s.start_s, s.end_s,
                  s.kind == SegmentKind::voiced ? "voiced" : "unvoiced");
    out += line;
  }
  return out;
}

}  // namespace cvf
