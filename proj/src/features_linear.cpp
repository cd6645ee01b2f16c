#include "cvfspeech/features_linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dsp.hpp"

namespace cvf {

namespace {

constexpr double kRelevantSegmentS = 0.05;
constexpr double kIntensityRef = 1e-10;

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  if (v.empty()) return {};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  return {mean, std::sqrt(var)};
}

std::vector<double> hamming_energies(const AudioSignal& signal) {
  const FrameSequence frames =
      frame_signal(signal, 25.0, 10.0, WindowKind::hamming);
  return short_time_energy(frames);
}

std::array<double, 4> energy_stats(const std::vector<double>& energy) {
  const MeanStd e = mean_std(energy);
  std::vector<double> adiff;
  adiff.reserve(energy.size());
  for (size_t i = 1; i < energy.size(); ++i)
    adiff.push_back(std::abs(energy[i] - energy[i - 1]));
  const MeanStd d = mean_std(adiff);
  return {e.mean, e.std, d.mean, d.std};
}

// 11 entries for one segment kind; zeros when no relevant segment exists.
void kind_duration_features(const SegmentMap& map, SegmentKind kind,
                            double* out) {
  std::fill(out, out + 11, 0.0);
  std::vector<double> relevant;
  double kind_total = 0.0;
  for (const Segment& s : map.segments) {
    if (s.kind != kind) continue;
    kind_total += s.duration_s();
    if (s.duration_s() >= kRelevantSegmentS) relevant.push_back(s.duration_s());
  }
  if (relevant.empty()) return;

  double sum = 0.0, mx = relevant[0], mn = relevant[0];
  for (double d : relevant) {
    sum += d;
    mx = std::max(mx, d);
    mn = std::min(mn, d);
  }
  out[0] = sum / static_cast<double>(relevant.size());
  out[1] = mx;
  out[2] = mn;
  out[3] = map.total_duration_s > 0.0 ? 100.0 * kind_total / map.total_duration_s
                                      : 0.0;

  static constexpr double kEdges[] = {0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
  for (double d : relevant) {
    int bin = 5;
    for (int j = 1; j < 6; ++j) {
      if (d <= kEdges[j]) {
        bin = j - 1;
        break;
      }
    }
    out[4 + bin] += 1.0;
  }

  // least-squares slope of duration against index within the relevant list
  const auto m = static_cast<double>(relevant.size());
  if (relevant.size() >= 2) {
    const double idx_mean = (m - 1.0) / 2.0;
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < relevant.size(); ++i) {
      const double di = static_cast<double>(i) - idx_mean;
      num += di * (relevant[i] - sum / m);
      den += di * di;
    }
    out[10] = num / den;
  }
}

}  // namespace

int PitchTrack::voiced_frames() const {
  int n = 0;
  for (char v : voiced) n += v != 0;
  return n;
}

std::array<double, 22> duration_features(const SegmentMap& map) {
  std::array<double, 22> out{};
  kind_duration_features(map, SegmentKind::voiced, out.data());
  kind_duration_features(map, SegmentKind::unvoiced, out.data() + 11);
  return out;
}

std::array<double, 4> energy_features(const AudioSignal& signal) {
  const std::vector<double> energy = hamming_energies(signal);
  if (energy.size() < 2)
    throw validation_error("energy features need at least 2 frames");
  return energy_stats(energy);
}

double spectral_centroid(std::span<const double> frame, int sample_rate) {
  if (frame.size() < 2)
    throw validation_error("spectral centroid needs frame_len >= 2");
  const std::vector<double> mag = dsp::magnitude_spectrum(frame);
  const double bin_hz =
      static_cast<double>(sample_rate) / static_cast<double>(frame.size());
  double num = 0.0, den = 0.0;
  for (size_t k = 0; k < mag.size(); ++k) {
    num += static_cast<double>(k) * bin_hz * mag[k];
    den += mag[k];
  }
  return den > 0.0 ? num / den : 0.0;
}

std::array<double, 12> mfcc(std::span<const double> frame, int sample_rate,
                            const MfccConfig& cfg) {
  if (static_cast<int>(frame.size()) < 64)
    throw validation_error("mfcc needs frame_len >= 64");
  const std::vector<double> mag = dsp::magnitude_spectrum(frame);
  const int n_bins = static_cast<int>(mag.size());
  const double bin_hz =
      static_cast<double>(sample_rate) / static_cast<double>(frame.size());

  auto to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto to_hz = [](double m) {
    return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
  };

  const int m = cfg.n_filters;
  std::vector<double> centers(m + 2);
  const double mel_hi = to_mel(sample_rate / 2.0);
  for (int j = 0; j < m + 2; ++j)
    centers[j] = to_hz(mel_hi * static_cast<double>(j) / (m + 1));

  std::vector<double> logmel(m);
  for (int f = 0; f < m; ++f) {
    const double lo = centers[f], mid = centers[f + 1], hi = centers[f + 2];
    double acc = 0.0;
    for (int k = 0; k < n_bins; ++k) {
      const double fk = k * bin_hz;
      double w = 0.0;
      if (fk >= lo && fk <= mid)
        w = (fk - lo) / (mid - lo);
      else if (fk > mid && fk <= hi)
        w = (hi - fk) / (hi - mid);
      acc += w * mag[k];
    }
    logmel[f] = std::log(std::max(acc, cfg.log_floor));
  }

  std::array<double, 12> out{};
  const double scale = std::sqrt(2.0 / static_cast<double>(m));
  for (int j = 1; j <= cfg.n_coeffs; ++j) {
    double c = 0.0;
    for (int f = 0; f < m; ++f)
      c += logmel[f] * std::cos(std::numbers::pi * j * (f + 0.5) / m);
    out[j - 1] = scale * c;
  }
  return out;
}

PitchTrack pitch_track_from_analysis(const FrameAnalysis& analysis,
                                     const AudioSignal& signal) {
  const int count = static_cast<int>(analysis.voiced.size());
  const int fs = analysis.sample_rate;
  PitchTrack track;
  track.voiced.assign(analysis.voiced.begin(), analysis.voiced.end());
  track.f0.assign(count, 0.0);
  track.period.assign(count, 0.0);
  track.peak_amp.assign(count, 0.0);
  track.autocorr = analysis.acf_peak;

  for (int i = 0; i < count; ++i) {
    if (!analysis.voiced[i] || analysis.acf_lag[i] <= 0.0) continue;
    double f0 = static_cast<double>(fs) / analysis.acf_lag[i];
    f0 = std::clamp(f0, 75.0, 400.0);
    track.f0[i] = f0;
    track.period[i] = 1.0 / f0;

    const int start = i * analysis.hop;
    const int period_len = static_cast<int>(std::lround(fs / f0));
    const int len = std::min({period_len, analysis.frame_len,
                              static_cast<int>(signal.samples.size()) - start});
    double peak = 0.0;
    for (int k = 0; k < len; ++k)
      peak = std::max(peak, std::abs(signal.samples[start + k]));
    track.peak_amp[i] = peak;
  }
  return track;
}

PitchTrack pitch_track(const AudioSignal& signal, const VadConfig& cfg) {
  return pitch_track_from_analysis(analyze_frames(signal, cfg), signal);
}

std::array<double, 11> acoustic_features(const PitchTrack& track,
                                         const AudioSignal& signal) {
  std::array<double, 11> out{};

  std::vector<double> f0s, periods;
  for (int i = 0; i < track.total_frames(); ++i) {
    if (!track.voiced[i] || track.f0[i] <= 0.0) continue;
    f0s.push_back(track.f0[i]);
    periods.push_back(track.period[i]);
  }
  if (!f0s.empty()) {
    const MeanStd p = mean_std(f0s);
    out[0] = p.mean;
    out[1] = p.std;
    out[2] = *std::max_element(f0s.begin(), f0s.end());
    out[3] = *std::min_element(f0s.begin(), f0s.end());
    const MeanStd t = mean_std(periods);
    out[8] = t.mean;
    out[9] = t.std;
  }

  std::vector<double> intensity;
  for (double e : hamming_energies(signal))
    intensity.push_back(10.0 * std::log10(std::max(e, kIntensityRef) /
                                          kIntensityRef));
  if (!intensity.empty()) {
    const MeanStd s = mean_std(intensity);
    out[4] = s.mean;
    out[5] = s.std;
    out[6] = *std::max_element(intensity.begin(), intensity.end());
    out[7] = *std::min_element(intensity.begin(), intensity.end());
  }

  double sq = 0.0;
  for (double x : signal.samples) sq += x * x;
  out[10] = signal.samples.empty()
                ? 0.0
                : std::sqrt(sq / static_cast<double>(signal.samples.size()));
  return out;
}

std::array<double, 5> voice_quality(const PitchTrack& track) {
  std::array<double, 5> out{};
  std::vector<double> periods, amps, acs;
  for (int i = 0; i < track.total_frames(); ++i) {
    if (!track.voiced[i]) continue;
    periods.push_back(track.period[i]);
    amps.push_back(track.peak_amp[i]);
    acs.push_back(track.autocorr[i]);
  }
  if (acs.empty()) return out;

  double dp = 0.0, da = 0.0;
  int pairs = 0;
  for (int i = 1; i < track.total_frames(); ++i) {
    if (!track.voiced[i] || !track.voiced[i - 1]) continue;
    dp += std::abs(track.period[i] - track.period[i - 1]);
    da += std::abs(track.peak_amp[i] - track.peak_amp[i - 1]);
    ++pairs;
  }
  if (pairs > 0) {
    const double period_mean = mean_std(periods).mean;
    const double amp_mean = mean_std(amps).mean;
    if (period_mean > 0.0) out[0] = 100.0 * (dp / pairs) / period_mean;
    if (amp_mean > 0.0) out[1] = 100.0 * (da / pairs) / amp_mean;
  }

  const double r = mean_std(acs).mean;
  const double rc = std::clamp(r, 1e-6, 1.0 - 1e-6);
  out[2] = (1.0 - rc) / rc;
  out[3] = 10.0 * std::log10(rc / (1.0 - rc));
  out[4] = r;
  return out;
}

std::array<double, 2> duration_ratios(const PitchTrack& track,
                                      const SegmentMap& map) {
  std::array<double, 2> out{};
  const int total = track.total_frames();
  if (total > 0)
    out[0] = 100.0 * (total - track.voiced_frames()) / total;

  int first_voiced = -1, last_voiced = -1;
  for (size_t i = 0; i < map.segments.size(); ++i) {
    if (map.segments[i].kind != SegmentKind::voiced) continue;
    if (first_voiced < 0) first_voiced = static_cast<int>(i);
    last_voiced = static_cast<int>(i);
  }
  if (first_voiced >= 0 && map.total_duration_s > 0.0) {
    double breaks = 0.0;
    for (int i = first_voiced + 1; i < last_voiced; ++i)
      if (map.segments[i].kind == SegmentKind::unvoiced)
        breaks += map.segments[i].duration_s();
    out[1] = 100.0 * breaks / map.total_duration_s;
  }
  return out;
}

std::array<double, 70> linear_block(const AudioSignal& signal,
                                    const VadConfig& cfg) {
  const FrameAnalysis analysis = analyze_frames(signal, cfg);
  const SegmentMap map = segments_from_flags(analysis, signal.duration_s(), cfg);
  const PitchTrack track = pitch_track_from_analysis(analysis, signal);

  const FrameSequence hamming =
      frame_signal(signal, 25.0, 10.0, WindowKind::hamming);
  if (hamming.count() < 2)
    throw validation_error("linear features need at least 2 frames");

  std::vector<double> energy = short_time_energy(hamming);
  std::vector<double> centroids(hamming.count());
  std::vector<std::array<double, 12>> coeffs(hamming.count());
  for (int i = 0; i < hamming.count(); ++i) {
    centroids[i] = spectral_centroid(hamming.frame(i), signal.sample_rate);
    coeffs[i] = mfcc(hamming.frame(i), signal.sample_rate);
  }

  std::array<double, 70> out{};
  size_t pos = 0;
  const auto dur = duration_features(map);
  std::copy(dur.begin(), dur.end(), out.begin() + pos);
  pos += dur.size();

  const auto e = energy_stats(energy);
  std::copy(e.begin(), e.end(), out.begin() + pos);
  pos += e.size();

  const MeanStd c = mean_std(centroids);
  out[pos++] = c.mean;
  out[pos++] = c.std;

  for (int j = 0; j < 12; ++j) {
    std::vector<double> v(hamming.count());
    for (int i = 0; i < hamming.count(); ++i) v[i] = coeffs[i][j];
    const MeanStd s = mean_std(v);
    out[pos + j] = s.mean;
    out[pos + 12 + j] = s.std;
  }
  pos += 24;

  const auto ac = acoustic_features(track, signal);
  std::copy(ac.begin(), ac.end(), out.begin() + pos);
  pos += ac.size();

  const auto vq = voice_quality(track);
  std::copy(vq.begin(), vq.end(), out.begin() + pos);
  pos += vq.size();

  const auto dr = duration_ratios(track, map);
  std::copy(dr.begin(), dr.end(), out.begin() + pos);
  return out;
}

}  // namespace cvf
