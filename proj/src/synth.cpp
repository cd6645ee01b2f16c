#include "cvfspeech/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "cvfspeech/audio.hpp"
#include "cvfspeech/config.hpp"

namespace cvf {

namespace {

struct Draw {
  std::mt19937_64 rng;

  explicit Draw(uint64_t seed) : rng(seed) {}

  double uniform01() {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
  }

  double normal() {
    const double u1 = std::max(uniform01(), 1e-300);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // integer-shape gamma with unit scale, as a sum of exponentials
  double gamma_shape(int shape) {
    double acc = 0.0;
    for (int i = 0; i < shape; ++i)
      acc += -std::log(std::max(uniform01(), 1e-300));
    return acc;
  }
};

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) +
               0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Unit-variance broadband sample source. The logistic-map variant has the
// same flat spectrum as white noise but a constrained ordinal structure,
// which permutation entropy picks up.
class NoiseSource {
 public:
  NoiseSource(const std::string& kind, Draw& draw)
      : logistic_(kind == "logistic"), draw_(draw) {
    if (logistic_) z_ = 0.1 + 0.8 * draw_.uniform01();
  }

  double next() {
    if (!logistic_) return (2.0 * draw_.uniform01() - 1.0) * std::sqrt(3.0);
    z_ = 4.0 * z_ * (1.0 - z_);
    return (2.0 * z_ - 1.0) * std::sqrt(2.0);
  }

 private:
  bool logistic_;
  Draw& draw_;
  double z_ = 0.5;
};

void synth_burst(std::vector<double>& samples, int fs, long start, long len,
                 const SynthClassSpec& cls, double f0_file, Draw& draw) {
  NoiseSource noise(cls.burst_noise_kind, draw);
  double phase = 0.0;
  double f = f0_file;
  double a = cls.amp;
  const long ramp = std::min<long>(len / 4, fs / 100);  // 10 ms edges

  for (long k = 0; k < len; ++k) {
    const long idx = start + k;
    if (idx < 0 || idx >= static_cast<long>(samples.size())) continue;
    double env = 1.0;
    if (ramp > 0 && k < ramp)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * k / ramp);
    else if (ramp > 0 && k >= len - ramp)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * (len - 1 - k) / ramp);
    samples[idx] += env * (a * std::sin(phase) +
                           cls.burst_noise_amp * noise.next());
    phase += 2.0 * std::numbers::pi * f / fs;
    if (phase >= 2.0 * std::numbers::pi) {
      phase -= 2.0 * std::numbers::pi;
      f = std::clamp(f0_file * (1.0 + cls.f0_jitter_pct / 100.0 * draw.normal()),
                     75.0, 400.0);
      a = std::max(0.0, cls.amp * (1.0 + cls.shimmer_pct / 100.0 * draw.normal()));
    }
  }
}

std::vector<double> synth_recording(const SynthSpec& spec,
                                    const SynthClassSpec& cls, Draw& draw) {
  const int fs = spec.sample_rate;
  const auto n_samples = static_cast<long>(std::lround(spec.horizon_s * fs));
  std::vector<double> samples(n_samples, 0.0);

  const double file_rate = std::max(
      0.0, cls.burst_rate_per_min + cls.burst_rate_std_per_min * draw.normal());
  const int n_bursts = std::max(
      0, static_cast<int>(std::lround(file_rate * spec.horizon_s / 60.0)));

  std::vector<double> durations(n_bursts);
  double total_burst = 0.0;
  for (int j = 0; j < n_bursts; ++j) {
    durations[j] = std::clamp(
        cls.burst_dur_mean_s + cls.burst_dur_std_s * draw.normal(), 0.15, 2.0);
    total_burst += durations[j];
  }

  const double min_pause = 0.15;
  double spare = spec.horizon_s - total_burst - min_pause * (n_bursts + 1);
  if (spare < 0.0 && total_burst > 0.0) {
    // recordings denser than the horizon: shrink bursts proportionally
    const double scale =
        (spec.horizon_s - min_pause * (n_bursts + 1)) / total_burst;
    for (double& d : durations) d *= std::max(scale, 0.0);
    spare = 0.0;
  }

  const int shape = std::max(1, static_cast<int>(std::lround(cls.pause_shape)));
  std::vector<double> weights(n_bursts + 1);
  double weight_sum = 0.0;
  for (double& w : weights) {
    w = draw.gamma_shape(shape);
    weight_sum += w;
  }

  const double f0_file = std::clamp(
      cls.f0_mean_hz + cls.f0_file_std_hz * draw.normal(), 85.0, 350.0);

  double t = 0.0;
  for (int j = 0; j < n_bursts; ++j) {
    t += min_pause + spare * weights[j] / weight_sum;
    const long start = static_cast<long>(std::lround(t * fs));
    const long len = static_cast<long>(std::lround(durations[j] * fs));
    synth_burst(samples, fs, start, len, cls, f0_file, draw);
    t += durations[j];
  }

  if (cls.noise_floor_amp > 0.0)
    for (double& s : samples)
      s += cls.noise_floor_amp * (2.0 * draw.uniform01() - 1.0);

  for (double& s : samples) s = std::clamp(s, -1.0, 1.0);
  return samples;
}

void apply_class_entry(SynthClassSpec& cls, const std::string& key,
                       const std::string& value, const std::string& full_key) {
  auto num = [&](const std::string& v) {
    try {
      size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing");
      return x;
    } catch (const std::exception&) {
      throw validation_error("synth spec: bad number for " + full_key + ": '" +
                             v + "'");
    }
  };
  if (key == "count")
    cls.count = static_cast<int>(num(value));
  else if (key == "burst_rate_per_min")
    cls.burst_rate_per_min = num(value);
  else if (key == "burst_rate_std_per_min")
    cls.burst_rate_std_per_min = num(value);
  else if (key == "burst_dur_mean_s")
    cls.burst_dur_mean_s = num(value);
  else if (key == "burst_dur_std_s")
    cls.burst_dur_std_s = num(value);
  else if (key == "f0_mean_hz")
    cls.f0_mean_hz = num(value);
  else if (key == "f0_file_std_hz")
    cls.f0_file_std_hz = num(value);
  else if (key == "f0_jitter_pct")
    cls.f0_jitter_pct = num(value);
  else if (key == "amp")
    cls.amp = num(value);
  else if (key == "shimmer_pct")
    cls.shimmer_pct = num(value);
  else if (key == "burst_noise_amp")
    cls.burst_noise_amp = num(value);
  else if (key == "burst_noise_kind") {
    if (value != "white" && value != "logistic")
      throw validation_error(
          "synth spec: burst_noise_kind must be white or logistic");
    cls.burst_noise_kind = value;
  } else if (key == "noise_floor_amp")
    cls.noise_floor_amp = num(value);
  else if (key == "pause_shape")
    cls.pause_shape = num(value);
  else
    throw validation_error("synth spec: unknown key '" + full_key + "'");
}

std::string class_to_string(const std::string& prefix,
                            const SynthClassSpec& cls) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s.count = %d\n"
                "%s.burst_rate_per_min = %g\n"
                "%s.burst_rate_std_per_min = %g\n"
                "%s.burst_dur_mean_s = %g\n"
                "%s.burst_dur_std_s = %g\n"
                "%s.f0_mean_hz = %g\n"
                "%s.f0_file_std_hz = %g\n"
                "%s.f0_jitter_pct = %g\n"
                "%s.amp = %g\n"
                "%s.shimmer_pct = %g\n"
                "%s.burst_noise_amp = %g\n"
                "%s.burst_noise_kind = %s\n"
                "%s.noise_floor_amp = %g\n"
                "%s.pause_shape = %g\n",
                prefix.c_str(), cls.count, prefix.c_str(),
                cls.burst_rate_per_min, prefix.c_str(),
                cls.burst_rate_std_per_min, prefix.c_str(),
                cls.burst_dur_mean_s,
                prefix.c_str(), cls.burst_dur_std_s, prefix.c_str(),
                cls.f0_mean_hz, prefix.c_str(), cls.f0_file_std_hz,
                prefix.c_str(), cls.f0_jitter_pct, prefix.c_str(), cls.amp,
                prefix.c_str(), cls.shimmer_pct, prefix.c_str(),
                cls.burst_noise_amp, prefix.c_str(),
                cls.burst_noise_kind.c_str(), prefix.c_str(),
                cls.noise_floor_amp, prefix.c_str(), cls.pause_shape);
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  if (!sample_rate_supported(sample_rate))
    throw validation_error("synth spec: unsupported sample rate " +
                           std::to_string(sample_rate));
  if (!(horizon_s >= 1.0))
    throw validation_error("synth spec: horizon_s must be >= 1");
  for (const auto* cls : {&cr, &mci}) {
    if (cls->count < 0) throw validation_error("synth spec: negative count");
    if (cls->burst_rate_per_min < 0.0 || cls->burst_dur_mean_s <= 0.0)
      throw validation_error("synth spec: bad burst parameters");
  }
}

SynthSpec parse_synth_spec_text(const std::string& text,
                                const std::string& origin) {
  SynthSpec spec;
  for (const auto& [key, value] : parse_kv_text(text, origin)) {
    if (key == "sample_rate")
      spec.sample_rate = static_cast<int>(std::stod(value));
    else if (key == "horizon_s")
      spec.horizon_s = std::stod(value);
    else if (key.rfind("cr.", 0) == 0)
      apply_class_entry(spec.cr, key.substr(3), value, key);
    else if (key.rfind("mci.", 0) == 0)
      apply_class_entry(spec.mci, key.substr(4), value, key);
    else
      throw validation_error("synth spec: unknown key '" + key + "'");
  }
  spec.validate();
  return spec;
}

SynthSpec parse_synth_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open synth spec: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_synth_spec_text(ss.str(), path);
}

std::string synth_spec_to_string(const SynthSpec& spec) {
  char head[96];
  std::snprintf(head, sizeof(head), "sample_rate = %d\nhorizon_s = %g\n",
                spec.sample_rate, spec.horizon_s);
  return std::string(head) + class_to_string("cr", spec.cr) +
         class_to_string("mci", spec.mci);
}

std::string synth_corpus(const SynthSpec& spec, uint64_t seed,
                         const std::string& out_dir) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec && !std::filesystem::is_directory(out_dir))
    throw io_error("cannot create output directory: " + out_dir);

  std::string manifest = "path,label,subject_id\n";
  const std::pair<const SynthClassSpec*, std::string> classes[] = {
      {&spec.cr, "CR"}, {&spec.mci, "MCI"}};
  for (size_t ci = 0; ci < 2; ++ci) {
    const SynthClassSpec& cls = *classes[ci].first;
    const std::string& label = classes[ci].second;
    for (int i = 0; i < cls.count; ++i) {
      Draw draw(mix_seed(seed, ci, static_cast<uint64_t>(i)));
      const std::vector<double> samples = synth_recording(spec, cls, draw);
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%03d.wav",
                    ci == 0 ? "cr" : "mci", i);
      write_wav16((std::filesystem::path(out_dir) / name).string(), samples,
                  spec.sample_rate);
      char subject[64];
      std::snprintf(subject, sizeof(subject), "%s%03d", ci == 0 ? "cr" : "mci",
                    i);
      manifest += std::string(name) + "," + label + "," + subject + "\n";
    }
  }

  const std::string manifest_path =
      (std::filesystem::path(out_dir) / "manifest.csv").string();
  std::ofstream f(manifest_path, std::ios::trunc);
  if (!f) throw io_error("cannot write manifest: " + manifest_path);
  f.write(manifest.data(), static_cast<std::streamsize>(manifest.size()));
  if (!f) throw io_error("write failure: " + manifest_path);
  return manifest_path;
}

}  // namespace cvf
