#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cvfspeech/error.hpp"

namespace cvf {

/// Mono recording in memory. Samples are dimensionless amplitudes in
/// [-1, 1]; the loader removes any DC offset and rescales if the offset
/// removal pushed a peak past 1.
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 16000;
  std::string source_id;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class WindowKind { rectangular, hamming };

/// Fixed-length analysis windows cut at sample resolution. Frame i starts
/// at sample i*hop; a tail shorter than frame_len is dropped.
class FrameSequence {
 public:
  FrameSequence(std::vector<double> data, int frame_len, int hop, int count,
                WindowKind window, int sample_rate)
      : data_(std::move(data)),
        frame_len_(frame_len),
        hop_(hop),
        count_(count),
        window_(window),
        sample_rate_(sample_rate) {}

  int frame_len() const { return frame_len_; }
  int hop() const { return hop_; }
  int count() const { return count_; }
  WindowKind window_kind() const { return window_; }
  int sample_rate() const { return sample_rate_; }

  std::span<const double> frame(int i) const {
    return {data_.data() + static_cast<size_t>(i) * frame_len_,
            static_cast<size_t>(frame_len_)};
  }

 private:
  std::vector<double> data_;
  int frame_len_;
  int hop_;
  int count_;
  WindowKind window_;
  int sample_rate_;
};

/// Accepted sampling rates. No resampling is performed; features carry
/// physical units and adapt to the rate.
bool sample_rate_supported(int rate);

/// Loads a RIFF/WAVE file (PCM16 or float32, mono or stereo). Stereo is
/// averaged to mono, integer samples are scaled by 1/32768 and the mean is
/// subtracted. Throws cvf::Error naming the offending property.
AudioSignal load_wav(const std::string& path);

/// Writes samples as 16-bit PCM mono. Values are clamped to [-1, 1].
void write_wav16(const std::string& path, const std::vector<double>& samples,
                 int sample_rate);

/// frame_count = floor((n - frame_len) / hop) + 1. Throws a "too short"
/// validation error (carrying the required minimum) when the signal holds
/// less than one frame.
FrameSequence frame_signal(const AudioSignal& signal, double frame_ms,
                           double hop_ms, WindowKind window);

/// w[k] = 0.54 - 0.46 cos(2 pi k / (len - 1)).
std::vector<double> hamming_window(int len);

}  // namespace cvf
