#include "cvfspeech/audio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>

namespace cvf {

namespace {

constexpr std::array<int, 5> kSupportedRates = {8000, 16000, 22050, 44100,
                                                48000};

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

bool sample_rate_supported(int rate) {
  return std::find(kSupportedRates.begin(), kSupportedRates.end(), rate) !=
         kSupportedRates.end();
}

AudioSignal load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open wav file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw io_error("read failure on wav file: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const size_t n = bytes.size();

  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 ||
      std::memcmp(p + 8, "WAVE", 4) != 0)
    throw validation_error(path + ": not a RIFF/WAVE container");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  size_t data_off = 0, data_len = 0;

  size_t off = 12;
  while (off + 8 <= n) {
    const char* id = bytes.data() + off;
    uint32_t chunk_len = read_u32(p + off + 4);
    size_t body = off + 8;
    if (body + chunk_len > n) chunk_len = static_cast<uint32_t>(n - body);
    if (std::memcmp(id, "fmt ", 4) == 0 && chunk_len >= 16) {
      format = read_u16(p + body);
      channels = read_u16(p + body + 2);
      rate = read_u32(p + body + 4);
      bits = read_u16(p + body + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_len = chunk_len;
    }
    off = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw validation_error(path + ": missing fmt chunk");
  const bool pcm16 = format == 1 && bits == 16;
  const bool float32 = format == 3 && bits == 32;
  if (!pcm16 && !float32)
    throw validation_error(path + ": unsupported encoding (format tag " +
                           std::to_string(format) + ", " +
                           std::to_string(bits) + " bits); expected PCM16 or "
                           "float32");
  if (channels != 1 && channels != 2)
    throw validation_error(path + ": unsupported channel count " +
                           std::to_string(channels));
  if (!sample_rate_supported(static_cast<int>(rate)))
    throw validation_error(path + ": unsupported sample rate " +
                           std::to_string(rate) + " Hz");

  const size_t bytes_per = bits / 8;
  const size_t frame_bytes = bytes_per * channels;
  const size_t n_frames = frame_bytes ? data_len / frame_bytes : 0;
  if (n_frames == 0) throw validation_error(path + ": zero-length audio");

  AudioSignal sig;
  sig.sample_rate = static_cast<int>(rate);
  sig.source_id = std::filesystem::path(path).filename().string();
  sig.samples.resize(n_frames);

  const unsigned char* d = p + data_off;
  for (size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const unsigned char* s = d + i * frame_bytes + c * bytes_per;
      if (pcm16) {
        int16_t v = static_cast<int16_t>(s[0] | (s[1] << 8));
        acc += v / 32768.0;
      } else {
        uint32_t u = read_u32(s);
        float f;
        std::memcpy(&f, &u, 4);
        if (!std::isfinite(f))
          throw validation_error(path + ": non-finite sample value");
        acc += f;
      }
    }
    sig.samples[i] = acc / channels;
  }

  const double mean =
      std::accumulate(sig.samples.begin(), sig.samples.end(), 0.0) /
      static_cast<double>(sig.samples.size());
  double peak = 0.0;
  for (double& s : sig.samples) {
    s -= mean;
    peak = std::max(peak, std::abs(s));
  }
  if (peak > 1.0)
    for (double& s : sig.samples) s /= peak;
  return sig;
}

void write_wav16(const std::string& path, const std::vector<double>& samples,
                 int sample_rate) {
  std::string out;
  out.reserve(44 + samples.size() * 2);
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  out.append("RIFF");
  put_u32(out, 36 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<uint32_t>(sample_rate));
  put_u32(out, static_cast<uint32_t>(sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.append("data");
  put_u32(out, data_bytes);
  for (double s : samples) {
    double v = std::clamp(s, -1.0, 1.0) * 32767.0;
    auto q = static_cast<int16_t>(std::lrint(v));
    put_u16(out, static_cast<uint16_t>(q));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw io_error("write failure: " + path);
}

std::vector<double> hamming_window(int len) {
  std::vector<double> w(len, 1.0);
  if (len < 2) return w;
  for (int k = 0; k < len; ++k)
    w[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / (len - 1));
  return w;
}

FrameSequence frame_signal(const AudioSignal& signal, double frame_ms,
                           double hop_ms, WindowKind window) {
  if (!(hop_ms > 0.0) || frame_ms < hop_ms)
    throw validation_error("framing requires frame_ms >= hop_ms > 0");
  const int frame_len =
      static_cast<int>(std::lround(frame_ms * signal.sample_rate / 1000.0));
  const int hop =
      static_cast<int>(std::lround(hop_ms * signal.sample_rate / 1000.0));
  if (frame_len <= 0 || hop <= 0)
    throw validation_error("framing produced an empty frame or hop");
  const auto n = static_cast<long>(signal.samples.size());
  if (n < frame_len)
    throw validation_error(
        "signal too short: " + std::to_string(n) + " samples, need at least " +
        std::to_string(frame_len));
  const int count = static_cast<int>((n - frame_len) / hop) + 1;

  std::vector<double> data(static_cast<size_t>(count) * frame_len);
  const std::vector<double> w = window == WindowKind::hamming
                                    ? hamming_window(frame_len)
                                    : std::vector<double>();
  for (int i = 0; i < count; ++i) {
    const double* src = signal.samples.data() + static_cast<size_t>(i) * hop;
    double* dst = data.data() + static_cast<size_t>(i) * frame_len;
    if (w.empty())
      std::copy(src, src + frame_len, dst);
    else
      for (int k = 0; k < frame_len; ++k) dst[k] = src[k] * w[k];
  }
  return FrameSequence(std::move(data), frame_len, hop, count, window,
                       signal.sample_rate);
}

}  // namespace cvf
