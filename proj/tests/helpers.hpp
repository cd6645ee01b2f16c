#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "cvfspeech/audio.hpp"

// absolute-tolerance comparison (the vendored doctest Approx is relative)
#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))
#define REQUIRE_NEAR(a, b, tol) REQUIRE(std::abs((a) - (b)) <= (tol))

namespace testutil {

// Bit-exact counterpart of tests/oracles/splitmix.py; fixtures generated
// here match the python oracle scripts sample for sample.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() {
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  double gauss() {
    const double u1 = static_cast<double>((next() >> 11) + 1) *
                      (1.0 / 9007199254740992.0);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }
};

inline std::vector<double> tone(double freq, double amp, double duration_s,
                                int fs) {
  const auto n = static_cast<size_t>(std::lround(duration_s * fs));
  std::vector<double> out(n);
  for (size_t k = 0; k < n; ++k)
    out[k] = amp * std::sin(2.0 * std::numbers::pi * freq *
                            static_cast<double>(k) / fs);
  return out;
}

inline std::vector<double> silence(double duration_s, int fs) {
  return std::vector<double>(static_cast<size_t>(std::lround(duration_s * fs)),
                             0.0);
}

inline std::vector<double> noise(double amp, size_t n, uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = amp * rng.uniform_pm1();
  return out;
}

inline void append(std::vector<double>& dst, const std::vector<double>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

inline cvf::AudioSignal signal_of(std::vector<double> samples, int fs,
                                  std::string id = "test") {
  return {std::move(samples), fs, std::move(id)};
}

// Raw RIFF writer independent of cvf::write_wav16, for loader tests.
inline void write_raw_wav(const std::string& path,
                          const std::vector<int16_t>& interleaved,
                          int channels, uint32_t rate, uint16_t format_tag = 1,
                          uint16_t bits = 16) {
  std::string out;
  auto u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto u16 = [&](uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  const uint32_t data_bytes = static_cast<uint32_t>(interleaved.size() * 2);
  out += "RIFF";
  u32(36 + data_bytes);
  out += "WAVEfmt ";
  u32(16);
  u16(format_tag);
  u16(static_cast<uint16_t>(channels));
  u32(rate);
  u32(rate * channels * (bits / 8));
  u16(static_cast<uint16_t>(channels * (bits / 8)));
  u16(bits);
  out += "data";
  u32(data_bytes);
  for (int16_t s : interleaved) u16(static_cast<uint16_t>(s));
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("cvfspeech_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  std::string dir() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
