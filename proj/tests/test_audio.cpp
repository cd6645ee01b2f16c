#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "cvfspeech/audio.hpp"
#include "helpers.hpp"

using namespace cvf;
using namespace testutil;

TEST_CASE("constant pcm16 file is zero after dc removal") {
  TempDir tmp("audio");
  const std::string path = tmp.file("const.wav");
  write_raw_wav(path, std::vector<int16_t>(1000, 16384), 1, 16000);

  const AudioSignal sig = load_wav(path);
  CHECK(sig.sample_rate == 16000);
  CHECK(sig.source_id == "const.wav");
  REQUIRE(sig.samples.size() == 1000);
  for (double s : sig.samples) CHECK(std::abs(s) <= 1e-12);
}

TEST_CASE("opposite stereo channels cancel to silence") {
  TempDir tmp("audio");
  const std::string path = tmp.file("stereo.wav");
  std::vector<int16_t> interleaved;
  for (int i = 0; i < 500; ++i) {
    interleaved.push_back(16384);
    interleaved.push_back(-16384);
  }
  write_raw_wav(path, interleaved, 2, 16000);

  const AudioSignal sig = load_wav(path);
  REQUIRE(sig.samples.size() == 500);
  for (double s : sig.samples) CHECK(s == 0.0);
}

TEST_CASE("tone survives the loader sample for sample") {
  TempDir tmp("audio");
  const std::string path = tmp.file("tone.wav");
  std::vector<int16_t> q(16000);
  double mean = 0.0;
  for (size_t k = 0; k < q.size(); ++k) {
    const double v =
        0.5 * std::sin(2.0 * std::numbers::pi * 200.0 * k / 16000.0);
    q[k] = static_cast<int16_t>(std::lrint(v * 32767.0));
    mean += q[k] / 32768.0;
  }
  mean /= static_cast<double>(q.size());
  write_raw_wav(path, q, 1, 16000);

  const AudioSignal sig = load_wav(path);
  REQUIRE(sig.samples.size() == 16000);
  double peak = 0.0, got_mean = 0.0;
  for (size_t k = 0; k < q.size(); ++k) {
    CHECK_NEAR(sig.samples[k], q[k] / 32768.0 - mean, 1e-12);
    peak = std::max(peak, std::abs(sig.samples[k]));
    got_mean += sig.samples[k];
  }
  CHECK_NEAR(peak, 0.5, 1e-3);
  CHECK(std::abs(got_mean / 16000.0) <= 1e-12);
}

TEST_CASE("float32 wav loads") {
  TempDir tmp("audio");
  const std::string path = tmp.file("f32.wav");
  // hand-build a float32 file: 8 samples of 0.25
  std::string out;
  auto u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i)
      out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto u16 = [&](uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  out += "RIFF";
  u32(36 + 32);
  out += "WAVEfmt ";
  u32(16);
  u16(3);
  u16(1);
  u32(16000);
  u32(16000 * 4);
  u16(4);
  u16(32);
  out += "data";
  u32(32);
  const float v = 0.25f;
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  for (int i = 0; i < 8; ++i) u32(bits);
  std::ofstream(path, std::ios::binary)
      .write(out.data(), static_cast<std::streamsize>(out.size()));

  const AudioSignal sig = load_wav(path);
  REQUIRE(sig.samples.size() == 8);
  for (double s : sig.samples) CHECK(std::abs(s) <= 1e-12);  // constant - mean
}

TEST_CASE("loader rejects bad inputs with the offending property") {
  TempDir tmp("audio");

  SUBCASE("missing file") {
    try {
      load_wav(tmp.file("nope.wav"));
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::io);
    }
  }
  SUBCASE("non-pcm encoding") {
    const std::string path = tmp.file("alaw.wav");
    write_raw_wav(path, std::vector<int16_t>(100, 5), 1, 16000, /*format=*/6);
    try {
      load_wav(path);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("encoding") != std::string::npos);
    }
  }
  SUBCASE("zero-length audio") {
    const std::string path = tmp.file("empty.wav");
    write_raw_wav(path, {}, 1, 16000);
    try {
      load_wav(path);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("zero-length") != std::string::npos);
    }
  }
  SUBCASE("unsupported sample rate") {
    const std::string path = tmp.file("rate.wav");
    write_raw_wav(path, std::vector<int16_t>(100, 5), 1, 11025);
    try {
      load_wav(path);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("11025") != std::string::npos);
    }
  }
  SUBCASE("not riff") {
    const std::string path = tmp.file("junk.wav");
    std::ofstream(path) << "this is not audio";
    CHECK_THROWS_AS(load_wav(path), Error);
  }
}

TEST_CASE("loading is deterministic") {
  TempDir tmp("audio");
  const std::string path = tmp.file("det.wav");
  std::vector<int16_t> q(4096);
  SplitMix64 rng(7);
  for (auto& s : q)
    s = static_cast<int16_t>(std::lrint(rng.uniform_pm1() * 20000.0));
  write_raw_wav(path, q, 1, 16000);
  const AudioSignal a = load_wav(path);
  const AudioSignal b = load_wav(path);
  CHECK(a.samples == b.samples);
}

TEST_CASE("framing arithmetic") {
  const AudioSignal sig = signal_of(silence(1.0, 16000), 16000);
  const FrameSequence frames =
      frame_signal(sig, 25.0, 10.0, WindowKind::rectangular);
  CHECK(frames.frame_len() == 400);
  CHECK(frames.hop() == 160);
  CHECK(frames.count() == 98);
}

TEST_CASE("rectangular non-overlapping frames partition the signal") {
  AudioSignal sig = signal_of(noise(0.8, 4321, 99), 16000);
  const FrameSequence frames =
      frame_signal(sig, 25.0, 25.0, WindowKind::rectangular);
  size_t pos = 0;
  for (int i = 0; i < frames.count(); ++i)
    for (double v : frames.frame(i)) CHECK(v == sig.samples[pos++]);
  CHECK(pos == static_cast<size_t>(frames.count()) * frames.frame_len());
}

TEST_CASE("too-short signal reports the required minimum") {
  const AudioSignal sig = signal_of(std::vector<double>(399, 0.1), 16000);
  try {
    frame_signal(sig, 25.0, 10.0, WindowKind::rectangular);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("400") != std::string::npos);
  }
}

TEST_CASE("hamming window endpoints and symmetry") {
  const auto w = hamming_window(400);
  CHECK(std::abs(w[0] - 0.08) <= 1e-12);
  CHECK(std::abs(w[399] - 0.08) <= 1e-12);
  for (int k = 0; k < 200; ++k) CHECK_NEAR(w[k], w[399 - k], 1e-12);
  CHECK(w[200] > 0.99);  // near the peak
}

TEST_CASE("wav writer round-trips through the loader") {
  TempDir tmp("audio");
  const std::string path = tmp.file("rt.wav");
  std::vector<double> samples = tone(250.0, 0.4, 0.25, 16000);
  write_wav16(path, samples, 16000);
  const AudioSignal sig = load_wav(path);
  REQUIRE(sig.samples.size() == samples.size());
  // quantization plus dc removal: 1/32768 resolution
  for (size_t k = 0; k < samples.size(); ++k)
    CHECK_NEAR(sig.samples[k], samples[k], 2.0 / 32768.0);
}
