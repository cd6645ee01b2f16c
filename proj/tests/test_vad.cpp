#include <doctest.h>

#include <cmath>

#include "cvfspeech/vad.hpp"
#include "helpers.hpp"

using namespace cvf;
using namespace testutil;

TEST_CASE("short-time energy basics") {
  SUBCASE("all-zero frames") {
    const AudioSignal sig = signal_of(silence(0.5, 16000), 16000);
    const auto frames = frame_signal(sig, 25.0, 10.0, WindowKind::rectangular);
    for (double e : short_time_energy(frames)) CHECK(e == 0.0);
  }
  SUBCASE("constant 0.5 gives 0.25") {
    const AudioSignal sig = signal_of(std::vector<double>(8000, 0.5), 16000);
    const auto frames = frame_signal(sig, 25.0, 10.0, WindowKind::rectangular);
    for (double e : short_time_energy(frames)) CHECK_NEAR(e, 0.25, 1e-12);
  }
  SUBCASE("full-cycle unit sine gives one half") {
    // 40 Hz at 16 kHz: exactly one cycle per 400-sample frame
    const AudioSignal sig = signal_of(tone(40.0, 1.0, 0.5, 16000), 16000);
    const auto frames = frame_signal(sig, 25.0, 10.0, WindowKind::rectangular);
    const auto energy = short_time_energy(frames);
    CHECK_NEAR(energy[0], 0.5, 1e-3);
  }
}

TEST_CASE("digital silence is entirely unvoiced") {
  const AudioSignal sig = signal_of(silence(3.0, 16000), 16000);
  const VadConfig cfg;
  for (char v : frame_voicing(sig, cfg)) CHECK(v == 0);

  const SegmentMap map = segment_voicing(sig, cfg);
  REQUIRE(map.segments.size() == 1);
  CHECK(map.segments[0].kind == SegmentKind::unvoiced);
  CHECK(map.segments[0].start_s == 0.0);
  CHECK_NEAR(map.segments[0].end_s, 3.0, 1e-12);
}

TEST_CASE("steady tone is voiced almost everywhere") {
  const AudioSignal sig = signal_of(tone(200.0, 0.5, 1.0, 16000), 16000);
  const auto flags = frame_voicing(sig, VadConfig{});
  int voiced = 0;
  for (char v : flags) voiced += v != 0;
  CHECK(voiced >= static_cast<int>(0.95 * flags.size()));
}

TEST_CASE("white noise is mostly unvoiced") {
  const AudioSignal sig = signal_of(noise(0.5, 16000, 4242), 16000);
  const auto flags = frame_voicing(sig, VadConfig{});
  int voiced = 0;
  for (char v : flags) voiced += v != 0;
  CHECK(voiced <= static_cast<int>(0.10 * flags.size()));
}

TEST_CASE("tone-silence-tone maps to three segments") {
  std::vector<double> samples = tone(200.0, 0.5, 1.0, 16000);
  append(samples, silence(1.0, 16000));
  append(samples, tone(200.0, 0.5, 1.0, 16000));
  const AudioSignal sig = signal_of(std::move(samples), 16000);

  const SegmentMap map = segment_voicing(sig, VadConfig{});
  REQUIRE(map.segments.size() == 3);
  CHECK(map.segments[0].kind == SegmentKind::voiced);
  CHECK(map.segments[1].kind == SegmentKind::unvoiced);
  CHECK(map.segments[2].kind == SegmentKind::voiced);
  const double tol = 2.0 * 0.010;
  for (const auto& seg : map.segments)
    CHECK(std::abs(seg.duration_s() - 1.0) <= tol);

  double sum = 0.0;
  for (const auto& seg : map.segments) sum += seg.duration_s();
  CHECK(std::abs(sum - map.total_duration_s) <= 1e-9);
}

TEST_CASE("a 30 ms burst inside silence is absorbed") {
  std::vector<double> samples = silence(1.0, 16000);
  append(samples, tone(200.0, 0.5, 0.03, 16000));
  append(samples, silence(1.0, 16000));
  const AudioSignal sig = signal_of(std::move(samples), 16000);

  VadConfig cfg;
  cfg.min_segment_ms = 50.0;
  const SegmentMap map = segment_voicing(sig, cfg);
  REQUIRE(map.segments.size() == 1);
  CHECK(map.segments[0].kind == SegmentKind::unvoiced);
}

TEST_CASE("voicing flags are invariant under amplitude scaling") {
  std::vector<double> samples = tone(150.0, 0.3, 0.8, 16000);
  append(samples, noise(0.1, 8000, 17));
  append(samples, tone(220.0, 0.2, 0.6, 16000));
  AudioSignal sig = signal_of(samples, 16000);
  const auto base = frame_voicing(sig, VadConfig{});

  for (double c : {0.1, 2.5, 40.0}) {
    AudioSignal scaled = sig;
    for (double& s : scaled.samples) s *= c;
    CHECK(frame_voicing(scaled, VadConfig{}) == base);
  }
}

TEST_CASE("no surviving segment is shorter than the minimum") {
  // alternating short bursts and pauses around the threshold
  std::vector<double> samples;
  SplitMix64 rng(5);
  for (int i = 0; i < 24; ++i) {
    append(samples, tone(180.0, 0.4, 0.03 + 0.09 * rng.uniform01(), 16000));
    append(samples, silence(0.02 + 0.10 * rng.uniform01(), 16000));
  }
  const AudioSignal sig = signal_of(std::move(samples), 16000);
  VadConfig cfg;
  const SegmentMap map = segment_voicing(sig, cfg);
  REQUIRE(!map.segments.empty());
  if (map.segments.size() > 1)
    for (const auto& seg : map.segments)
      CHECK(seg.duration_s() >= cfg.min_segment_ms / 1000.0 - 1e-9);

  // contiguity and alternation
  CHECK(map.segments.front().start_s == 0.0);
  for (size_t i = 1; i < map.segments.size(); ++i) {
    CHECK_NEAR(map.segments[i].start_s, map.segments[i - 1].end_s, 1e-12);
    CHECK(map.segments[i].kind != map.segments[i - 1].kind);
  }
  CHECK_NEAR(map.segments.back().end_s, map.total_duration_s, 1e-12);
}

TEST_CASE("segment table renders six decimals and tabs") {
  SegmentMap map;
  map.total_duration_s = 2.5;
  map.segments = {{0.0, 1.25, SegmentKind::voiced},
                  {1.25, 2.5, SegmentKind::unvoiced}};
  CHECK(segment_table(map) ==
        "0.000000\t1.250000\tvoiced\n1.250000\t2.500000\tunvoiced\n");
}

TEST_CASE("vad config validation") {
  VadConfig cfg;
  cfg.energy_floor_ratio = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = VadConfig{};
  cfg.hop_ms = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
