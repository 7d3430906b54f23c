#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <rfsc/rfsc.hpp>

#include "../support.hpp"

TEST_CASE("hann window endpoints, symmetry and hand values") {
  const auto w4 = rfsc::hann_window(4);
  REQUIRE(w4.size() == 4);
  REQUIRE(w4[0] == 0.0);
  REQUIRE(w4[3] == 0.0);
  REQUIRE(w4[1] == Catch::Approx(0.75).margin(1e-15));
  REQUIRE(w4[2] == Catch::Approx(0.75).margin(1e-15));

  const auto w101 = rfsc::hann_window(101);
  REQUIRE(w101[50] == Catch::Approx(1.0).margin(1e-15));
  for (std::size_t i = 0; i < 101; ++i)
    REQUIRE(w101[i] == Catch::Approx(w101[100 - i]).margin(1e-15));

  REQUIRE(rfsc::hann_window(1) == std::vector<double>{1.0});
}

TEST_CASE("all-zero trace gives an all-zero grid with 3 frames") {
  rfsc::SampleTrace t;
  t.sample_rate_hz = 122.88e6;
  t.samples.assign(4096, 0.0);
  const auto spec = rfsc::compute_stft(t);
  REQUIRE(spec.n_time == 3);
  REQUIRE(spec.n_freq == 1025);
  for (const auto& v : spec.values) REQUIRE(std::norm(v) == 0.0);
}

TEST_CASE("single-frame shape at the default grid") {
  rfsc::SampleTrace t;
  t.sample_rate_hz = 122.88e6;
  t.samples.assign(2048, 0.0);
  const auto spec = rfsc::compute_stft(t);
  REQUIRE(spec.n_time == 1);
  REQUIRE(spec.n_freq == 1025);
  REQUIRE(spec.bin_hz == Catch::Approx(60e3).epsilon(1e-12));
  REQUIRE(spec.hop_s == Catch::Approx(1024.0 / 122.88e6).epsilon(1e-12));
}

TEST_CASE("a trace shorter than one segment is rejected") {
  rfsc::SampleTrace t;
  t.sample_rate_hz = 122.88e6;
  t.samples.assign(2047, 0.0);
  REQUIRE_THROWS_AS(rfsc::compute_stft(t), rfsc::TraceTooShort);
}

TEST_CASE("bin-centered tone concentrates power around its bin") {
  const double fs = 122.88e6;
  const std::size_t n = 2048, k = 64;
  const double f = static_cast<double>(k) * fs / static_cast<double>(n);
  rfsc::SampleTrace t;
  t.sample_rate_hz = fs;
  t.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    t.samples[i] =
        std::cos(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs);

  const auto spec = rfsc::compute_stft(t);
  const double peak = spec.power(k, 0);
  REQUIRE(peak > 0.0);
  for (std::size_t b = 0; b < spec.n_freq; ++b) {
    const std::size_t d = b > k ? b - k : k - b;
    if (d > 2) REQUIRE(spec.power(b, 0) < 1e-6 * peak);
  }
}

TEST_CASE("grid values match a brute-force windowed DFT") {
  rfsc::StftConfig cfg;
  cfg.segment_len = 64;
  cfg.overlap_len = 32;

  auto t = testsup::noise_trace(300, 1e6, 41);
  t.start_time_s = 0.5;
  const auto spec = rfsc::compute_stft(t, cfg);
  REQUIRE(spec.n_time == 8);  // trailing 12 samples dropped
  REQUIRE(spec.n_freq == 33);
  REQUIRE(spec.origin_time_s == 0.5);

  const auto win = rfsc::hann_window(64);
  double worst = 0.0;
  for (std::size_t fr = 0; fr < spec.n_time; ++fr) {
    std::vector<std::complex<double>> seg(64);
    for (std::size_t i = 0; i < 64; ++i)
      seg[i] = win[i] * t.samples[fr * 32 + i];
    const auto want = testsup::dft(seg);
    for (std::size_t f = 0; f < spec.n_freq; ++f)
      worst = std::max(worst, std::abs(spec.at(f, fr) - want[f]));
    REQUIRE(spec.time_of(fr) ==
            Catch::Approx(0.5 + static_cast<double>(fr) * 32.0 / 1e6));
  }
  REQUIRE(worst < 1e-9);
}

TEST_CASE("non-power-of-two segment lengths take the direct path") {
  rfsc::StftConfig cfg;
  cfg.segment_len = 48;
  cfg.overlap_len = 24;

  const auto t = testsup::noise_trace(150, 2e6, 55);
  const auto spec = rfsc::compute_stft(t, cfg);
  REQUIRE(spec.n_time == 5);
  REQUIRE(spec.n_freq == 25);

  const auto win = rfsc::hann_window(48);
  for (std::size_t fr = 0; fr < spec.n_time; ++fr) {
    std::vector<std::complex<double>> seg(48);
    for (std::size_t i = 0; i < 48; ++i)
      seg[i] = win[i] * t.samples[fr * 24 + i];
    const auto want = testsup::dft(seg);
    for (std::size_t f = 0; f < spec.n_freq; ++f)
      REQUIRE(std::abs(spec.at(f, fr) - want[f]) < 1e-9);
  }
}

TEST_CASE("stft config validation") {
  rfsc::StftConfig cfg;
  cfg.segment_len = 0;
  REQUIRE_THROWS_AS(cfg.validate(), rfsc::ConfigInvalid);
  cfg.segment_len = 64;
  cfg.overlap_len = 64;
  REQUIRE_THROWS_AS(cfg.validate(), rfsc::ConfigInvalid);
  cfg.overlap_len = 63;
  REQUIRE_NOTHROW(cfg.validate());
  REQUIRE(cfg.hop() == 1);
}
