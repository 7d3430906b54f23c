// Shared helpers for the test binaries.
#pragma once

#include <unistd.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include <rfsc/rfsc.hpp>

namespace testsup {

// Independent O(n^2) DFT, the reference for every FFT-based result.
inline std::vector<std::complex<double>> dft(
    const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n, {0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(t) / static_cast<double>(n);
      acc += x[t] * std::complex<double>{std::cos(ang), std::sin(ang)};
    }
    out[k] = acc;
  }
  return out;
}

inline rfsc::SampleTrace noise_trace(std::size_t n, double fs,
                                     std::uint64_t seed) {
  rfsc::Rng rng(seed);
  rfsc::SampleTrace t;
  t.sample_rate_hz = fs;
  t.samples.resize(n);
  for (double& v : t.samples) v = rng.normal();
  return t;
}

// Low-rate emission setup that keeps synthesis fast in unit tests. Three
// addressing channels below Nyquist, short templates, wide-open band-pass.
inline rfsc::EmissionConfig light_config() {
  rfsc::EmissionConfig cfg;
  cfg.sample_rate_hz = 10e6;
  cfg.addressing_freq_hz = {2.2e6, 2.8e6, 3.4e6};
  cfg.bandpass_hz = {0.05e6, 4.9e6};
  cfg.region_a_template = {{1.2e6, 100e-6}, {1.7e6, 80e-6}};
  cfg.region_c_template = {{4.2e6, 120e-6}};
  return cfg;
}

// STFT grid matched to light_config: 25.6 us segments, 39 kHz bins.
inline rfsc::StftConfig light_stft() {
  rfsc::StftConfig cfg;
  cfg.segment_len = 256;
  cfg.overlap_len = 128;
  return cfg;
}

// Unique temp path under the system temp dir; removed lazily by the OS.
inline std::string tmp_path(const std::string& name) {
  static int counter = 0;
  const auto dir =
      std::filesystem::temp_directory_path() /
      ("rfsc_tests_" + std::to_string(static_cast<long>(::getpid())));
  std::filesystem::create_directories(dir);
  return (dir / (std::to_string(counter++) + "_" + name)).string();
}

}  // namespace testsup
