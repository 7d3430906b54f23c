#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "rfsc/errors.hpp"
#include "rfsc/sigproc/fft.hpp"
#include "rfsc/sigproc/trace.hpp"

namespace rfsc {

enum class Window { Hann };

struct StftConfig {
  std::size_t segment_len = 2048;
  std::size_t overlap_len = 1024;
  Window window = Window::Hann;

  std::size_t hop() const { return segment_len - overlap_len; }

  void validate() const {
    if (segment_len == 0) throw ConfigInvalid("segment_len must be positive");
    if (overlap_len >= segment_len)
      throw ConfigInvalid("overlap_len must be smaller than segment_len");
  }
};

// Symmetric Hann, N-1 in the denominator.
inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                 static_cast<double>(i) / denom));
  return w;
}

// One-sided complex spectrogram. Stored frame-major: frame t occupies
// values[t * n_freq .. t * n_freq + n_freq). Frame t covers input samples
// [t * hop, t * hop + segment_len) and is stamped with the window start,
// i.e. time_of(t) = origin_time_s + t * hop_s.
struct Spectrogram {
  std::vector<std::complex<double>> values;
  std::size_t n_freq = 0;
  std::size_t n_time = 0;
  double bin_hz = 0.0;
  double hop_s = 0.0;
  double origin_time_s = 0.0;
  double sample_rate_hz = 0.0;

  const std::complex<double>& at(std::size_t f, std::size_t t) const {
    return values[t * n_freq + f];
  }
  double power(std::size_t f, std::size_t t) const { return std::norm(at(f, t)); }
  double time_of(std::size_t t) const {
    return origin_time_s + static_cast<double>(t) * hop_s;
  }
  double freq_of(std::size_t f) const { return static_cast<double>(f) * bin_hz; }
};

// Trailing samples that do not fill a whole segment are dropped.
inline Spectrogram compute_stft(const SampleTrace& trace,
                                const StftConfig& cfg = {}) {
  cfg.validate();
  validate(trace);
  if (trace.samples.size() < cfg.segment_len)
    throw TraceTooShort("trace shorter than one segment (" +
                        std::to_string(trace.samples.size()) + " < " +
                        std::to_string(cfg.segment_len) + ")");

  const std::size_t n = cfg.segment_len;
  const std::size_t hop = cfg.hop();

  Spectrogram out;
  out.n_freq = n / 2 + 1;
  out.n_time = (trace.samples.size() - n) / hop + 1;
  out.bin_hz = trace.sample_rate_hz / static_cast<double>(n);
  out.hop_s = static_cast<double>(hop) / trace.sample_rate_hz;
  out.origin_time_s = trace.start_time_s;
  out.sample_rate_hz = trace.sample_rate_hz;
  out.values.resize(out.n_freq * out.n_time);

  const std::vector<double> win = hann_window(n);
  const FftPlan plan(n);
  std::vector<std::complex<double>> buf(n);

  for (std::size_t t = 0; t < out.n_time; ++t) {
    const double* src = trace.samples.data() + t * hop;
    for (std::size_t i = 0; i < n; ++i) buf[i] = {win[i] * src[i], 0.0};
    plan.forward(buf.data());
    std::complex<double>* dst = out.values.data() + t * out.n_freq;
    for (std::size_t f = 0; f < out.n_freq; ++f) dst[f] = buf[f];
  }
  return out;
}

}  // namespace rfsc
