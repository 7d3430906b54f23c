#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rfsc/errors.hpp"
#include "rfsc/sigproc/stft.hpp"

namespace rfsc {

// Global detection threshold: per-frequency time-averaged power mu(f),
// then threshold = mean_f(mu) + alpha * population-std_f(mu).
struct ThresholdStats {
  std::vector<double> mu_per_freq;
  double mu_bar = 0.0;
  double sigma_mu = 0.0;
  double alpha = 0.0;
  double threshold = 0.0;
};

inline ThresholdStats compute_threshold(const Spectrogram& spec, double alpha) {
  if (spec.n_freq == 0 || spec.n_time == 0)
    throw ConfigInvalid("spectrogram is empty");

  ThresholdStats st;
  st.alpha = alpha;
  st.mu_per_freq.assign(spec.n_freq, 0.0);
  for (std::size_t t = 0; t < spec.n_time; ++t) {
    const std::complex<double>* row = spec.values.data() + t * spec.n_freq;
    for (std::size_t f = 0; f < spec.n_freq; ++f)
      st.mu_per_freq[f] += std::norm(row[f]);
  }
  const double nt = static_cast<double>(spec.n_time);
  for (double& m : st.mu_per_freq) m /= nt;

  double sum = 0.0;
  for (double m : st.mu_per_freq) sum += m;
  st.mu_bar = sum / static_cast<double>(spec.n_freq);

  double var = 0.0;
  for (double m : st.mu_per_freq) {
    const double d = m - st.mu_bar;
    var += d * d;
  }
  st.sigma_mu = std::sqrt(var / static_cast<double>(spec.n_freq));
  st.threshold = st.mu_bar + alpha * st.sigma_mu;
  return st;
}

struct DetectionMask {
  std::vector<std::uint8_t> bits;  // frame-major, same layout as Spectrogram
  std::size_t n_freq = 0;
  std::size_t n_time = 0;

  bool at(std::size_t f, std::size_t t) const {
    return bits[t * n_freq + f] != 0;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint8_t b : bits) c += b;
    return c;
  }
};

// Strict comparison: cells equal to the threshold stay off.
inline DetectionMask apply_threshold(const Spectrogram& spec,
                                     const ThresholdStats& stats) {
  if (stats.mu_per_freq.size() != spec.n_freq)
    throw ShapeMismatch("threshold stats were computed for a different grid");

  DetectionMask mask;
  mask.n_freq = spec.n_freq;
  mask.n_time = spec.n_time;
  mask.bits.assign(spec.n_freq * spec.n_time, 0);
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    mask.bits[i] = std::norm(spec.values[i]) > stats.threshold ? 1 : 0;
  return mask;
}

}  // namespace rfsc
