#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rfsc/errors.hpp"

namespace rfsc {

struct FrequencyBand {
  double low_hz = 0.0;
  double high_hz = 0.0;

  bool contains(double f) const { return f >= low_hz && f <= high_hz; }
};

// Default search band for double-pass AOM drive tones.
inline constexpr FrequencyBand kAomBand{80e6, 250e6};

// Fold a signal frequency into the first Nyquist zone [0, fs/2].
inline double alias_frequency(double f_sig_hz, double f_s_hz) {
  if (f_s_hz <= 0.0) throw ConfigInvalid("sample rate must be positive");
  double r = std::fmod(std::fabs(f_sig_hz), f_s_hz);
  if (r > f_s_hz / 2.0) r = f_s_hz - r;
  return r;
}

// All candidate true frequencies |k*fs +/- f_alias|, k = 0..k_max, that fall
// inside the band. Sorted ascending, duplicates removed.
inline std::vector<double> dealias_candidates(double f_alias_hz, double f_s_hz,
                                              int k_max,
                                              FrequencyBand band = kAomBand) {
  if (f_s_hz <= 0.0) throw ConfigInvalid("sample rate must be positive");
  if (f_alias_hz < 0.0 || f_alias_hz > f_s_hz / 2.0)
    throw ConfigInvalid("alias frequency outside [0, fs/2]");
  if (k_max < 0) throw ConfigInvalid("k_max must be non-negative");
  if (band.low_hz > band.high_hz || band.low_hz < 0.0)
    throw InvalidBand("band low must be in [0, band high]");

  std::vector<double> out;
  for (int k = 0; k <= k_max; ++k) {
    const double base = static_cast<double>(k) * f_s_hz;
    const double up = base + f_alias_hz;
    const double dn = std::fabs(base - f_alias_hz);
    if (band.contains(up)) out.push_back(up);
    if (band.contains(dn)) out.push_back(dn);
  }
  std::sort(out.begin(), out.end());
  const double eps = 1e-6;  // Hz; candidates this close count as one image
  out.erase(std::unique(out.begin(), out.end(),
                        [eps](double a, double b) { return b - a < eps; }),
            out.end());
  return out;
}

}  // namespace rfsc
