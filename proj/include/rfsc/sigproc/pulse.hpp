#pragma once

#include <algorithm>
#include <vector>

#include "rfsc/errors.hpp"
#include "rfsc/sigproc/components.hpp"
#include "rfsc/sigproc/stft.hpp"

namespace rfsc {

struct Pulse {
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  double duration_s = 0.0;        // t_end - t_start, frame-start convention
  double center_freq_hz = 0.0;    // power-weighted mean over component cells
  double peak_power = 0.0;        // max cell power
  int component_id = -1;          // index into the component list
};

inline std::vector<Pulse> extract_pulses(const Spectrogram& spec,
                                         const std::vector<Component>& comps) {
  std::vector<Pulse> pulses;
  pulses.reserve(comps.size());
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& c = comps[ci];
    if (c.cells.empty()) continue;
    if (c.max_t >= spec.n_time || c.max_f >= spec.n_freq)
      throw ShapeMismatch("component does not fit the spectrogram grid");

    Pulse p;
    p.component_id = static_cast<int>(ci);
    p.t_start_s = spec.time_of(c.min_t);
    p.t_end_s = spec.time_of(c.max_t);
    p.duration_s = p.t_end_s - p.t_start_s;

    double wsum = 0.0, fsum = 0.0, peak = 0.0;
    for (const auto& [t, f] : c.cells) {
      const double s = spec.power(f, t);
      wsum += s;
      fsum += s * spec.freq_of(f);
      peak = std::max(peak, s);
    }
    p.peak_power = peak;
    if (wsum > 0.0) {
      p.center_freq_hz = fsum / wsum;
    } else {
      // degenerate all-zero component (possible with a negative threshold)
      double acc = 0.0;
      for (const auto& [t, f] : c.cells) acc += spec.freq_of(f);
      p.center_freq_hz = acc / static_cast<double>(c.cells.size());
    }
    pulses.push_back(p);
  }

  std::stable_sort(pulses.begin(), pulses.end(),
                   [](const Pulse& a, const Pulse& b) {
                     if (a.t_start_s != b.t_start_s)
                       return a.t_start_s < b.t_start_s;
                     return a.center_freq_hz < b.center_freq_hz;
                   });
  return pulses;
}

}  // namespace rfsc
