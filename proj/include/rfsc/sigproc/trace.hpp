#pragma once

#include <cmath>
#include <vector>

#include "rfsc/errors.hpp"

namespace rfsc {

// Real-valued sample stream with acquisition metadata. Samples are in
// arbitrary linear units; timing is derived from sample_rate_hz.
struct SampleTrace {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;
  double start_time_s = 0.0;

  double duration_s() const {
    return sample_rate_hz > 0.0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

inline void validate(const SampleTrace& trace) {
  if (trace.sample_rate_hz <= 0.0)
    throw ConfigInvalid("trace sample rate must be positive");
  if (trace.samples.empty()) throw ConfigInvalid("trace has no samples");
  for (double v : trace.samples)
    if (!std::isfinite(v)) throw ConfigInvalid("trace contains non-finite samples");
}

}  // namespace rfsc
