#pragma once

#include <algorithm>
#include <vector>

#include "rfsc/errors.hpp"
#include "rfsc/sigproc/pulse.hpp"

namespace rfsc {

enum class Region { A, B, C, Unknown };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::Unknown: return "unknown";
  }
  return "?";
}

struct Shot {
  int index = 0;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  std::vector<Pulse> pulses;
  std::vector<Region> region_labels;  // parallel to pulses
};

// Split a time-ordered pulse list into shots wherever the idle time between
// one pulse's end (running max, so nested pulses don't confuse it) and the
// next pulse's start strictly exceeds gap_threshold_s.
inline std::vector<Shot> segment_shots(const std::vector<Pulse>& pulses,
                                       double gap_threshold_s = 1e-3) {
  if (gap_threshold_s <= 0.0)
    throw ConfigInvalid("gap threshold must be positive");
  std::vector<Shot> shots;
  if (pulses.empty()) return shots;

  Shot cur;
  cur.index = 0;
  double latest_end = pulses.front().t_end_s;
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    const Pulse& p = pulses[i];
    if (i > 0 && p.t_start_s < pulses[i - 1].t_start_s)
      throw ConfigInvalid("pulses must be ordered by start time");
    if (!cur.pulses.empty() && p.t_start_s - latest_end > gap_threshold_s) {
      shots.push_back(std::move(cur));
      cur = Shot{};
      cur.index = static_cast<int>(shots.size());
    }
    cur.pulses.push_back(p);
    latest_end = cur.pulses.size() == 1 ? p.t_end_s
                                        : std::max(latest_end, p.t_end_s);
  }
  shots.push_back(std::move(cur));

  for (Shot& s : shots) {
    s.t_start_s = s.pulses.front().t_start_s;
    s.t_end_s = s.pulses.front().t_end_s;
    for (const Pulse& p : s.pulses) {
      s.t_start_s = std::min(s.t_start_s, p.t_start_s);
      s.t_end_s = std::max(s.t_end_s, p.t_end_s);
    }
    s.region_labels.assign(s.pulses.size(), Region::Unknown);
  }
  return shots;
}

}  // namespace rfsc
