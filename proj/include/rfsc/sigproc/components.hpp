#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "rfsc/errors.hpp"
#include "rfsc/sigproc/threshold.hpp"

namespace rfsc {

// Connected region of set mask cells under 8-connectivity.
struct Component {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;  // (t, f), sorted
  std::uint32_t min_t = 0, max_t = 0;
  std::uint32_t min_f = 0, max_f = 0;
};

// BFS flood fill over the mask. Components smaller than min_cells are
// dropped. Output is ordered by (min time index, min frequency index),
// final tie-break on the lexicographically smallest cell.
inline std::vector<Component> label_components(const DetectionMask& mask,
                                               std::size_t min_cells = 1) {
  if (mask.bits.size() != mask.n_freq * mask.n_time)
    throw ShapeMismatch("mask storage does not match its declared shape");

  const std::int64_t nt = static_cast<std::int64_t>(mask.n_time);
  const std::int64_t nf = static_cast<std::int64_t>(mask.n_freq);
  std::vector<std::uint8_t> seen(mask.bits.size(), 0);
  std::vector<Component> comps;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;

  for (std::int64_t t0 = 0; t0 < nt; ++t0) {
    for (std::int64_t f0 = 0; f0 < nf; ++f0) {
      const std::size_t idx0 = static_cast<std::size_t>(t0 * nf + f0);
      if (!mask.bits[idx0] || seen[idx0]) continue;

      Component c;
      stack.clear();
      stack.emplace_back(static_cast<std::uint32_t>(t0),
                         static_cast<std::uint32_t>(f0));
      seen[idx0] = 1;
      while (!stack.empty()) {
        const auto [t, f] = stack.back();
        stack.pop_back();
        c.cells.emplace_back(t, f);
        for (std::int64_t dt = -1; dt <= 1; ++dt) {
          for (std::int64_t df = -1; df <= 1; ++df) {
            if (dt == 0 && df == 0) continue;
            const std::int64_t tn = static_cast<std::int64_t>(t) + dt;
            const std::int64_t fn = static_cast<std::int64_t>(f) + df;
            if (tn < 0 || tn >= nt || fn < 0 || fn >= nf) continue;
            const std::size_t idx = static_cast<std::size_t>(tn * nf + fn);
            if (!mask.bits[idx] || seen[idx]) continue;
            seen[idx] = 1;
            stack.emplace_back(static_cast<std::uint32_t>(tn),
                               static_cast<std::uint32_t>(fn));
          }
        }
      }
      if (c.cells.size() < min_cells) continue;

      std::sort(c.cells.begin(), c.cells.end());
      c.min_t = c.max_t = c.cells.front().first;
      c.min_f = c.max_f = c.cells.front().second;
      for (const auto& [t, f] : c.cells) {
        c.min_t = std::min(c.min_t, t);
        c.max_t = std::max(c.max_t, t);
        c.min_f = std::min(c.min_f, f);
        c.max_f = std::max(c.max_f, f);
      }
      comps.push_back(std::move(c));
    }
  }

  std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    if (a.min_t != b.min_t) return a.min_t < b.min_t;
    if (a.min_f != b.min_f) return a.min_f < b.min_f;
    return a.cells.front() < b.cells.front();
  });
  return comps;
}

}  // namespace rfsc
