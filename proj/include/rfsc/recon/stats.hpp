#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "rfsc/recon/classify.hpp"

namespace rfsc {

struct StatsAccum {
  std::size_t count = 0;
  double dur_mean_s = 0.0;
  double dur_sigma_s = 0.0;   // population
  double freq_mean_hz = 0.0;
  double freq_sigma_hz = 0.0;
};

struct StatsRow {
  int ion = 0;
  StatsAccum x;   // single-qudit rotations
  StatsAccum ms;  // MS participations, one per leg
};

struct StatsTable {
  std::vector<StatsRow> rows;     // sorted by ion
  std::size_t total_pulses = 0;   // classified B pulses consumed
};

namespace detail {

// Sorted before summing, so the result is identical for any input order.
inline StatsAccum accumulate(std::vector<double> durs, std::vector<double> freqs) {
  StatsAccum a;
  a.count = durs.size();
  if (a.count == 0) return a;
  std::sort(durs.begin(), durs.end());
  std::sort(freqs.begin(), freqs.end());
  const double n = static_cast<double>(a.count);
  double ds = 0.0, fsum = 0.0;
  for (double d : durs) ds += d;
  for (double f : freqs) fsum += f;
  a.dur_mean_s = ds / n;
  a.freq_mean_hz = fsum / n;
  double dv = 0.0, fv = 0.0;
  for (double d : durs) dv += (d - a.dur_mean_s) * (d - a.dur_mean_s);
  for (double f : freqs) fv += (f - a.freq_mean_hz) * (f - a.freq_mean_hz);
  a.dur_sigma_s = std::sqrt(dv / n);
  a.freq_sigma_hz = std::sqrt(fv / n);
  return a;
}

}  // namespace detail

// Per-ion duration and frequency statistics over classified events. Each MS
// event contributes once to each participating ion, using that ion's own leg.
inline StatsTable aggregate_stats(const std::vector<GateEvent>& events) {
  struct Bucket {
    std::vector<double> x_dur, x_freq, ms_dur, ms_freq;
  };
  std::map<int, Bucket> buckets;
  std::size_t total = 0;

  for (const GateEvent& ev : events) {
    for (const GateEvent::Leg& leg : ev.legs) {
      Bucket& b = buckets[leg.ion];
      if (ev.kind == EventKind::MS) {
        b.ms_dur.push_back(leg.duration_s);
        b.ms_freq.push_back(leg.center_freq_hz);
      } else {
        b.x_dur.push_back(leg.duration_s);
        b.x_freq.push_back(leg.center_freq_hz);
      }
      ++total;
    }
  }

  StatsTable table;
  table.total_pulses = total;
  for (auto& [ion, b] : buckets) {
    StatsRow row;
    row.ion = ion;
    row.x = detail::accumulate(std::move(b.x_dur), std::move(b.x_freq));
    row.ms = detail::accumulate(std::move(b.ms_dur), std::move(b.ms_freq));
    table.rows.push_back(row);
  }
  return table;
}

inline StatsTable aggregate_stats(
    const std::vector<std::vector<GateEvent>>& per_shot) {
  std::vector<GateEvent> flat;
  for (const auto& evs : per_shot)
    flat.insert(flat.end(), evs.begin(), evs.end());
  return aggregate_stats(flat);
}

}  // namespace rfsc
