#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfsc/errors.hpp"
#include "rfsc/recon/shots.hpp"

namespace rfsc {

struct AddressingEntry {
  int ion = 0;
  double center_freq_hz = 0.0;  // alias-domain tone for this ion
  double tolerance_hz = 60e3;
};

struct AddressingTable {
  std::vector<AddressingEntry> entries;

  // Alias-domain defaults for a three-ion chain plus two decoy channels.
  // Tolerances are max(3 * observed spread, one 60 kHz bin).
  static AddressingTable defaults() {
    return AddressingTable{{{0, 6.7745e6, 60e3},
                            {1, 8.112e6, 135e3},
                            {2, 9.57e6, 480e3},
                            {3, 11.0345e6, 60e3},
                            {4, 12.4745e6, 60e3}}};
  }

  void validate() const {
    if (entries.empty()) throw ConfigInvalid("addressing table is empty");
    for (const AddressingEntry& e : entries) {
      if (e.center_freq_hz <= 0.0 || e.tolerance_hz <= 0.0)
        throw ConfigInvalid("addressing entries need positive freq and tolerance");
    }
    for (std::size_t a = 0; a < entries.size(); ++a) {
      for (std::size_t b = a + 1; b < entries.size(); ++b) {
        if (entries[a].ion == entries[b].ion)
          throw ConfigInvalid("duplicate ion in addressing table");
        const double sep =
            std::fabs(entries[a].center_freq_hz - entries[b].center_freq_hz);
        const double tol =
            std::max(entries[a].tolerance_hz, entries[b].tolerance_hz);
        if (sep <= 2.0 * tol)
          throw ConfigInvalid("addressing channels overlap: ions " +
                              std::to_string(entries[a].ion) + " and " +
                              std::to_string(entries[b].ion));
      }
    }
  }
};

// Nearest addressing channel within tolerance, or nullopt.
inline std::optional<int> assign_ion(const Pulse& p,
                                     const AddressingTable& table) {
  std::optional<int> best;
  double best_d = 0.0;
  for (const AddressingEntry& e : table.entries) {
    const double d = std::fabs(p.center_freq_hz - e.center_freq_hz);
    if (d > e.tolerance_hz) continue;
    if (!best || d < best_d) {
      best = e.ion;
      best_d = d;
    }
  }
  return best;
}

inline std::vector<std::optional<int>> assign_ions(
    const std::vector<Pulse>& pulses, const AddressingTable& table) {
  table.validate();
  std::vector<std::optional<int>> out;
  out.reserve(pulses.size());
  for (const Pulse& p : pulses) out.push_back(assign_ion(p, table));
  return out;
}

enum class EventKind { SingleQuditRotation, MS };

inline const char* to_string(EventKind k) {
  return k == EventKind::MS ? "ms" : "single_qudit_rotation";
}

struct GateEvent {
  EventKind kind = EventKind::SingleQuditRotation;
  std::array<int, 2> ions{-1, -1};  // ascending for MS, second = -1 otherwise
  std::optional<double> theta_est_rad;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  double confidence = 0.0;
  bool duration_anomalous = false;

  struct Leg {
    int ion = -1;
    double duration_s = 0.0;
    double center_freq_hz = 0.0;
    int pulse_index = -1;  // index into the shot's pulse list
  };
  std::vector<Leg> legs;
};

struct ClassifyConfig {
  double rabi_rad_per_s = 2.0 * std::numbers::pi * 12.5e3;
  double pad_s = 10e-6;
  double ms_overlap_min = 0.5;           // of the shorter pulse
  double ms_duration_threshold_s = 100e-6;  // longer singles get flagged
};

// Turn the B-labeled pulses of one shot into a time-ordered gate sequence.
// Two concurrent pulses on different ions make an MS event; the rest become
// single-qudit rotations with theta estimated from the drive duration.
// Pulses that match no addressing channel are skipped.
inline std::vector<GateEvent> classify_gates(const Shot& shot,
                                             const AddressingTable& table,
                                             const ClassifyConfig& cfg = {}) {
  table.validate();
  if (shot.region_labels.size() != shot.pulses.size())
    throw ShapeMismatch("shot labels out of sync with pulses");

  struct Cand {
    std::size_t idx;
    int ion;
  };
  std::vector<Cand> bs;
  for (std::size_t i = 0; i < shot.pulses.size(); ++i) {
    if (shot.region_labels[i] != Region::B) continue;
    const auto ion = assign_ion(shot.pulses[i], table);
    if (!ion) continue;
    bs.push_back({i, *ion});
  }

  // candidate MS pairings, best overlap first; enumeration order of the two
  // pulses cannot matter because the pair key is symmetric
  struct PairCand {
    double overlap_frac;
    double t_start;
    std::size_t a, b;  // indices into bs
  };
  std::vector<PairCand> pairs;
  for (std::size_t a = 0; a < bs.size(); ++a) {
    for (std::size_t b = a + 1; b < bs.size(); ++b) {
      if (bs[a].ion == bs[b].ion) continue;
      const Pulse& pa = shot.pulses[bs[a].idx];
      const Pulse& pb = shot.pulses[bs[b].idx];
      const double overlap = std::min(pa.t_end_s, pb.t_end_s) -
                             std::max(pa.t_start_s, pb.t_start_s);
      const double shorter = std::min(pa.duration_s, pb.duration_s);
      if (shorter <= 0.0 || overlap < cfg.ms_overlap_min * shorter) continue;
      pairs.push_back({std::min(overlap / shorter, 1.0),
                       std::min(pa.t_start_s, pb.t_start_s), a, b});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const PairCand& x, const PairCand& y) {
    if (x.overlap_frac != y.overlap_frac) return x.overlap_frac > y.overlap_frac;
    if (x.t_start != y.t_start) return x.t_start < y.t_start;
    return std::make_pair(x.a, x.b) < std::make_pair(y.a, y.b);
  });

  std::vector<std::uint8_t> used(bs.size(), 0);
  std::vector<GateEvent> events;
  for (const PairCand& pc : pairs) {
    if (used[pc.a] || used[pc.b]) continue;
    used[pc.a] = used[pc.b] = 1;
    const Cand& ca = bs[pc.a].ion <= bs[pc.b].ion ? bs[pc.a] : bs[pc.b];
    const Cand& cb = bs[pc.a].ion <= bs[pc.b].ion ? bs[pc.b] : bs[pc.a];
    const Pulse& pa = shot.pulses[ca.idx];
    const Pulse& pb = shot.pulses[cb.idx];

    GateEvent ev;
    ev.kind = EventKind::MS;
    ev.ions = {ca.ion, cb.ion};
    ev.t_start_s = std::min(pa.t_start_s, pb.t_start_s);
    ev.t_end_s = std::max(pa.t_end_s, pb.t_end_s);
    ev.confidence = pc.overlap_frac;
    ev.legs = {{ca.ion, pa.duration_s, pa.center_freq_hz, static_cast<int>(ca.idx)},
               {cb.ion, pb.duration_s, pb.center_freq_hz, static_cast<int>(cb.idx)}};
    events.push_back(std::move(ev));
  }

  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (used[i]) continue;
    const Pulse& p = shot.pulses[bs[i].idx];
    GateEvent ev;
    ev.kind = EventKind::SingleQuditRotation;
    ev.ions = {bs[i].ion, -1};
    ev.t_start_s = p.t_start_s;
    ev.t_end_s = p.t_end_s;
    ev.theta_est_rad =
        cfg.rabi_rad_per_s * std::max(p.duration_s - cfg.pad_s, 0.0);

    double tol = 60e3;
    for (const AddressingEntry& e : table.entries)
      if (e.ion == bs[i].ion) tol = e.tolerance_hz;
    double f_table = 0.0;
    for (const AddressingEntry& e : table.entries)
      if (e.ion == bs[i].ion) f_table = e.center_freq_hz;
    ev.confidence =
        std::max(0.0, 1.0 - std::fabs(p.center_freq_hz - f_table) / tol);
    if (p.duration_s > cfg.ms_duration_threshold_s) {
      ev.duration_anomalous = true;
      ev.confidence *= 0.5;  // a lone pulse this long is suspect
    }
    ev.legs = {{bs[i].ion, p.duration_s, p.center_freq_hz,
                static_cast<int>(bs[i].idx)}};
    events.push_back(std::move(ev));
  }

  std::sort(events.begin(), events.end(),
            [](const GateEvent& a, const GateEvent& b) {
              if (a.t_start_s != b.t_start_s) return a.t_start_s < b.t_start_s;
              return a.ions < b.ions;
            });
  return events;
}

inline nlohmann::json addressing_to_json(const AddressingTable& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const AddressingEntry& e : t.entries)
    arr.push_back({{"ion", e.ion},
                   {"center_freq_hz", e.center_freq_hz},
                   {"tolerance_hz", e.tolerance_hz}});
  return nlohmann::json{{"channels", arr}};
}

inline AddressingTable addressing_from_json(const nlohmann::json& j) {
  AddressingTable t;
  for (const auto& ej : j.at("channels")) {
    AddressingEntry e;
    e.ion = ej.at("ion").get<int>();
    e.center_freq_hz = ej.at("center_freq_hz").get<double>();
    e.tolerance_hz = ej.value("tolerance_hz", 60e3);
    t.entries.push_back(e);
  }
  t.validate();
  return t;
}

}  // namespace rfsc
