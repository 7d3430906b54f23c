#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfsc/errors.hpp"
#include "rfsc/recon/shots.hpp"

namespace rfsc {

// One recurring fixed tone from the state-preparation or readout sequence.
struct BaselineTemplate {
  double center_freq_hz = 0.0;
  double duration_s = 0.0;
  double freq_tol_hz = 60e3;
  double dur_tol_s = 16.7e-6;
  double occurrence = 0.0;       // fraction of profiled shots containing it
  double median_offset_s = 0.0;  // median start relative to shot start
};

struct BaselineProfile {
  std::vector<BaselineTemplate> preamble;
  std::vector<BaselineTemplate> readout;

  bool empty() const { return preamble.empty() && readout.empty(); }
};

struct BaselineOptions {
  double min_occurrence = 0.8;
  double freq_tol_hz = 60e3;   // one bin at the default grid
  double dur_tol_s = 16.7e-6;  // two hops at the default grid
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Profile recurring pulses from repeated shots of a known-idle run. Pulses
// are clustered on (frequency, duration); clusters present in at least
// min_occurrence of the shots become templates. The template list is then
// split at the largest gap in median start offset: everything before it is
// state preparation, everything after is readout.
inline BaselineProfile profile_baseline(const std::vector<Shot>& shots,
                                        const BaselineOptions& opt = {}) {
  if (shots.size() < 3)
    throw InsufficientShots("baseline profiling needs at least 3 shots, got " +
                            std::to_string(shots.size()));

  struct Cluster {
    double freq_sum = 0.0, dur_sum = 0.0;
    std::size_t count = 0;
    std::set<int> shots_seen;
    std::vector<double> offsets;
    std::vector<double> tail_offsets;  // shot end minus pulse end
    double freq() const { return freq_sum / static_cast<double>(count); }
    double dur() const { return dur_sum / static_cast<double>(count); }
  };
  std::vector<Cluster> clusters;

  for (const Shot& s : shots) {
    for (const Pulse& p : s.pulses) {
      Cluster* hit = nullptr;
      for (Cluster& c : clusters) {
        if (std::fabs(p.center_freq_hz - c.freq()) <= opt.freq_tol_hz &&
            std::fabs(p.duration_s - c.dur()) <= opt.dur_tol_s) {
          hit = &c;
          break;
        }
      }
      if (!hit) {
        clusters.emplace_back();
        hit = &clusters.back();
      }
      hit->freq_sum += p.center_freq_hz;
      hit->dur_sum += p.duration_s;
      hit->count += 1;
      hit->shots_seen.insert(s.index);
      hit->offsets.push_back(p.t_start_s - s.t_start_s);
      hit->tail_offsets.push_back(s.t_end_s - p.t_end_s);
    }
  }

  std::vector<BaselineTemplate> templates;
  const double n_shots = static_cast<double>(shots.size());
  for (const Cluster& c : clusters) {
    const double occ = static_cast<double>(c.shots_seen.size()) / n_shots;
    if (occ < opt.min_occurrence) continue;
    BaselineTemplate t;
    t.center_freq_hz = c.freq();
    t.duration_s = c.dur();
    t.freq_tol_hz = opt.freq_tol_hz;
    t.dur_tol_s = opt.dur_tol_s;
    t.occurrence = occ;
    t.median_offset_s = detail::median(c.offsets);
    templates.push_back(t);
  }
  if (templates.empty())
    throw InsufficientShots("no recurring pulses found while profiling");

  std::sort(templates.begin(), templates.end(),
            [](const BaselineTemplate& a, const BaselineTemplate& b) {
              return a.median_offset_s < b.median_offset_s;
            });

  BaselineProfile profile;
  if (templates.size() == 1) {
    profile.preamble = templates;
    return profile;
  }
  std::size_t split = 1;
  double widest = -1.0;
  for (std::size_t i = 0; i + 1 < templates.size(); ++i) {
    const double gap = templates[i + 1].median_offset_s -
                       (templates[i].median_offset_s + templates[i].duration_s);
    if (gap > widest) {
      widest = gap;
      split = i + 1;
    }
  }
  profile.preamble.assign(templates.begin(), templates.begin() + split);
  profile.readout.assign(templates.begin() + split, templates.end());
  return profile;
}

namespace detail {

inline bool matches(const Pulse& p, const BaselineTemplate& t) {
  return std::fabs(p.center_freq_hz - t.center_freq_hz) <= t.freq_tol_hz &&
         std::fabs(p.duration_s - t.duration_s) <= t.dur_tol_s;
}

inline bool matches_any(const Pulse& p,
                        const std::vector<BaselineTemplate>& ts) {
  for (const BaselineTemplate& t : ts)
    if (matches(p, t)) return true;
  return false;
}

}  // namespace detail

// Label the leading run of preamble-matching pulses as region A, the trailing
// run of readout-matching pulses as region C, everything between as B. A
// template-lookalike in the middle of the shot stays B.
inline Shot label_regions(Shot shot, const BaselineProfile& profile) {
  if (profile.empty())
    throw ConfigInvalid("baseline profile is empty");
  const std::size_t n = shot.pulses.size();
  shot.region_labels.assign(n, Region::B);

  std::size_t head = 0;
  while (head < n && detail::matches_any(shot.pulses[head], profile.preamble)) {
    shot.region_labels[head] = Region::A;
    ++head;
  }
  std::size_t tail = n;
  while (tail > head &&
         detail::matches_any(shot.pulses[tail - 1], profile.readout)) {
    shot.region_labels[tail - 1] = Region::C;
    --tail;
  }
  return shot;
}

inline nlohmann::json baseline_to_json(const BaselineProfile& p) {
  auto dump = [](const std::vector<BaselineTemplate>& ts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const BaselineTemplate& t : ts)
      arr.push_back({{"center_freq_hz", t.center_freq_hz},
                     {"duration_s", t.duration_s},
                     {"freq_tol_hz", t.freq_tol_hz},
                     {"dur_tol_s", t.dur_tol_s},
                     {"occurrence", t.occurrence},
                     {"median_offset_s", t.median_offset_s}});
    return arr;
  };
  return nlohmann::json{{"preamble", dump(p.preamble)},
                        {"readout", dump(p.readout)}};
}

inline BaselineProfile baseline_from_json(const nlohmann::json& j) {
  auto parse = [](const nlohmann::json& arr) {
    std::vector<BaselineTemplate> ts;
    for (const auto& tj : arr) {
      BaselineTemplate t;
      t.center_freq_hz = tj.at("center_freq_hz").get<double>();
      t.duration_s = tj.at("duration_s").get<double>();
      t.freq_tol_hz = tj.value("freq_tol_hz", 60e3);
      t.dur_tol_s = tj.value("dur_tol_s", 16.7e-6);
      t.occurrence = tj.value("occurrence", 1.0);
      t.median_offset_s = tj.value("median_offset_s", 0.0);
      ts.push_back(t);
    }
    return ts;
  };
  BaselineProfile p;
  p.preamble = parse(j.at("preamble"));
  p.readout = parse(j.at("readout"));
  return p;
}

}  // namespace rfsc
