#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfsc/errors.hpp"
#include "rfsc/recon/classify.hpp"
#include "rfsc/recon/shots.hpp"
#include "rfsc/recon/stats.hpp"
#include "rfsc/sigproc/components.hpp"
#include "rfsc/sigproc/pulse.hpp"
#include "rfsc/sigproc/stft.hpp"

namespace rfsc {

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

}  // namespace detail

inline void write_pulses_csv(const std::string& path,
                             const std::vector<Pulse>& pulses) {
  auto out = detail::open_out(path);
  out << "t_start_s,t_end_s,duration_us,center_freq_mhz,peak_power,component_id\n";
  for (const Pulse& p : pulses) {
    out << detail::fmt(p.t_start_s) << ',' << detail::fmt(p.t_end_s) << ','
        << detail::fmt(p.duration_s * 1e6) << ','
        << detail::fmt(p.center_freq_hz * 1e-6) << ','
        << detail::fmt(p.peak_power) << ',' << p.component_id << '\n';
  }
}

inline nlohmann::json shots_to_json(const std::vector<Shot>& shots) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Shot& s : shots) {
    nlohmann::json pulses = nlohmann::json::array();
    for (std::size_t i = 0; i < s.pulses.size(); ++i) {
      const Pulse& p = s.pulses[i];
      pulses.push_back({{"t_start_s", p.t_start_s},
                        {"t_end_s", p.t_end_s},
                        {"duration_us", p.duration_s * 1e6},
                        {"center_freq_mhz", p.center_freq_hz * 1e-6},
                        {"peak_power", p.peak_power},
                        {"region", to_string(s.region_labels[i])}});
    }
    arr.push_back({{"index", s.index},
                   {"t_start_s", s.t_start_s},
                   {"t_end_s", s.t_end_s},
                   {"pulses", pulses}});
  }
  return nlohmann::json{{"shots", arr}};
}

inline nlohmann::json events_to_json(
    const std::vector<std::vector<GateEvent>>& per_shot) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t si = 0; si < per_shot.size(); ++si) {
    nlohmann::json evs = nlohmann::json::array();
    for (const GateEvent& e : per_shot[si]) {
      nlohmann::json ej{{"kind", to_string(e.kind)},
                        {"t_start_s", e.t_start_s},
                        {"t_end_s", e.t_end_s},
                        {"confidence", e.confidence},
                        {"duration_anomalous", e.duration_anomalous}};
      ej["ions"] = e.kind == EventKind::MS
                       ? nlohmann::json{e.ions[0], e.ions[1]}
                       : nlohmann::json{e.ions[0]};
      if (e.theta_est_rad) ej["theta_est_rad"] = *e.theta_est_rad;
      nlohmann::json legs = nlohmann::json::array();
      for (const GateEvent::Leg& leg : e.legs)
        legs.push_back({{"ion", leg.ion},
                        {"duration_us", leg.duration_s * 1e6},
                        {"center_freq_mhz", leg.center_freq_hz * 1e-6},
                        {"pulse_index", leg.pulse_index}});
      ej["legs"] = legs;
      evs.push_back(ej);
    }
    arr.push_back({{"shot", static_cast<int>(si)}, {"events", evs}});
  }
  return nlohmann::json{{"shots", arr}};
}

inline void write_stats_csv(const std::string& path, const StatsTable& table) {
  auto out = detail::open_out(path);
  out << "ion,x_dur_mean_us,x_dur_sigma_us,x_freq_mean_mhz,x_freq_sigma_mhz,"
         "ms_dur_mean_us,ms_dur_sigma_us,ms_freq_mean_mhz,ms_freq_sigma_mhz\n";
  for (const StatsRow& r : table.rows) {
    out << r.ion << ',' << detail::fmt(r.x.dur_mean_s * 1e6) << ','
        << detail::fmt(r.x.dur_sigma_s * 1e6) << ','
        << detail::fmt(r.x.freq_mean_hz * 1e-6) << ','
        << detail::fmt(r.x.freq_sigma_hz * 1e-6) << ','
        << detail::fmt(r.ms.dur_mean_s * 1e6) << ','
        << detail::fmt(r.ms.dur_sigma_s * 1e6) << ','
        << detail::fmt(r.ms.freq_mean_hz * 1e-6) << ','
        << detail::fmt(r.ms.freq_sigma_hz * 1e-6) << '\n';
  }
}

inline nlohmann::json stats_to_json(const StatsTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  auto acc = [](const StatsAccum& a) {
    return nlohmann::json{{"count", a.count},
                          {"dur_mean_us", a.dur_mean_s * 1e6},
                          {"dur_sigma_us", a.dur_sigma_s * 1e6},
                          {"freq_mean_mhz", a.freq_mean_hz * 1e-6},
                          {"freq_sigma_mhz", a.freq_sigma_hz * 1e-6}};
  };
  for (const StatsRow& r : table.rows)
    rows.push_back({{"ion", r.ion}, {"x", acc(r.x)}, {"ms", acc(r.ms)}});
  return nlohmann::json{{"rows", rows}, {"total_pulses", table.total_pulses}};
}

// 8-bit log-power grayscale, binary P5, frequency on the vertical axis with
// bin 0 at the bottom. Detection boxes are burned in at full intensity. Wide
// grids are max-pooled along time down to max_width columns; the companion
// CSV uses the same pooled grid.
struct SpectrogramImageOptions {
  std::size_t max_width = 4096;
  double floor_db = -80.0;  // relative to the peak cell
};

namespace detail {

struct PooledGrid {
  std::vector<double> power;  // row-major, rows = freq, cols = pooled time
  std::size_t n_freq = 0, n_cols = 0, pool = 1;
  double hop_s = 0.0, origin_s = 0.0, bin_hz = 0.0;
};

inline PooledGrid pool_grid(const Spectrogram& spec, std::size_t max_width) {
  PooledGrid g;
  g.n_freq = spec.n_freq;
  g.pool = std::max<std::size_t>(1, (spec.n_time + max_width - 1) / max_width);
  g.n_cols = (spec.n_time + g.pool - 1) / g.pool;
  g.hop_s = spec.hop_s;
  g.origin_s = spec.origin_time_s;
  g.bin_hz = spec.bin_hz;
  g.power.assign(g.n_freq * g.n_cols, 0.0);
  for (std::size_t t = 0; t < spec.n_time; ++t) {
    const std::size_t col = t / g.pool;
    for (std::size_t f = 0; f < spec.n_freq; ++f) {
      double& cell = g.power[f * g.n_cols + col];
      cell = std::max(cell, spec.power(f, t));
    }
  }
  return g;
}

}  // namespace detail

inline void write_spectrogram_pgm(const std::string& path,
                                  const Spectrogram& spec,
                                  const std::vector<Component>& boxes,
                                  const SpectrogramImageOptions& opt = {}) {
  const detail::PooledGrid g = detail::pool_grid(spec, opt.max_width);
  double peak = 0.0;
  for (double v : g.power) peak = std::max(peak, v);
  if (peak <= 0.0) peak = 1.0;

  std::vector<std::uint8_t> img(g.power.size(), 0);
  for (std::size_t i = 0; i < g.power.size(); ++i) {
    const double db = 10.0 * std::log10(std::max(g.power[i] / peak, 1e-300));
    const double unit = std::clamp(1.0 - db / opt.floor_db, 0.0, 1.0);
    img[i] = static_cast<std::uint8_t>(std::lround(unit * 254.0));
  }

  auto put = [&](std::size_t f, std::size_t col) {
    if (f < g.n_freq && col < g.n_cols) img[f * g.n_cols + col] = 255;
  };
  for (const Component& c : boxes) {
    const std::size_t c0 = c.min_t / g.pool;
    const std::size_t c1 = c.max_t / g.pool;
    for (std::size_t col = c0; col <= c1; ++col) {
      put(c.min_f, col);
      put(c.max_f, col);
    }
    for (std::size_t f = c.min_f; f <= c.max_f; ++f) {
      put(f, c0);
      put(f, c1);
    }
  }

  auto out = detail::open_out(path);
  out << "P5\n" << g.n_cols << ' ' << g.n_freq << "\n255\n";
  // image row 0 is the highest frequency bin
  for (std::size_t f = g.n_freq; f-- > 0;)
    out.write(reinterpret_cast<const char*>(img.data() + f * g.n_cols),
              static_cast<std::streamsize>(g.n_cols));
}

inline void write_spectrogram_csv(const std::string& path,
                                  const Spectrogram& spec,
                                  const SpectrogramImageOptions& opt = {}) {
  const detail::PooledGrid g = detail::pool_grid(spec, opt.max_width);
  auto out = detail::open_out(path);
  out << "freq_hz";
  for (std::size_t col = 0; col < g.n_cols; ++col)
    out << ','
        << detail::fmt(g.origin_s +
                       static_cast<double>(col * g.pool) * g.hop_s);
  out << '\n';
  for (std::size_t f = 0; f < g.n_freq; ++f) {
    out << detail::fmt(static_cast<double>(f) * g.bin_hz);
    for (std::size_t col = 0; col < g.n_cols; ++col)
      out << ',' << detail::fmt(g.power[f * g.n_cols + col]);
    out << '\n';
  }
}

}  // namespace rfsc
