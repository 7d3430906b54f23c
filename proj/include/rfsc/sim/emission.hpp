#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rfsc/errors.hpp"
#include "rfsc/sigproc/alias.hpp"

namespace rfsc {

struct ToneSpec {
  double freq_hz = 0.0;    // true drive frequency, before sampling folds it
  double duration_s = 0.0;
};

struct DecoyConfig {
  int n_decoys = 1;        // extra ions appended after the computational ones
  double gate_rate = 1.0;  // decoy gates per computational gate
};

struct InjectionSpec {
  FrequencyBand band;      // alias-domain band, inside [0, fs/2]
  double power = 1.0;      // per-bin level relative to the trace's peak cell
};

// Generative model for the RF emission of one run. Per-ion lists follow the
// broadcast rule: a single entry applies to every ion.
struct EmissionConfig {
  double sample_rate_hz = 122.88e6;

  // True double-pass AOM/AOD tone per ion. Defaults fold to 6.7745, 8.112,
  // 9.57, 11.0345 and 12.4745 MHz at the default sample rate; entries beyond
  // the circuit's ion count back decoy ions.
  std::vector<double> addressing_freq_hz = {129.6545e6, 130.992e6, 132.45e6,
                                            133.9145e6, 135.3545e6};

  std::vector<double> rabi_rad_per_s = {2.0 * std::numbers::pi * 12.5e3};
  double pad_s = 10e-6;

  double ms_duration_s = 232.5e-6;  // any pair, unless overridden
  std::map<std::pair<int, int>, double> ms_duration_override_s;

  // Gaussian jitter applied per pulse. Empty lists mean no jitter.
  std::vector<double> duration_jitter_s;           // per ion, single-ion gates
  double ms_duration_jitter_s = 0.0;               // per pair, scalar default
  std::map<std::pair<int, int>, double> ms_duration_jitter_override_s;
  std::vector<double> freq_jitter_hz;              // per ion

  double inter_gate_gap_s = 20e-6;
  double region_gap_s = 100e-6;   // idle before and after the gate region
  double shot_gap_s = 2.5e-3;
  double edge_s = 2e-6;           // raised-cosine ramp on each pulse end
  double amplitude = 1.0;
  double noise_sigma = 0.0;

  FrequencyBand bandpass_hz{27.5e6, 200e6};

  // Fixed state-preparation and readout tone sequences, replayed every shot.
  std::vector<ToneSpec> region_a_template = {
      {110.0e6, 500e-6}, {95.3e6, 420e-6}, {140.7e6, 360e-6}};
  std::vector<ToneSpec> region_c_template = {
      {125.6e6, 600e-6}, {150.1e6, 480e-6}, {174.9e6, 450e-6}};

  std::optional<DecoyConfig> decoy;
  std::vector<InjectionSpec> inject;

  double rabi_for(int ion) const {
    if (rabi_rad_per_s.empty()) throw ConfigInvalid("no Rabi rate configured");
    return rabi_rad_per_s.size() == 1
               ? rabi_rad_per_s[0]
               : rabi_rad_per_s.at(static_cast<std::size_t>(ion));
  }

  double addressing_for(int ion) const {
    return addressing_freq_hz.at(static_cast<std::size_t>(ion));
  }

  double ms_duration_for(int a, int b) const {
    const auto key = std::minmax(a, b);
    const auto it = ms_duration_override_s.find({key.first, key.second});
    return it != ms_duration_override_s.end() ? it->second : ms_duration_s;
  }

  double ms_duration_jitter_for(int a, int b) const {
    const auto key = std::minmax(a, b);
    const auto it = ms_duration_jitter_override_s.find({key.first, key.second});
    return it != ms_duration_jitter_override_s.end() ? it->second
                                                     : ms_duration_jitter_s;
  }

  double duration_jitter_for(int ion) const {
    if (duration_jitter_s.empty()) return 0.0;
    return duration_jitter_s.size() == 1
               ? duration_jitter_s[0]
               : duration_jitter_s.at(static_cast<std::size_t>(ion));
  }

  double freq_jitter_for(int ion) const {
    if (freq_jitter_hz.empty()) return 0.0;
    return freq_jitter_hz.size() == 1
               ? freq_jitter_hz[0]
               : freq_jitter_hz.at(static_cast<std::size_t>(ion));
  }

  void validate(int n_ions_needed) const {
    if (sample_rate_hz <= 0.0) throw ConfigInvalid("sample_rate_hz must be positive");
    if (static_cast<int>(addressing_freq_hz.size()) < n_ions_needed)
      throw ConfigInvalid("addressing table covers " +
                          std::to_string(addressing_freq_hz.size()) +
                          " ions, circuit needs " + std::to_string(n_ions_needed));
    for (double f : addressing_freq_hz)
      if (f <= 0.0) throw ConfigInvalid("addressing frequencies must be positive");
    for (double w : rabi_rad_per_s)
      if (w <= 0.0) throw ConfigInvalid("Rabi rates must be positive");
    if (rabi_rad_per_s.size() != 1 &&
        static_cast<int>(rabi_rad_per_s.size()) < n_ions_needed)
      throw ConfigInvalid("rabi_rad_per_s list shorter than ion count");
    if (pad_s < 0.0 || edge_s < 0.0 || inter_gate_gap_s < 0.0 ||
        region_gap_s < 0.0)
      throw ConfigInvalid("paddings and gaps must be non-negative");
    if (noise_sigma < 0.0) throw ConfigInvalid("noise_sigma must be non-negative");
    if (bandpass_hz.low_hz > bandpass_hz.high_hz || bandpass_hz.low_hz < 0.0)
      throw InvalidBand("bandpass limits are inverted");

    double longest_pulse = 0.0;
    for (const ToneSpec& t : region_a_template) {
      if (t.freq_hz <= 0.0 || t.duration_s <= 0.0)
        throw ConfigInvalid("region_a entries need positive freq and duration");
      longest_pulse = std::max(longest_pulse, t.duration_s);
    }
    for (const ToneSpec& t : region_c_template) {
      if (t.freq_hz <= 0.0 || t.duration_s <= 0.0)
        throw ConfigInvalid("region_c entries need positive freq and duration");
      longest_pulse = std::max(longest_pulse, t.duration_s);
    }
    double min_rabi = rabi_rad_per_s[0];
    for (double w : rabi_rad_per_s) min_rabi = std::min(min_rabi, w);
    longest_pulse = std::max(longest_pulse,
                             2.0 * std::numbers::pi / min_rabi + pad_s);
    longest_pulse = std::max(longest_pulse, ms_duration_s);
    for (const auto& [k, v] : ms_duration_override_s)
      longest_pulse = std::max(longest_pulse, v);
    if (shot_gap_s <= longest_pulse)
      throw ConfigInvalid("shot_gap_s must exceed the longest single pulse");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (...) {
  }
  throw ConfigInvalid("config: bad numeric value for '" + key + "': " + s);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline std::vector<double> parse_list(const std::string& s,
                                      const std::string& key) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ','))
    out.push_back(parse_double(tok, key));
  return out;
}

inline std::vector<ToneSpec> parse_tones(const std::string& s,
                                         const std::string& key) {
  std::vector<ToneSpec> out;
  for (const std::string& tok : split(s, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw ConfigInvalid("config: '" + key + "' entries use freq_hz:duration_s");
    out.push_back({parse_double(trim(tok.substr(0, colon)), key),
                   parse_double(trim(tok.substr(colon + 1)), key)});
  }
  return out;
}

inline bool parse_pair_suffix(const std::string& key, const std::string& prefix,
                              std::pair<int, int>* out) {
  if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0)
    return false;
  const auto rest = key.substr(prefix.size());
  const auto dot = rest.find('.');
  if (dot == std::string::npos) return false;
  try {
    int a = std::stoi(rest.substr(0, dot));
    int b = std::stoi(rest.substr(dot + 1));
    if (a < 0 || b < 0 || a == b) return false;
    if (a > b) std::swap(a, b);
    *out = {a, b};
    return true;
  } catch (...) {
    return false;
  }
}

}  // namespace detail

// Flat key = value text. '#' starts a comment, blank lines are skipped,
// unknown keys are rejected. Lists are comma separated; region templates use
// freq_hz:duration_s entries; per-pair overrides use dotted keys such as
// ms_duration_s.0.1.
inline EmissionConfig emission_config_from_text(const std::string& text) {
  EmissionConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigInvalid("config line " + std::to_string(lineno) +
                          ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigInvalid("config line " + std::to_string(lineno) +
                          ": empty key or value");

    std::pair<int, int> pr;
    if (key == "sample_rate_hz") {
      cfg.sample_rate_hz = detail::parse_double(val, key);
    } else if (key == "addressing_freq_hz") {
      cfg.addressing_freq_hz = detail::parse_list(val, key);
    } else if (key == "rabi_rad_per_s") {
      cfg.rabi_rad_per_s = detail::parse_list(val, key);
    } else if (key == "pad_s") {
      cfg.pad_s = detail::parse_double(val, key);
    } else if (key == "ms_duration_s") {
      cfg.ms_duration_s = detail::parse_double(val, key);
    } else if (detail::parse_pair_suffix(key, "ms_duration_s.", &pr)) {
      cfg.ms_duration_override_s[pr] = detail::parse_double(val, key);
    } else if (key == "ms_duration_jitter_s") {
      cfg.ms_duration_jitter_s = detail::parse_double(val, key);
    } else if (detail::parse_pair_suffix(key, "ms_duration_jitter_s.", &pr)) {
      cfg.ms_duration_jitter_override_s[pr] = detail::parse_double(val, key);
    } else if (key == "duration_jitter_s") {
      cfg.duration_jitter_s = detail::parse_list(val, key);
    } else if (key == "freq_jitter_hz") {
      cfg.freq_jitter_hz = detail::parse_list(val, key);
    } else if (key == "inter_gate_gap_s") {
      cfg.inter_gate_gap_s = detail::parse_double(val, key);
    } else if (key == "region_gap_s") {
      cfg.region_gap_s = detail::parse_double(val, key);
    } else if (key == "shot_gap_s") {
      cfg.shot_gap_s = detail::parse_double(val, key);
    } else if (key == "edge_s") {
      cfg.edge_s = detail::parse_double(val, key);
    } else if (key == "amplitude") {
      cfg.amplitude = detail::parse_double(val, key);
    } else if (key == "noise_sigma") {
      cfg.noise_sigma = detail::parse_double(val, key);
    } else if (key == "bandpass_low_hz") {
      cfg.bandpass_hz.low_hz = detail::parse_double(val, key);
    } else if (key == "bandpass_high_hz") {
      cfg.bandpass_hz.high_hz = detail::parse_double(val, key);
    } else if (key == "region_a") {
      cfg.region_a_template = detail::parse_tones(val, key);
    } else if (key == "region_c") {
      cfg.region_c_template = detail::parse_tones(val, key);
    } else {
      throw ConfigInvalid("config line " + std::to_string(lineno) +
                          ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

inline EmissionConfig load_emission_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return emission_config_from_text(buf.str());
}

}  // namespace rfsc
