#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfsc/errors.hpp"

namespace rfsc {

enum class GateKind { Rx, Ry, MS };

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::MS: return "ms";
  }
  return "?";
}

inline GateKind gate_kind_from_string(const std::string& s) {
  if (s == "rx") return GateKind::Rx;
  if (s == "ry") return GateKind::Ry;
  if (s == "ms") return GateKind::MS;
  throw ConfigInvalid("unknown gate kind '" + s + "' (expected rx, ry or ms)");
}

// One native gate: an equatorial rotation on a single ion, or a two-ion MS
// gate. Levels (i, j) name the addressed transition inside the qudit.
struct NativeGate {
  GateKind kind = GateKind::Rx;
  std::array<int, 2> ions{0, -1};  // ions[1] < 0 for single-ion gates
  double theta_rad = std::numbers::pi;
  int level_i = 0;
  int level_j = 1;
  bool decoy = false;

  bool two_ion() const { return kind == GateKind::MS; }
  double phi_rad() const {
    return kind == GateKind::Ry ? std::numbers::pi / 2.0 : 0.0;
  }
};

struct CircuitSpec {
  int n_ions = 0;
  int n_shots = 1;
  std::vector<NativeGate> gates;
};

inline void validate(const CircuitSpec& c) {
  if (c.n_ions <= 0) throw ConfigInvalid("n_ions must be positive");
  if (c.n_shots <= 0) throw ConfigInvalid("n_shots must be positive");
  const double pi = std::numbers::pi;
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const NativeGate& gate = c.gates[g];
    const std::string where = "gate " + std::to_string(g) + ": ";
    if (gate.level_i < 0 || gate.level_j <= gate.level_i)
      throw InvalidLevels(where + "levels must satisfy 0 <= i < j");
    if (gate.two_ion()) {
      if (gate.ions[0] < 0 || gate.ions[1] < 0 || gate.ions[0] == gate.ions[1])
        throw ConfigInvalid(where + "ms needs two distinct ions");
      if (gate.ions[0] >= c.n_ions || gate.ions[1] >= c.n_ions)
        throw ConfigInvalid(where + "ion index out of range");
      if (std::fabs(gate.theta_rad - pi / 2.0) > 1e-9)
        throw ConfigInvalid(where + "ms theta is fixed at pi/2");
    } else {
      if (gate.ions[0] < 0 || gate.ions[0] >= c.n_ions)
        throw ConfigInvalid(where + "ion index out of range");
      if (gate.ions[1] >= 0)
        throw ConfigInvalid(where + "single-ion gate lists two ions");
      if (!(gate.theta_rad > 0.0) || gate.theta_rad > 2.0 * pi + 1e-12)
        throw ConfigInvalid(where + "theta must be in (0, 2*pi]");
    }
  }
}

namespace detail {
inline void reject_unknown_keys(const nlohmann::json& j,
                                std::initializer_list<const char*> known,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) { ok = true; break; }
    if (!ok)
      throw ConfigInvalid(where + ": unknown key '" + it.key() + "'");
  }
}
}  // namespace detail

inline CircuitSpec circuit_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigInvalid("circuit: top level must be an object");
  detail::reject_unknown_keys(j, {"n_ions", "n_shots", "gates"}, "circuit");
  if (!j.contains("n_ions") || !j.contains("gates"))
    throw ConfigInvalid("circuit: n_ions and gates are required");

  CircuitSpec c;
  c.n_ions = j.at("n_ions").get<int>();
  c.n_shots = j.value("n_shots", 1);
  for (const auto& gj : j.at("gates")) {
    detail::reject_unknown_keys(
        gj, {"kind", "ions", "theta", "i", "j", "decoy"}, "gate");
    NativeGate g;
    g.kind = gate_kind_from_string(gj.at("kind").get<std::string>());
    const auto& ions = gj.at("ions");
    if (!ions.is_array() || ions.empty() || ions.size() > 2)
      throw ConfigInvalid("gate: ions must be a list of one or two indices");
    g.ions[0] = ions[0].get<int>();
    g.ions[1] = ions.size() > 1 ? ions[1].get<int>() : -1;
    if (g.kind == GateKind::MS) {
      if (ions.size() != 2) throw ConfigInvalid("gate: ms needs two ions");
      g.theta_rad = gj.value("theta", std::numbers::pi / 2.0);
    } else {
      if (ions.size() != 1)
        throw ConfigInvalid("gate: single-ion gate needs exactly one ion");
      if (!gj.contains("theta"))
        throw ConfigInvalid("gate: theta is required for rx/ry");
      g.theta_rad = gj.at("theta").get<double>();
    }
    g.level_i = gj.value("i", 0);
    g.level_j = gj.value("j", 1);
    g.decoy = gj.value("decoy", false);
    c.gates.push_back(g);
  }
  validate(c);
  return c;
}

inline nlohmann::json circuit_to_json(const CircuitSpec& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const NativeGate& g : c.gates) {
    nlohmann::json gj;
    gj["kind"] = to_string(g.kind);
    gj["ions"] = g.two_ion() ? nlohmann::json{g.ions[0], g.ions[1]}
                             : nlohmann::json{g.ions[0]};
    gj["theta"] = g.theta_rad;
    gj["i"] = g.level_i;
    gj["j"] = g.level_j;
    if (g.decoy) gj["decoy"] = true;
    gates.push_back(gj);
  }
  return nlohmann::json{{"n_ions", c.n_ions},
                        {"n_shots", c.n_shots},
                        {"gates", gates}};
}

inline CircuitSpec load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open circuit file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid("circuit: invalid JSON in " + path + ": " + e.what());
  }
  return circuit_from_json(j);
}

}  // namespace rfsc
