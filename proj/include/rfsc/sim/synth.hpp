#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfsc/errors.hpp"
#include "rfsc/sigproc/alias.hpp"
#include "rfsc/sigproc/stft.hpp"
#include "rfsc/sigproc/trace.hpp"
#include "rfsc/sim/circuit.hpp"
#include "rfsc/sim/emission.hpp"
#include "rfsc/sim/rng.hpp"

namespace rfsc {

enum class RegionTag { A, B, C };

inline const char* to_string(RegionTag r) {
  switch (r) {
    case RegionTag::A: return "A";
    case RegionTag::B: return "B";
    case RegionTag::C: return "C";
  }
  return "?";
}

// One emitted tone interval, as driven. MS gates contribute two entries with
// identical timing and the same gate_index.
struct TruthPulse {
  int shot = 0;
  RegionTag region = RegionTag::B;
  int gate_index = -1;   // index into the synthesized circuit, -1 for templates
  int ion = -1;          // -1 for template tones
  GateKind gate_kind = GateKind::Rx;
  bool decoy = false;
  bool in_band = true;   // survived the acquisition band-pass
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  double freq_true_hz = 0.0;
  double freq_alias_hz = 0.0;
};

struct ShotTruth {
  int index = 0;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  double region_a_end_s = 0.0;
  double region_c_start_s = 0.0;
};

struct GroundTruth {
  double sample_rate_hz = 0.0;
  std::vector<ShotTruth> shots;
  std::vector<TruthPulse> pulses;
};

struct SynthResult {
  SampleTrace trace;
  GroundTruth truth;
};

// Nominal drive duration: theta / Omega plus constant pad for rotations,
// configured pair duration for MS.
inline double duration_for(const NativeGate& gate, const EmissionConfig& cfg) {
  if (gate.two_ion()) return cfg.ms_duration_for(gate.ions[0], gate.ions[1]);
  return gate.theta_rad / cfg.rabi_for(gate.ions[0]) + cfg.pad_s;
}

namespace detail {

struct ToneEvent {
  double t0 = 0.0, t1 = 0.0;
  double freq_hz = 0.0;
  bool in_band = true;
};

inline void render_tone(std::vector<double>& samples, const ToneEvent& ev,
                        double fs, double amplitude, double edge_s) {
  if (!ev.in_band) return;
  const auto n0 = static_cast<std::int64_t>(std::llround(ev.t0 * fs));
  const auto n1 = std::min<std::int64_t>(
      std::llround(ev.t1 * fs), static_cast<std::int64_t>(samples.size()));
  if (n1 <= n0) return;
  const double dur = ev.t1 - ev.t0;
  const double edge = std::min(edge_s, dur / 2.0);
  for (std::int64_t n = n0; n < n1; ++n) {
    const double t = static_cast<double>(n) / fs;
    const double rel = t - ev.t0;
    double env = 1.0;
    if (edge > 0.0) {
      const double from_end = ev.t1 - t;
      if (rel < edge)
        env = 0.5 * (1.0 - std::cos(std::numbers::pi * rel / edge));
      else if (from_end < edge)
        env = 0.5 * (1.0 - std::cos(std::numbers::pi * from_end / edge));
    }
    // phase from the absolute time axis; fmod keeps the argument small
    const double cycles = std::fmod(ev.freq_hz * t, 1.0);
    samples[static_cast<std::size_t>(n)] +=
        amplitude * env * std::cos(2.0 * std::numbers::pi * cycles);
  }
}

}  // namespace detail

// Lay out every shot as: region A template tones, idle region gap, one tone
// (pair of tones for MS) per gate separated by the inter-gate gap, idle
// region gap, region C template tones, then shot_gap_s of silence. The tone
// oscillates at the true drive frequency and is sampled at fs directly, so
// undersampling folds it exactly the way a real digitizer would.
inline SynthResult synthesize(const CircuitSpec& circuit,
                              const EmissionConfig& cfg, std::uint64_t seed) {
  validate(circuit);
  cfg.validate(circuit.n_ions);
  const double fs = cfg.sample_rate_hz;

  std::vector<detail::ToneEvent> events;
  SynthResult out;
  out.truth.sample_rate_hz = fs;

  double cursor = 0.0;
  for (int shot = 0; shot < circuit.n_shots; ++shot) {
    Rng jitter(mix_seed(seed, 0x73686f74ull + static_cast<std::uint64_t>(shot)));
    ShotTruth st;
    st.index = shot;
    st.t_start_s = cursor;

    auto emit = [&](double freq_true, double dur, RegionTag region,
                    int gate_index, int ion, GateKind kind, bool decoy) {
      detail::ToneEvent ev;
      ev.t0 = cursor;
      ev.t1 = cursor + dur;
      ev.freq_hz = freq_true;
      ev.in_band = cfg.bandpass_hz.contains(freq_true);
      events.push_back(ev);

      TruthPulse tp;
      tp.shot = shot;
      tp.region = region;
      tp.gate_index = gate_index;
      tp.ion = ion;
      tp.gate_kind = kind;
      tp.decoy = decoy;
      tp.in_band = ev.in_band;
      tp.t_start_s = ev.t0;
      tp.t_end_s = ev.t1;
      tp.freq_true_hz = freq_true;
      tp.freq_alias_hz = alias_frequency(freq_true, fs);
      out.truth.pulses.push_back(tp);
    };

    for (std::size_t i = 0; i < cfg.region_a_template.size(); ++i) {
      if (i > 0) cursor += cfg.inter_gate_gap_s;
      const ToneSpec& tone = cfg.region_a_template[i];
      emit(tone.freq_hz, tone.duration_s, RegionTag::A, -1, -1, GateKind::Rx,
           false);
      cursor += tone.duration_s;
    }
    st.region_a_end_s = cursor;
    cursor += cfg.region_gap_s;

    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
      if (g > 0) cursor += cfg.inter_gate_gap_s;
      const NativeGate& gate = circuit.gates[g];
      double dur = duration_for(gate, cfg);
      if (gate.two_ion()) {
        dur += cfg.ms_duration_jitter_for(gate.ions[0], gate.ions[1]) *
               jitter.normal();
        dur = std::max(dur, 2.0 * cfg.edge_s + 1.0 / fs);
        for (int leg = 0; leg < 2; ++leg) {
          const int ion = gate.ions[leg];
          double f = cfg.addressing_for(ion);
          const double fj = cfg.freq_jitter_for(ion);
          if (fj > 0.0) f += fj * jitter.normal();
          emit(f, dur, RegionTag::B, static_cast<int>(g), ion, gate.kind,
               gate.decoy);
        }
      } else {
        const int ion = gate.ions[0];
        const double dj = cfg.duration_jitter_for(ion);
        if (dj > 0.0) dur += dj * jitter.normal();
        dur = std::max(dur, 2.0 * cfg.edge_s + 1.0 / fs);
        double f = cfg.addressing_for(ion);
        const double fj = cfg.freq_jitter_for(ion);
        if (fj > 0.0) f += fj * jitter.normal();
        emit(f, dur, RegionTag::B, static_cast<int>(g), ion, gate.kind,
             gate.decoy);
      }
      cursor += dur;
    }

    cursor += cfg.region_gap_s;
    st.region_c_start_s = cursor;
    for (std::size_t i = 0; i < cfg.region_c_template.size(); ++i) {
      if (i > 0) cursor += cfg.inter_gate_gap_s;
      const ToneSpec& tone = cfg.region_c_template[i];
      emit(tone.freq_hz, tone.duration_s, RegionTag::C, -1, -1, GateKind::Rx,
           false);
      cursor += tone.duration_s;
    }
    st.t_end_s = cursor;
    out.truth.shots.push_back(st);
    cursor += cfg.shot_gap_s;
  }

  const auto total = static_cast<std::size_t>(std::llround(cursor * fs));
  out.trace.sample_rate_hz = fs;
  out.trace.start_time_s = 0.0;
  out.trace.samples.assign(total, 0.0);
  for (const detail::ToneEvent& ev : events)
    detail::render_tone(out.trace.samples, ev, fs, cfg.amplitude, cfg.edge_s);

  if (cfg.noise_sigma > 0.0) {
    Rng noise(mix_seed(seed, 0x6e6f6973ull));
    for (double& v : out.trace.samples) v += cfg.noise_sigma * noise.normal();
  }
  return out;
}

// Interleave decoy gates into the circuit. Decoy ions are appended after the
// computational ones; decoy gate kinds and angles are resampled from the
// computational gates so the emitted pulses are statistically
// indistinguishable. Computational gate order is preserved.
inline CircuitSpec apply_decoys(const CircuitSpec& circuit,
                                const DecoyConfig& decoys, std::uint64_t seed) {
  validate(circuit);
  if (decoys.n_decoys < 0 || decoys.gate_rate < 0.0)
    throw ConfigInvalid("decoy counts and rates must be non-negative");

  CircuitSpec out = circuit;
  out.n_ions = circuit.n_ions + decoys.n_decoys;
  if (decoys.n_decoys == 0 || decoys.gate_rate == 0.0 || circuit.gates.empty())
    return out;

  Rng rng(mix_seed(seed, 0x6465636full));
  const std::size_t n = circuit.gates.size();
  const auto n_add = static_cast<std::size_t>(
      std::llround(decoys.gate_rate * static_cast<double>(n)));
  if (n_add == 0) return out;

  const std::size_t total = n + n_add;
  // choose decoy slots uniformly among all interleavings
  std::vector<std::uint8_t> is_decoy_slot(total, 0);
  std::size_t remaining = n_add;
  for (std::size_t pos = 0; pos < total && remaining > 0; ++pos) {
    const std::size_t left = total - pos;
    if (rng.integer(left) < remaining) {
      is_decoy_slot[pos] = 1;
      --remaining;
    }
  }

  std::vector<NativeGate> gates;
  gates.reserve(total);
  std::size_t next_comp = 0;
  for (std::size_t pos = 0; pos < total; ++pos) {
    if (!is_decoy_slot[pos]) {
      gates.push_back(circuit.gates[next_comp++]);
      continue;
    }
    const NativeGate& model =
        circuit.gates[static_cast<std::size_t>(rng.integer(n))];
    NativeGate g;
    g.kind = model.kind;
    if (g.kind == GateKind::MS && decoys.n_decoys < 2) g.kind = GateKind::Rx;
    g.theta_rad = g.kind == GateKind::MS ? std::numbers::pi / 2.0
                  : model.two_ion() ? std::numbers::pi / 2.0
                                    : model.theta_rad;
    g.level_i = model.level_i;
    g.level_j = model.level_j;
    g.decoy = true;
    if (g.kind == GateKind::MS) {
      const auto a = static_cast<int>(rng.integer(decoys.n_decoys));
      auto b = static_cast<int>(rng.integer(decoys.n_decoys - 1));
      if (b >= a) ++b;
      g.ions = {circuit.n_ions + std::min(a, b), circuit.n_ions + std::max(a, b)};
    } else {
      g.ions = {circuit.n_ions + static_cast<int>(rng.integer(decoys.n_decoys)),
                -1};
    }
    gates.push_back(g);
  }
  out.gates = std::move(gates);
  validate(out);
  return out;
}

struct InjectionOptions {
  double burst_duration_s = 200e-6;
  double burst_period_s = 400e-6;
  StftConfig stft{};  // grid used to calibrate the injected level
};

// Add band-limited Gaussian noise bursts. `power` scales the expected
// per-cell spectrogram level of the noise relative to the strongest cell of
// the input trace, so power = 1 puts burst columns level with the loudest
// pulse. Bands are given in the alias domain, inside [0, fs/2].
inline SampleTrace inject_interference(const SampleTrace& trace,
                                       const std::vector<FrequencyBand>& bands,
                                       double power, std::uint64_t seed,
                                       const InjectionOptions& opt = {}) {
  validate(trace);
  SampleTrace out = trace;
  if (power <= 0.0 || bands.empty()) return out;
  const double fs = trace.sample_rate_hz;
  for (const FrequencyBand& b : bands) {
    if (b.low_hz > b.high_hz || b.low_hz < 0.0 || b.high_hz > fs / 2.0)
      throw InvalidBand("injection band must lie inside [0, fs/2]");
  }
  if (opt.burst_duration_s <= 0.0 || opt.burst_period_s < opt.burst_duration_s)
    throw ConfigInvalid("burst period must cover the burst duration");

  // flat-spectrum noise, synthesized chunk-wise in the frequency domain
  const std::size_t chunk = 1 << 17;
  Rng rng(mix_seed(seed, 0x696e6a65ull));
  const FftPlan plan(chunk);
  std::vector<double> noise(trace.samples.size(), 0.0);
  std::vector<std::complex<double>> spec(chunk);
  const double bin = fs / static_cast<double>(chunk);
  for (std::size_t off = 0; off < noise.size(); off += chunk) {
    std::fill(spec.begin(), spec.end(), std::complex<double>{0.0, 0.0});
    for (std::size_t k = 1; k < chunk / 2; ++k) {
      const double f = static_cast<double>(k) * bin;
      bool inside = false;
      for (const FrequencyBand& b : bands)
        if (b.contains(f)) { inside = true; break; }
      if (!inside) continue;
      const std::complex<double> g{rng.normal(), rng.normal()};
      spec[k] = g;
      spec[chunk - k] = std::conj(g);
    }
    // inverse transform via conjugation trick
    for (auto& v : spec) v = std::conj(v);
    plan.forward(spec.data());
    const std::size_t n = std::min(chunk, noise.size() - off);
    for (std::size_t i = 0; i < n; ++i)
      noise[off + i] = spec[i].real() / static_cast<double>(chunk);
  }

  // calibrate: expected noise cell power -> power * peak signal cell power
  const Spectrogram sig_spec = compute_stft(trace, opt.stft);
  double peak = 0.0;
  for (const auto& v : sig_spec.values) peak = std::max(peak, std::norm(v));
  if (peak <= 0.0) throw ConfigInvalid("trace has no signal to calibrate against");

  SampleTrace noise_trace;
  noise_trace.sample_rate_hz = fs;
  noise_trace.samples = noise;
  const Spectrogram noise_spec = compute_stft(noise_trace, opt.stft);
  double acc = 0.0;
  std::size_t cnt = 0;
  for (std::size_t f = 0; f < noise_spec.n_freq; ++f) {
    const double fh = noise_spec.freq_of(f);
    bool inside = false;
    for (const FrequencyBand& b : bands)
      if (b.contains(fh)) { inside = true; break; }
    if (!inside) continue;
    for (std::size_t t = 0; t < noise_spec.n_time; ++t)
      acc += noise_spec.power(f, t);
    cnt += noise_spec.n_time;
  }
  if (cnt == 0 || acc <= 0.0)
    throw InvalidBand("injection bands cover no spectrogram bins");
  const double scale = std::sqrt(power * peak / (acc / static_cast<double>(cnt)));

  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double t = static_cast<double>(i) / fs;
    const double phase = std::fmod(t, opt.burst_period_s);
    if (phase < opt.burst_duration_s) out.samples[i] += scale * noise[i];
  }
  return out;
}

inline nlohmann::json truth_to_json(const GroundTruth& truth) {
  nlohmann::json shots = nlohmann::json::array();
  for (const ShotTruth& s : truth.shots)
    shots.push_back({{"index", s.index},
                     {"t_start_s", s.t_start_s},
                     {"t_end_s", s.t_end_s},
                     {"region_a_end_s", s.region_a_end_s},
                     {"region_c_start_s", s.region_c_start_s}});
  nlohmann::json pulses = nlohmann::json::array();
  for (const TruthPulse& p : truth.pulses) {
    nlohmann::json pj{{"shot", p.shot},
                      {"region", to_string(p.region)},
                      {"t_start_s", p.t_start_s},
                      {"t_end_s", p.t_end_s},
                      {"freq_true_hz", p.freq_true_hz},
                      {"freq_alias_hz", p.freq_alias_hz},
                      {"in_band", p.in_band}};
    if (p.region == RegionTag::B) {
      pj["gate_index"] = p.gate_index;
      pj["ion"] = p.ion;
      pj["kind"] = to_string(p.gate_kind);
      pj["decoy"] = p.decoy;
    }
    pulses.push_back(pj);
  }
  return nlohmann::json{{"sample_rate_hz", truth.sample_rate_hz},
                        {"shots", shots},
                        {"pulses", pulses}};
}

}  // namespace rfsc
