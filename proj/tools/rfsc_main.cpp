// Command line front end: synthesize drive-tone captures, analyze them back
// into gate timelines, and move traces over TCP.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <rfsc/rfsc.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNetwork = 4;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rfsc::IoError("cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw rfsc::ConfigInvalid("invalid JSON in " + path);
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw rfsc::IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

// "lo:hi:power" with lo/hi in MHz and power as a linear ratio.
struct InjectSpec {
  rfsc::FrequencyBand band;
  double power = 0.0;
};

InjectSpec parse_inject(const std::string& text) {
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw rfsc::ConfigInvalid("--inject wants lo_mhz:hi_mhz:power, got " + text);
  InjectSpec spec;
  try {
    spec.band.low_hz = std::stod(text.substr(0, a)) * 1e6;
    spec.band.high_hz = std::stod(text.substr(a + 1, b - a - 1)) * 1e6;
    spec.power = std::stod(text.substr(b + 1));
  } catch (const std::exception&) {
    throw rfsc::ConfigInvalid("--inject wants lo_mhz:hi_mhz:power, got " + text);
  }
  return spec;
}

rfsc::FrequencyBand parse_band_mhz(const std::string& text) {
  const auto a = text.find(':');
  if (a == std::string::npos)
    throw rfsc::ConfigInvalid("band wants lo_mhz:hi_mhz, got " + text);
  try {
    return {std::stod(text.substr(0, a)) * 1e6,
            std::stod(text.substr(a + 1)) * 1e6};
  } catch (const std::exception&) {
    throw rfsc::ConfigInvalid("band wants lo_mhz:hi_mhz, got " + text);
  }
}

struct SimulateArgs {
  std::string circuit_path;
  std::string out_path;
  std::string config_path;
  std::string truth_path;
  std::uint64_t seed = 1;
  int decoys = 0;
  double decoy_rate = 1.0;
  std::vector<std::string> inject;
};

int run_simulate(const SimulateArgs& args) {
  rfsc::CircuitSpec circuit = rfsc::load_circuit(args.circuit_path);
  rfsc::EmissionConfig cfg;
  if (!args.config_path.empty())
    cfg = rfsc::load_emission_config(args.config_path);

  if (args.decoys > 0)
    circuit = rfsc::apply_decoys(circuit, {args.decoys, args.decoy_rate},
                                 args.seed);

  rfsc::SynthResult synth = rfsc::synthesize(circuit, cfg, args.seed);
  rfsc::SampleTrace trace = std::move(synth.trace);
  for (std::size_t i = 0; i < args.inject.size(); ++i) {
    const InjectSpec spec = parse_inject(args.inject[i]);
    trace = rfsc::inject_interference(trace, {spec.band}, spec.power,
                                      rfsc::mix_seed(args.seed, 0x696e6a00 + i));
  }

  const rfsc::WriteResult wr =
      rfsc::write_trace(trace, args.out_path, "synthetic drive-tone capture");
  if (!args.truth_path.empty())
    write_json_file(args.truth_path, rfsc::truth_to_json(synth.truth));

  std::printf("wrote %s: %zu samples, %.6f s, %zu shots, %zu gates\n",
              args.out_path.c_str(), trace.samples.size(), trace.duration_s(),
              synth.truth.shots.size(), circuit.gates.size());
  if (wr.clipped > 0)
    std::printf("note: %zu samples clipped during quantization\n", wr.clipped);
  return kExitOk;
}

struct AnalyzeArgs {
  std::string in_path;
  std::string out_dir = ".";
  std::string baseline_path;
  std::string profile_out;
  std::string table_path;
  double alpha = 4.0;
  double gap_ms = 1.0;
  std::size_t min_cells = 1;
  double omega_khz = 12.5;
  double pad_us = 10.0;
};

int run_analyze(const AnalyzeArgs& args) {
  const rfsc::SampleTrace trace = rfsc::read_trace(args.in_path);

  rfsc::AnalyzeOptions opt;
  opt.alpha = args.alpha;
  opt.min_cells = args.min_cells;
  opt.gap_threshold_s = args.gap_ms * 1e-3;
  opt.classify.rabi_rad_per_s = 2.0 * std::numbers::pi * args.omega_khz * 1e3;
  opt.classify.pad_s = args.pad_us * 1e-6;
  if (!args.table_path.empty())
    opt.table = rfsc::addressing_from_json(read_json_file(args.table_path));

  rfsc::BaselineProfile profile;
  const bool have_profile = !args.baseline_path.empty();
  if (have_profile)
    profile = rfsc::baseline_from_json(read_json_file(args.baseline_path));

  const rfsc::AnalysisResult res =
      rfsc::analyze_trace(trace, opt, have_profile ? &profile : nullptr);

  if (!args.profile_out.empty())
    write_json_file(args.profile_out,
                    rfsc::baseline_to_json(rfsc::profile_baseline(res.shots)));

  namespace fs = std::filesystem;
  fs::create_directories(args.out_dir);
  const auto path = [&](const char* name) {
    return (fs::path(args.out_dir) / name).string();
  };
  rfsc::write_pulses_csv(path("pulses.csv"), res.pulses);
  write_json_file(path("shots.json"), rfsc::shots_to_json(res.shots));
  write_json_file(path("gates.json"), rfsc::events_to_json(res.events));
  rfsc::write_stats_csv(path("stats.csv"), res.stats);
  rfsc::write_spectrogram_pgm(path("spectrogram.pgm"), res.spectrogram,
                              res.components);
  rfsc::write_spectrogram_csv(path("spectrogram.csv"), res.spectrogram);

  std::size_t n_events = 0;
  for (const auto& ev : res.events) n_events += ev.size();
  std::printf("threshold %.6g (mean %.6g, sigma %.6g, alpha %g)\n",
              res.threshold.threshold, res.threshold.mu_bar,
              res.threshold.sigma_mu, res.threshold.alpha);
  std::printf("%zu pulses, %zu shots, %zu gate events -> %s\n",
              res.pulses.size(), res.shots.size(), n_events,
              args.out_dir.c_str());
  return kExitOk;
}

struct DealiasArgs {
  double f_alias_mhz = 0.0;
  double fs_mhz = 122.88;
  int k_max = 3;
  std::string band = "80:250";
};

int run_dealias(const DealiasArgs& args) {
  const rfsc::FrequencyBand band = parse_band_mhz(args.band);
  const std::vector<double> hits = rfsc::dealias_candidates(
      args.f_alias_mhz * 1e6, args.fs_mhz * 1e6, args.k_max, band);
  for (double f : hits) std::printf("%.6f\n", f / 1e6);
  return kExitOk;
}

struct StreamArgs {
  std::string trace_path;
  std::uint16_t port = 0;
  std::string port_file;
  std::size_t frame = 16384;
  std::size_t sessions = 1;
  bool realtime = false;
};

int run_stream(const StreamArgs& args) {
  rfsc::StreamServer server(args.trace_path, args.frame, args.realtime);
  server.start(args.port);
  std::printf("listening on 127.0.0.1:%u\n", server.port());
  std::fflush(stdout);
  if (!args.port_file.empty()) {
    std::ofstream out(args.port_file);
    if (!out) throw rfsc::IoError("cannot open " + args.port_file);
    out << server.port() << '\n';
  }
  server.serve(args.sessions);
  return kExitOk;
}

struct CaptureArgs {
  std::string endpoint;
  std::string out_path;
  double duration_s = 0.0;
};

int run_capture(const CaptureArgs& args) {
  const auto colon = args.endpoint.rfind(':');
  if (colon == std::string::npos)
    throw rfsc::ConfigInvalid("endpoint wants host:port, got " + args.endpoint);
  const std::string host = args.endpoint.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(args.endpoint.substr(colon + 1));
  } catch (const std::exception&) {
    port = -1;
  }
  if (port <= 0 || port > 65535)
    throw rfsc::ConfigInvalid("bad port in endpoint " + args.endpoint);

  std::optional<double> duration;
  if (args.duration_s > 0.0) duration = args.duration_s;
  const rfsc::CaptureResult res = rfsc::capture_stream(
      host, static_cast<std::uint16_t>(port), args.out_path, duration);

  std::printf("capture %s: %zu frames, %zu samples", to_string(res.status),
              res.frames, res.samples);
  if (!res.message.empty()) std::printf(" (%s)", res.message.c_str());
  std::printf("\n");

  switch (res.status) {
    case rfsc::CaptureResult::Status::Complete:
    case rfsc::CaptureResult::Status::Truncated:
      return kExitOk;
    case rfsc::CaptureResult::Status::Malformed:
      return kExitData;
    case rfsc::CaptureResult::Status::ConnectionLost:
      return kExitNetwork;
  }
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RF side-channel toolkit for trapped-ion drive tones"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Render a circuit into a synthetic RF capture");
  sim->add_option("circuit", sim_args.circuit_path, "circuit JSON")->required();
  sim->add_option("out", sim_args.out_path, "output .rftrace path")->required();
  sim->add_option("--config", sim_args.config_path, "emission config file");
  sim->add_option("--truth", sim_args.truth_path, "write ground truth JSON");
  sim->add_option("--seed", sim_args.seed, "RNG seed");
  sim->add_option("--decoys", sim_args.decoys, "number of decoy ions");
  sim->add_option("--decoy-rate", sim_args.decoy_rate,
                  "decoy gates per computational gate");
  sim->add_option("--inject", sim_args.inject,
                  "interference burst lo_mhz:hi_mhz:power (repeatable)");

  AnalyzeArgs an_args;
  CLI::App* an = app.add_subcommand(
      "analyze", "Recover pulses, shots and gate events from a capture");
  an->add_option("in", an_args.in_path, "input .rftrace path")->required();
  an->add_option("--out", an_args.out_dir, "output directory");
  an->add_option("--alpha", an_args.alpha, "detection threshold multiplier");
  an->add_option("--gap-ms", an_args.gap_ms, "shot boundary idle gap, ms");
  an->add_option("--min-cells", an_args.min_cells,
                 "drop components smaller than this");
  an->add_option("--baseline", an_args.baseline_path,
                 "baseline profile JSON used to label regions");
  an->add_option("--profile-out", an_args.profile_out,
                 "derive a baseline profile and write it here");
  an->add_option("--table", an_args.table_path, "addressing table JSON");
  an->add_option("--omega-khz", an_args.omega_khz,
                 "Rabi frequency used for angle estimates, kHz");
  an->add_option("--pad-us", an_args.pad_us, "per-pulse padding, us");

  DealiasArgs de_args;
  CLI::App* de = app.add_subcommand(
      "dealias", "List true frequencies consistent with an aliased tone");
  de->add_option("freq_mhz", de_args.f_alias_mhz, "observed frequency, MHz")
      ->required();
  de->add_option("--fs-mhz", de_args.fs_mhz, "capture sample rate, MHz");
  de->add_option("--kmax", de_args.k_max, "largest Nyquist zone index");
  de->add_option("--band", de_args.band, "candidate band lo_mhz:hi_mhz");

  StreamArgs st_args;
  CLI::App* st = app.add_subcommand(
      "stream", "Serve a stored capture over loopback TCP");
  st->add_option("trace", st_args.trace_path, "input .rftrace path")
      ->required();
  st->add_option("--port", st_args.port, "TCP port (0 picks a free one)");
  st->add_option("--port-file", st_args.port_file,
                 "write the bound port number here");
  st->add_option("--frame", st_args.frame, "samples per frame");
  st->add_option("--sessions", st_args.sessions,
                 "client sessions to serve before exiting (0 = forever)");
  st->add_flag("--realtime", st_args.realtime,
               "pace frames at the capture sample rate");

  CaptureArgs cap_args;
  CLI::App* cap = app.add_subcommand(
      "capture", "Receive a streamed capture and store it");
  cap->add_option("endpoint", cap_args.endpoint, "host:port")->required();
  cap->add_option("out", cap_args.out_path, "output .rftrace path")
      ->required();
  cap->add_option("--duration", cap_args.duration_s,
                  "stop after this many seconds of signal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_args);
    if (an->parsed()) return run_analyze(an_args);
    if (de->parsed()) return run_dealias(de_args);
    if (st->parsed()) return run_stream(st_args);
    if (cap->parsed()) return run_capture(cap_args);
  } catch (const rfsc::NetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNetwork;
  } catch (const rfsc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
