#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include <rfsc/rfsc.hpp>

#include "../support.hpp"

namespace {

rfsc::Pulse at(double t0, double dur, double f) {
  rfsc::Pulse p;
  p.t_start_s = t0;
  p.t_end_s = t0 + dur;
  p.duration_s = dur;
  p.center_freq_hz = f;
  return p;
}

// shots with two early fixed tones and one late fixed tone
std::vector<rfsc::Shot> canned_shots(int n, bool with_gate = false) {
  std::vector<rfsc::Shot> shots;
  for (int i = 0; i < n; ++i) {
    rfsc::Shot s;
    s.index = i;
    const double base = i * 5e-3;
    s.pulses.push_back(at(base, 100e-6, 1e6));
    s.pulses.push_back(at(base + 150e-6, 80e-6, 2e6));
    if (with_gate) s.pulses.push_back(at(base + 400e-6, 50e-6, 2.5e6));
    s.pulses.push_back(at(base + 800e-6, 120e-6, 3e6));
    s.t_start_s = base;
    s.t_end_s = base + 920e-6;
    s.region_labels.assign(s.pulses.size(), rfsc::Region::Unknown);
    shots.push_back(s);
  }
  return shots;
}

}  // namespace

TEST_CASE("recurring tones split into preamble and readout at the widest gap") {
  const auto profile = rfsc::profile_baseline(canned_shots(5));
  REQUIRE(profile.preamble.size() == 2);
  REQUIRE(profile.readout.size() == 1);
  REQUIRE(profile.preamble[0].center_freq_hz == Catch::Approx(1e6));
  REQUIRE(profile.preamble[0].median_offset_s == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(profile.preamble[1].center_freq_hz == Catch::Approx(2e6));
  REQUIRE(profile.readout[0].center_freq_hz == Catch::Approx(3e6));
  REQUIRE(profile.readout[0].median_offset_s == Catch::Approx(800e-6));
  for (const auto& t : profile.preamble) REQUIRE(t.occurrence == 1.0);
}

TEST_CASE("rare pulses are not templates") {
  auto shots = canned_shots(10);
  // one-off extra tone in a single shot
  shots[4].pulses.push_back(at(shots[4].t_start_s + 300e-6, 60e-6, 4e6));
  const auto profile = rfsc::profile_baseline(shots);
  REQUIRE(profile.preamble.size() + profile.readout.size() == 3);
  for (const auto& t : profile.preamble)
    REQUIRE(t.center_freq_hz != Catch::Approx(4e6));
  for (const auto& t : profile.readout)
    REQUIRE(t.center_freq_hz != Catch::Approx(4e6));
}

TEST_CASE("profiling needs at least three shots and one recurring tone") {
  REQUIRE_THROWS_AS(rfsc::profile_baseline(canned_shots(2)),
                    rfsc::InsufficientShots);
  REQUIRE_THROWS_AS(rfsc::profile_baseline({}), rfsc::InsufficientShots);

  // nothing recurs often enough
  auto shots = canned_shots(5);
  for (int i = 0; i < 5; ++i)
    for (auto& p : shots[i].pulses) p.center_freq_hz += i * 1e6;
  rfsc::BaselineOptions opt;
  opt.min_occurrence = 0.8;
  REQUIRE_THROWS_AS(rfsc::profile_baseline(shots, opt),
                    rfsc::InsufficientShots);
}

TEST_CASE("labels wrap the head and tail runs only") {
  const auto profile = rfsc::profile_baseline(canned_shots(5));
  const auto labeled = rfsc::label_regions(canned_shots(1, true)[0], profile);
  REQUIRE(labeled.region_labels.size() == 4);
  REQUIRE(labeled.region_labels[0] == rfsc::Region::A);
  REQUIRE(labeled.region_labels[1] == rfsc::Region::A);
  REQUIRE(labeled.region_labels[2] == rfsc::Region::B);
  REQUIRE(labeled.region_labels[3] == rfsc::Region::C);
}

TEST_CASE("a template lookalike in mid-shot stays region B") {
  const auto profile = rfsc::profile_baseline(canned_shots(5));
  auto shot = canned_shots(1)[0];
  // clone of the first preamble tone, inserted after a non-matching pulse
  shot.pulses.insert(shot.pulses.begin() + 2,
                     at(shot.t_start_s + 500e-6, 100e-6, 1e6));
  shot.pulses.insert(shot.pulses.begin() + 2,
                     at(shot.t_start_s + 400e-6, 50e-6, 2.5e6));
  const auto labeled = rfsc::label_regions(shot, profile);
  REQUIRE(labeled.region_labels ==
          std::vector<rfsc::Region>{rfsc::Region::A, rfsc::Region::A,
                                    rfsc::Region::B, rfsc::Region::B,
                                    rfsc::Region::C});
}

TEST_CASE("no matching pulses means everything is region B") {
  const auto profile = rfsc::profile_baseline(canned_shots(5));
  rfsc::Shot s;
  s.index = 0;
  s.pulses = {at(0.0, 30e-6, 7e6), at(100e-6, 30e-6, 7.5e6)};
  s.t_start_s = 0.0;
  s.t_end_s = 130e-6;
  const auto labeled = rfsc::label_regions(s, profile);
  REQUIRE(labeled.region_labels ==
          std::vector<rfsc::Region>{rfsc::Region::B, rfsc::Region::B});

  rfsc::BaselineProfile empty;
  REQUIRE_THROWS_AS(rfsc::label_regions(s, empty), rfsc::ConfigInvalid);
}

TEST_CASE("an idle run profiles to the configured fixed tones") {
  // no gates at all: the trace is just state prep and readout, repeated
  rfsc::CircuitSpec c;
  c.n_ions = 3;
  c.n_shots = 4;
  const auto cfg = testsup::light_config();
  const auto res = rfsc::synthesize(c, cfg, 101);

  const auto spec = rfsc::compute_stft(res.trace, testsup::light_stft());
  const auto st = rfsc::compute_threshold(spec, 4.0);
  const auto comps =
      rfsc::label_components(rfsc::apply_threshold(spec, st), 3);
  const auto pulses = rfsc::extract_pulses(spec, comps);
  const auto shots = rfsc::segment_shots(pulses, 1e-3);
  REQUIRE(shots.size() == 4);

  rfsc::BaselineOptions opt;
  opt.freq_tol_hz = spec.bin_hz;
  opt.dur_tol_s = 2.0 * spec.hop_s;
  const auto profile = rfsc::profile_baseline(shots, opt);
  REQUIRE(profile.preamble.size() == 2);
  REQUIRE(profile.readout.size() == 1);
  REQUIRE(profile.preamble[0].center_freq_hz ==
          Catch::Approx(1.2e6).margin(spec.bin_hz));
  REQUIRE(profile.preamble[1].center_freq_hz ==
          Catch::Approx(1.7e6).margin(spec.bin_hz));
  REQUIRE(profile.readout[0].center_freq_hz ==
          Catch::Approx(4.2e6).margin(spec.bin_hz));
  REQUIRE(profile.preamble[0].duration_s ==
          Catch::Approx(100e-6).margin(2.0 * spec.hop_s));
}

TEST_CASE("profiles survive a json round-trip") {
  const auto profile = rfsc::profile_baseline(canned_shots(5));
  const auto back = rfsc::baseline_from_json(rfsc::baseline_to_json(profile));
  REQUIRE(back.preamble.size() == profile.preamble.size());
  REQUIRE(back.readout.size() == profile.readout.size());
  for (std::size_t i = 0; i < profile.preamble.size(); ++i) {
    REQUIRE(back.preamble[i].center_freq_hz ==
            profile.preamble[i].center_freq_hz);
    REQUIRE(back.preamble[i].duration_s == profile.preamble[i].duration_s);
    REQUIRE(back.preamble[i].occurrence == profile.preamble[i].occurrence);
    REQUIRE(back.preamble[i].median_offset_s ==
            profile.preamble[i].median_offset_s);
  }
}
