#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <rfsc/rfsc.hpp>

namespace {

rfsc::GateEvent single(int ion, double dur, double freq) {
  rfsc::GateEvent ev;
  ev.kind = rfsc::EventKind::SingleQuditRotation;
  ev.ions = {ion, -1};
  ev.legs = {{ion, dur, freq, 0}};
  return ev;
}

rfsc::GateEvent ms(int a, int b, double dur, double fa, double fb) {
  rfsc::GateEvent ev;
  ev.kind = rfsc::EventKind::MS;
  ev.ions = {a, b};
  ev.legs = {{a, dur, fa, 0}, {b, dur, fb, 1}};
  return ev;
}

}  // namespace

TEST_CASE("a single event gives zero spread") {
  const auto t = rfsc::aggregate_stats(
      std::vector<rfsc::GateEvent>{single(0, 40e-6, 6.77e6)});
  REQUIRE(t.rows.size() == 1);
  REQUIRE(t.total_pulses == 1);
  REQUIRE(t.rows[0].ion == 0);
  REQUIRE(t.rows[0].x.count == 1);
  REQUIRE(t.rows[0].x.dur_mean_s == 40e-6);
  REQUIRE(t.rows[0].x.dur_sigma_s == 0.0);
  REQUIRE(t.rows[0].x.freq_sigma_hz == 0.0);
  REQUIRE(t.rows[0].ms.count == 0);
}

TEST_CASE("population statistics by hand") {
  const std::vector<rfsc::GateEvent> events = {
      single(1, 40e-6, 8.1e6), single(1, 41e-6, 8.1e6), single(1, 42e-6, 8.1e6)};
  const auto t = rfsc::aggregate_stats(events);
  REQUIRE(t.rows.size() == 1);
  REQUIRE(t.rows[0].x.count == 3);
  REQUIRE(t.rows[0].x.dur_mean_s == Catch::Approx(41e-6).epsilon(1e-12));
  REQUIRE(t.rows[0].x.dur_sigma_s ==
          Catch::Approx(std::sqrt(2.0 / 3.0) * 1e-6).epsilon(1e-9));
}

TEST_CASE("event order cannot change a single bit of the output") {
  std::vector<rfsc::GateEvent> events;
  rfsc::Rng rng(606);
  for (int i = 0; i < 40; ++i) {
    const int ion = static_cast<int>(rng.integer(3));
    events.push_back(single(ion, 30e-6 + rng.uniform() * 2e-5,
                            6.7e6 + rng.uniform() * 1e4));
  }
  for (int i = 0; i < 20; ++i)
    events.push_back(ms(static_cast<int>(rng.integer(2)), 2,
                        220e-6 + rng.uniform() * 2e-5,
                        6.7e6 + rng.uniform() * 1e4,
                        9.5e6 + rng.uniform() * 1e4));

  const auto base = rfsc::aggregate_stats(events);
  auto shuffled = events;
  std::reverse(shuffled.begin(), shuffled.end());
  std::rotate(shuffled.begin(), shuffled.begin() + 17, shuffled.end());
  const auto t = rfsc::aggregate_stats(shuffled);

  REQUIRE(t.rows.size() == base.rows.size());
  REQUIRE(t.total_pulses == base.total_pulses);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    REQUIRE(t.rows[i].ion == base.rows[i].ion);
    REQUIRE(t.rows[i].x.dur_mean_s == base.rows[i].x.dur_mean_s);
    REQUIRE(t.rows[i].x.dur_sigma_s == base.rows[i].x.dur_sigma_s);
    REQUIRE(t.rows[i].x.freq_mean_hz == base.rows[i].x.freq_mean_hz);
    REQUIRE(t.rows[i].x.freq_sigma_hz == base.rows[i].x.freq_sigma_hz);
    REQUIRE(t.rows[i].ms.dur_mean_s == base.rows[i].ms.dur_mean_s);
    REQUIRE(t.rows[i].ms.dur_sigma_s == base.rows[i].ms.dur_sigma_s);
    REQUIRE(t.rows[i].ms.freq_mean_hz == base.rows[i].ms.freq_mean_hz);
    REQUIRE(t.rows[i].ms.freq_sigma_hz == base.rows[i].ms.freq_sigma_hz);
  }
}

TEST_CASE("ms events count once per participating ion") {
  const std::vector<rfsc::GateEvent> events = {
      ms(0, 1, 230e-6, 6.77e6, 8.11e6),
      ms(0, 2, 225e-6, 6.78e6, 9.57e6),
      single(0, 40e-6, 6.77e6),
  };
  const auto t = rfsc::aggregate_stats(events);
  REQUIRE(t.total_pulses == 5);
  REQUIRE(t.rows.size() == 3);
  REQUIRE(t.rows[0].ion == 0);
  REQUIRE(t.rows[0].x.count == 1);
  REQUIRE(t.rows[0].ms.count == 2);
  REQUIRE(t.rows[0].ms.dur_mean_s == Catch::Approx(227.5e-6));
  REQUIRE(t.rows[1].ion == 1);
  REQUIRE(t.rows[1].ms.count == 1);
  REQUIRE(t.rows[1].ms.freq_mean_hz == 8.11e6);
  REQUIRE(t.rows[2].ion == 2);
  REQUIRE(t.rows[2].ms.count == 1);
}

TEST_CASE("per-shot nesting flattens to the same table") {
  const std::vector<rfsc::GateEvent> flat = {
      single(0, 40e-6, 6.77e6), ms(0, 1, 230e-6, 6.77e6, 8.11e6),
      single(1, 35e-6, 8.11e6)};
  const std::vector<std::vector<rfsc::GateEvent>> nested = {
      {flat[0], flat[1]}, {}, {flat[2]}};
  const auto a = rfsc::aggregate_stats(flat);
  const auto b = rfsc::aggregate_stats(nested);
  REQUIRE(a.total_pulses == b.total_pulses);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    REQUIRE(a.rows[i].x.dur_mean_s == b.rows[i].x.dur_mean_s);
    REQUIRE(a.rows[i].ms.dur_mean_s == b.rows[i].ms.dur_mean_s);
  }
}

TEST_CASE("empty input gives an empty table") {
  const auto t = rfsc::aggregate_stats(std::vector<rfsc::GateEvent>{});
  REQUIRE(t.rows.empty());
  REQUIRE(t.total_pulses == 0);
}
