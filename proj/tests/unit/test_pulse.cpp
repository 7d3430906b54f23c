#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include <rfsc/rfsc.hpp>

namespace {

rfsc::Spectrogram hand_grid() {
  rfsc::Spectrogram s;
  s.n_freq = 128;
  s.n_time = 32;
  s.bin_hz = 100.0;
  s.hop_s = 1e-3;
  s.origin_time_s = 0.25;
  s.sample_rate_hz = 25600.0;
  s.values.assign(s.n_freq * s.n_time, {0.0, 0.0});
  return s;
}

rfsc::Component comp_of(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> cells) {
  rfsc::Component c;
  c.cells.assign(cells.begin(), cells.end());
  std::sort(c.cells.begin(), c.cells.end());
  c.min_t = c.max_t = c.cells[0].first;
  c.min_f = c.max_f = c.cells[0].second;
  for (const auto& [t, f] : c.cells) {
    c.min_t = std::min(c.min_t, t);
    c.max_t = std::max(c.max_t, t);
    c.min_f = std::min(c.min_f, f);
    c.max_f = std::max(c.max_f, f);
  }
  return c;
}

}  // namespace

TEST_CASE("timing comes from the frame extent") {
  auto s = hand_grid();
  for (std::uint32_t t = 10; t <= 14; ++t)
    s.values[t * s.n_freq + 100] = {2.0, 0.0};
  const auto comp = comp_of({{10, 100}, {11, 100}, {12, 100}, {13, 100}, {14, 100}});
  const auto pulses = rfsc::extract_pulses(s, {comp});
  REQUIRE(pulses.size() == 1);
  const auto& p = pulses[0];
  REQUIRE(p.t_start_s == Catch::Approx(0.25 + 10e-3).margin(1e-15));
  REQUIRE(p.t_end_s == Catch::Approx(0.25 + 14e-3).margin(1e-15));
  REQUIRE(p.duration_s == Catch::Approx(4e-3).margin(1e-15));
  REQUIRE(p.center_freq_hz == Catch::Approx(100 * 100.0).margin(1e-12));
  REQUIRE(p.peak_power == Catch::Approx(4.0).margin(1e-12));
  REQUIRE(p.component_id == 0);
}

TEST_CASE("equal power in two bins centers between them") {
  auto s = hand_grid();
  s.values[5 * s.n_freq + 100] = {1.0, 0.0};
  s.values[5 * s.n_freq + 102] = {1.0, 0.0};
  const auto pulses =
      rfsc::extract_pulses(s, {comp_of({{5, 100}, {5, 102}})});
  REQUIRE(pulses.size() == 1);
  REQUIRE(pulses[0].center_freq_hz == Catch::Approx(101 * 100.0).margin(1e-9));
}

TEST_CASE("centroid weights by power, not amplitude") {
  auto s = hand_grid();
  // power 3 at bin 100, power 1 at bin 102: centroid at 100.5 bins
  s.values[5 * s.n_freq + 100] = {std::sqrt(3.0), 0.0};
  s.values[5 * s.n_freq + 102] = {1.0, 0.0};
  const auto pulses =
      rfsc::extract_pulses(s, {comp_of({{5, 100}, {5, 102}})});
  REQUIRE(pulses[0].center_freq_hz == Catch::Approx(100.5 * 100.0).margin(1e-9));
  REQUIRE(pulses[0].peak_power == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("zero-power component falls back to the mean bin") {
  auto s = hand_grid();
  const auto pulses =
      rfsc::extract_pulses(s, {comp_of({{3, 10}, {3, 20}})});
  REQUIRE(pulses.size() == 1);
  REQUIRE(pulses[0].center_freq_hz == Catch::Approx(15 * 100.0).margin(1e-9));
  REQUIRE(pulses[0].peak_power == 0.0);
}

TEST_CASE("pulses sort by start time then frequency") {
  auto s = hand_grid();
  s.values[4 * s.n_freq + 50] = {1.0, 0.0};
  s.values[4 * s.n_freq + 20] = {1.0, 0.0};
  s.values[1 * s.n_freq + 90] = {1.0, 0.0};
  const auto pulses = rfsc::extract_pulses(
      s, {comp_of({{4, 50}}), comp_of({{4, 20}}), comp_of({{1, 90}})});
  REQUIRE(pulses.size() == 3);
  REQUIRE(pulses[0].center_freq_hz == Catch::Approx(9000.0));
  REQUIRE(pulses[1].center_freq_hz == Catch::Approx(2000.0));
  REQUIRE(pulses[2].center_freq_hz == Catch::Approx(5000.0));
  REQUIRE(pulses[0].component_id == 2);
  REQUIRE(pulses[1].component_id == 1);
  REQUIRE(pulses[2].component_id == 0);
}

TEST_CASE("components outside the grid are rejected") {
  auto s = hand_grid();
  REQUIRE_THROWS_AS(rfsc::extract_pulses(s, {comp_of({{31, 128}})}),
                    rfsc::ShapeMismatch);
  REQUIRE_THROWS_AS(rfsc::extract_pulses(s, {comp_of({{32, 0}})}),
                    rfsc::ShapeMismatch);
}
