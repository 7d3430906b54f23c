#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <rfsc/rfsc.hpp>

namespace {
constexpr double kFs = 122.88e6;
}

TEST_CASE("a 6.7745 MHz alias maps to three AOM-band images at k_max=2") {
  const auto c = rfsc::dealias_candidates(6.7745e6, kFs, 2);
  REQUIRE(c.size() == 3);
  REQUIRE(c[0] == Catch::Approx(116.1055e6).margin(1.0));
  REQUIRE(c[1] == Catch::Approx(129.6545e6).margin(1.0));
  REQUIRE(c[2] == Catch::Approx(238.9855e6).margin(1.0));
}

TEST_CASE("each image folds back to the same alias") {
  for (double f : {116.1055e6, 129.6545e6, 238.9855e6})
    REQUIRE(rfsc::alias_frequency(f, kFs) == Catch::Approx(6.7745e6).margin(1e-3));
}

TEST_CASE("baseband frequencies survive k=0 untouched") {
  const auto c =
      rfsc::dealias_candidates(10e6, kFs, 0, rfsc::FrequencyBand{0.0, kFs / 2.0});
  REQUIRE(c == std::vector<double>{10e6});
}

TEST_CASE("fold and unfold close over random in-band tones") {
  rfsc::Rng rng(20260814);
  const rfsc::FrequencyBand band = rfsc::kAomBand;
  for (int i = 0; i < 1000; ++i) {
    const double f_sig =
        band.low_hz + rng.uniform() * (band.high_hz - band.low_hz);
    const double f_alias = rfsc::alias_frequency(f_sig, kFs);
    REQUIRE(f_alias >= 0.0);
    REQUIRE(f_alias <= kFs / 2.0);
    const auto cands = rfsc::dealias_candidates(f_alias, kFs, 3, band);
    bool found = false;
    for (double c : cands) {
      REQUIRE(rfsc::alias_frequency(c, kFs) == Catch::Approx(f_alias).margin(1e-6));
      if (std::fabs(c - f_sig) < 1e-6) found = true;
    }
    REQUIRE(found);
  }
}

TEST_CASE("alias of a Nyquist-exact tone stays at the edge") {
  REQUIRE(rfsc::alias_frequency(kFs / 2.0, kFs) == Catch::Approx(kFs / 2.0));
  REQUIRE(rfsc::alias_frequency(kFs, kFs) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("zero alias gives the sampling harmonics inside the band") {
  const auto c = rfsc::dealias_candidates(0.0, kFs, 3);
  REQUIRE(c.size() == 2);
  REQUIRE(c[0] == Catch::Approx(kFs).margin(1e-6));
  REQUIRE(c[1] == Catch::Approx(2.0 * kFs).margin(1e-6));
}

TEST_CASE("candidates are sorted and deduplicated") {
  // fs/2 makes k*fs - f and (k-1)*fs + f coincide
  const auto c = rfsc::dealias_candidates(
      kFs / 2.0, kFs, 3, rfsc::FrequencyBand{0.0, 4.0 * kFs});
  REQUIRE(std::is_sorted(c.begin(), c.end()));
  for (std::size_t i = 1; i < c.size(); ++i)
    REQUIRE(c[i] - c[i - 1] > 1e-6);
  REQUIRE(c.size() == 4);  // fs/2, 3fs/2, 5fs/2, 7fs/2
}

TEST_CASE("invalid inputs are rejected") {
  REQUIRE_THROWS_AS(rfsc::dealias_candidates(1e6, 0.0, 3), rfsc::ConfigInvalid);
  REQUIRE_THROWS_AS(rfsc::dealias_candidates(-1.0, kFs, 3), rfsc::ConfigInvalid);
  REQUIRE_THROWS_AS(rfsc::dealias_candidates(kFs, kFs, 3), rfsc::ConfigInvalid);
  REQUIRE_THROWS_AS(rfsc::dealias_candidates(1e6, kFs, -1), rfsc::ConfigInvalid);
  REQUIRE_THROWS_AS(
      rfsc::dealias_candidates(1e6, kFs, 3, rfsc::FrequencyBand{5.0, 1.0}),
      rfsc::InvalidBand);
  REQUIRE_THROWS_AS(
      rfsc::dealias_candidates(1e6, kFs, 3, rfsc::FrequencyBand{-2.0, 1.0}),
      rfsc::InvalidBand);
  REQUIRE_THROWS_AS(rfsc::alias_frequency(1e6, -5.0), rfsc::ConfigInvalid);
}
