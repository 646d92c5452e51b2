#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "squeezenoise/errors.hpp"
#include "squeezenoise/squeeze_film.hpp"

using namespace sqn;
using fixtures::kTwoPi;

namespace {

constexpr double kPi = std::numbers::pi;

// Angular frequency that produces squeeze number `sigma` for the given setup.
double omega_for_sigma(const PlateGeometry& g, const GasProperties& gas, double sigma) {
  return sigma * gas.pressure_pa * g.gap_m * g.gap_m /
         (12.0 * gas.viscosity_pa_s * g.width_m * g.width_m);
}

int odd_ceil(double x) {
  int n = static_cast<int>(std::ceil(x));
  return n % 2 == 0 ? n + 1 : n;
}

}  // namespace

TEST_SUITE("squeeze_film") {

TEST_CASE("squeeze number") {
  const PlateGeometry g{100e-6, 100e-6, 2e-6};
  const GasProperties gas{101325.0, 1.85e-5, 300.0};

  SUBCASE("reference value") {
    CHECK(squeeze_number(g, gas, kTwoPi * 1e4) == doctest::Approx(0.34415670816527713).epsilon(1e-14));
  }
  SUBCASE("zero frequency") { CHECK(squeeze_number(g, gas, 0.0) == 0.0); }
  SUBCASE("linear in viscosity") {
    GasProperties twice = gas;
    twice.viscosity_pa_s *= 2.0;
    const double w = 12345.0;
    CHECK(squeeze_number(g, twice, w) == doctest::Approx(2.0 * squeeze_number(g, gas, w)).epsilon(1e-15));
  }
}

TEST_CASE("single-term series values") {
  const double sigma = kPi * kPi;
  CHECK(damping_series_sum(sigma, 1.0, {1}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(elastic_series_sum(sigma, 1.0, {1}) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("series sums match brute-force summation") {
  SUBCASE("square plate, DC") {
    const auto ref = oracle::squeeze_series(0.0, 1.0, 99);
    CHECK(damping_series_sum(0.0, 1.0, {99}) == doctest::Approx(static_cast<double>(ref.damping)).epsilon(1e-13));
    CHECK(elastic_series_sum(0.0, 1.0, {99}) == doctest::Approx(static_cast<double>(ref.elastic)).epsilon(1e-13));
    CHECK(damping_series_sum(0.0, 1.0, {99}) == doctest::Approx(0.5279262435913046).epsilon(1e-13));
  }
  SUBCASE("converged DC values") {
    CHECK(damping_series_sum(0.0, 1.0, {1999}) == doctest::Approx(0.5279266524601672).epsilon(1e-12));
    CHECK(elastic_series_sum(0.0, 1.0, {199}) == doctest::Approx(0.2524113112340259).epsilon(1e-9));
  }
  SUBCASE("rectangular plates use an n range scaled by the aspect ratio") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> sig(0.0, 100.0), bet(1.0, 10.0);
    for (int i = 0; i < 40; ++i) {
      const double s = sig(rng), b = bet(rng);
      const auto ref = oracle::squeeze_series(s, b, 25, odd_ceil(b * 25));
      CHECK(damping_series_sum(s, b, {25}) == doctest::Approx(static_cast<double>(ref.damping)).epsilon(1e-12));
      CHECK(elastic_series_sum(s, b, {25}) == doctest::Approx(static_cast<double>(ref.elastic)).epsilon(1e-12));
    }
  }
}

TEST_CASE("series truncation converges") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> sig(0.0, 100.0), bet(1.0, 10.0);
  for (int i = 0; i < 60; ++i) {
    const double s = i == 0 ? 0.0 : sig(rng);
    const double b = i == 1 ? 10.0 : bet(rng);
    for (int m : {25, 49}) {
      const double d = damping_series_sum(s, b, {m});
      const double d2 = damping_series_sum(s, b, {m + 24});
      const double e = elastic_series_sum(s, b, {m});
      const double e2 = elastic_series_sum(s, b, {m + 24});
      CHECK(std::abs(d - d2) / d2 < 1e-3);
      CHECK(std::abs(e - e2) / e2 < 1e-3);
    }
  }
}

TEST_CASE("series argument validation") {
  CHECK_THROWS_AS(damping_series_sum(-1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(damping_series_sum(1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(elastic_series_sum(1.0, 1.0, {2}), ConfigError);
  CHECK_THROWS_AS(elastic_series_sum(1.0, 1.0, {0}), ConfigError);
}

TEST_CASE("damping coefficient at DC") {
  const PlateGeometry g = fixtures::square_plate();
  const GasProperties gas = fixtures::low_pressure_air();
  const double mu = gas.viscosity_pa_s;

  SUBCASE("normalized constant") {
    const double b0 = damping_coefficient(g, gas, 0.0, {199});
    const double norm = b0 * std::pow(g.gap_m, 3) / (mu * g.length_m * std::pow(g.width_m, 3));
    const double expected = 768.0 / std::pow(kPi, 6) * damping_series_sum(0.0, 1.0, {199});
    CHECK(norm == doctest::Approx(expected).epsilon(1e-13));
    CHECK(norm > 0.417);
    CHECK(norm < 0.426);
  }
  SUBCASE("continuous with the low-frequency branch") {
    const double b0 = damping_coefficient(g, gas, 0.0);
    CHECK(damping_coefficient(g, gas, 1e-3) == doctest::Approx(b0).epsilon(1e-12));
  }
  SUBCASE("inverse-cube gap scaling") {
    PlateGeometry half = g;
    half.gap_m /= 2.0;
    CHECK(damping_coefficient(half, gas, 0.0) / damping_coefficient(g, gas, 0.0) ==
          doctest::Approx(8.0).epsilon(1e-13));
  }
}

TEST_CASE("spring coefficient limits") {
  const PlateGeometry g = fixtures::square_plate();
  const GasProperties gas = fixtures::low_pressure_air();
  const double stiff = gas.pressure_pa * g.area() / g.gap_m;

  CHECK(spring_coefficient(g, gas, 0.0) == 0.0);
  SUBCASE("trapped-gas stiffness at high squeeze number") {
    const double w = omega_for_sigma(g, gas, 1e5);
    CHECK(spring_coefficient(g, gas, w, {199}) / stiff == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("coefficients are monotone in frequency") {
  const PlateGeometry g = fixtures::square_plate();
  const GasProperties gas = fixtures::low_pressure_air();
  double prev_b = INFINITY, prev_k = -1.0;
  for (double f : log_grid(10.0, 1e7, 50)) {
    const double b = damping_coefficient(g, gas, kTwoPi * f);
    const double k = spring_coefficient(g, gas, kTwoPi * f);
    CHECK(b < prev_b);
    CHECK(k > prev_k);
    CHECK(std::isfinite(b));
    CHECK(b > 0.0);
    prev_b = b;
    prev_k = k;
  }
}

TEST_CASE("elastic and damping forces cross once") {
  const PlateGeometry g = fixtures::square_plate();
  const GasProperties gas = fixtures::low_pressure_air();
  auto gap = [&](double sigma) {
    const double w = omega_for_sigma(g, gas, sigma);
    return spring_coefficient(g, gas, w) - w * damping_coefficient(g, gas, w);
  };
  CHECK(gap(1.0) < 0.0);
  CHECK(gap(100.0) > 0.0);
  const double sigma_c = oracle::bisect(gap, 1.0, 100.0);
  CHECK(sigma_c > 15.0);
  CHECK(sigma_c < 25.0);

  // Same crossing from the brute-force sums: k_d = w b  <=>  sigma S_s = pi^2 S_d.
  auto ref_gap = [](double sigma) {
    const auto s = oracle::squeeze_series(sigma, 1.0, 49);
    return static_cast<double>(sigma * s.elastic - oracle::kPi * oracle::kPi * s.damping);
  };
  CHECK(sigma_c == doctest::Approx(oracle::bisect(ref_gap, 1.0, 100.0)).epsilon(1e-10));
}

TEST_CASE("outputs stay finite and positive") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double w_side = 20e-6 * std::pow(50.0, u(rng));
    const PlateGeometry g{w_side * (1.0 + 9.0 * u(rng)), w_side, 0.5e-6 * std::pow(40.0, u(rng))};
    const GasProperties gas{std::pow(10.0, 1.0 + 4.0 * u(rng)), 1.85e-5, 300.0};
    const double w = kTwoPi * std::pow(10.0, 7.0 * u(rng));
    const double b = damping_coefficient(g, gas, w);
    const double k = spring_coefficient(g, gas, w);
    REQUIRE(std::isfinite(b));
    REQUIRE(std::isfinite(k));
    CHECK(b > 0.0);
    CHECK(k > 0.0);
  }
}

TEST_CASE("geometry validation names the field") {
  const GasProperties gas;
  auto message = [&](PlateGeometry g) {
    try {
      damping_coefficient(g, gas, 1.0);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({0.0, 1e-4, 1e-6}).find("length_m") != std::string::npos);
  CHECK(message({1e-4, -1.0, 1e-6}).find("width_m") != std::string::npos);
  CHECK(message({1e-4, 1e-4, 0.0}).find("gap_m") != std::string::npos);
  CHECK_FALSE(message({1e-4, 2e-4, 1e-6}).empty());
  CHECK_THROWS_AS(damping_coefficient({1e-4, 1e-4, 1e-6}, {-1.0, 1.85e-5, 300.0}, 1.0), ConfigError);
}

TEST_CASE("synth_spectrum") {
  const PlateGeometry g = fixtures::square_plate();
  const GasProperties gas = fixtures::low_pressure_air();

  SUBCASE("one point matches the coefficient functions") {
    const std::vector<double> grid{1234.5};
    const DampingSpectrum s = synth_spectrum(g, gas, grid);
    REQUIRE(s.size() == 1);
    CHECK(s.rows()[0].b_ns_per_m == damping_coefficient(g, gas, kTwoPi * 1234.5));
    CHECK(s.rows()[0].kd_n_per_m == spring_coefficient(g, gas, kTwoPi * 1234.5));
  }
  SUBCASE("empty or unordered grids are rejected") {
    CHECK_THROWS_AS(synth_spectrum(g, gas, std::vector<double>{}), ConfigError);
    CHECK_THROWS_AS(synth_spectrum(g, gas, std::vector<double>{10.0, 5.0}), ConfigError);
    CHECK_THROWS_AS(synth_spectrum(g, gas, std::vector<double>{0.0, 5.0}), ConfigError);
  }
  SUBCASE("b falls and k_d rises across the table") {
    const DampingSpectrum s = fixtures::square_plate_spectrum(10.0, 1e6, 100);
    for (std::size_t i = 1; i < s.size(); ++i) {
      CHECK(s.rows()[i].b_ns_per_m < s.rows()[i - 1].b_ns_per_m);
      CHECK(s.rows()[i].kd_n_per_m > s.rows()[i - 1].kd_n_per_m);
    }
  }
  SUBCASE("CSV round trip is bit-identical") {
    const DampingSpectrum s = fixtures::square_plate_spectrum(10.0, 1e6, 100);
    std::istringstream in(export_csv(s));
    CHECK(parse_csv(in) == s);
  }
}

}  // TEST_SUITE
