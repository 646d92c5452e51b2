#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "squeezenoise/damping_data.hpp"
#include "squeezenoise/errors.hpp"
#include "squeezenoise/squeeze_film.hpp"

using namespace sqn;
using fixtures::kTwoPi;

namespace {

DampingSpectrum parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

const char* kFourRows =
    "freq_hz,b_ns_per_m,kd_n_per_m\n"
    "# source: fea-run-7\n"
    "10,2.0e-5,0\n"
    "100,1.9e-5,0.1\n"
    "# mid-file comment\n"
    "1000,1.5e-5,2.5\n"
    "1e4,8e-6,30\n";

}  // namespace

TEST_SUITE("damping_data") {

TEST_CASE("parse a well-formed table") {
  const DampingSpectrum s = parse(kFourRows);
  REQUIRE(s.size() == 4);
  CHECK(s.source_tag() == "fea-run-7");
  CHECK(s.rows()[2] == DampingRow{1000.0, 1.5e-5, 2.5});
  CHECK(s.f_min() == 10.0);
  CHECK(s.f_max() == 1e4);
}

TEST_CASE("CRLF line endings are accepted") {
  CHECK(parse("freq_hz,b_ns_per_m,kd_n_per_m\r\n1,1,0\r\n2,1,0\r\n").size() == 2);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse("10,1,0\n"), SchemaError);
  CHECK_THROWS_AS(parse("freq,b,kd\n10,1,0\n"), SchemaError);
  CHECK_THROWS_AS(parse("freq_hz,b_ns_per_m,kd_n_per_m\n10,1\n"), SchemaError);
  CHECK_THROWS_AS(parse("freq_hz,b_ns_per_m,kd_n_per_m\n10,1,0,4\n"), SchemaError);
  CHECK_THROWS_AS(parse("freq_hz,b_ns_per_m,kd_n_per_m\n10,abc,0\n"), SchemaError);
  CHECK_THROWS_AS(parse("freq_hz,b_ns_per_m,kd_n_per_m\n"), SchemaError);
  CHECK_THROWS_AS(parse(""), SchemaError);
}

TEST_CASE("duplicated frequency names the row") {
  const std::string text =
      "freq_hz,b_ns_per_m,kd_n_per_m\n10,1,0\n20,1,0\n20,1,0\n30,1,0\n";
  try {
    parse(text);
    FAIL("expected OrderError");
  } catch (const OrderError& e) {
    CHECK(e.row() == 2);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("invalid values carry the row index") {
  try {
    parse("freq_hz,b_ns_per_m,kd_n_per_m\n10,1,0\n20,0,0\n");
    FAIL("expected ValueError");
  } catch (const ValueError& e) {
    CHECK(e.row() == 1);
  }
  CHECK_THROWS_AS(parse("freq_hz,b_ns_per_m,kd_n_per_m\n10,1,-1\n"), ValueError);
  CHECK_THROWS_AS(parse("freq_hz,b_ns_per_m,kd_n_per_m\n-10,1,0\n"), ValueError);
  CHECK_THROWS_AS(parse("freq_hz,b_ns_per_m,kd_n_per_m\n10,inf,0\n"), ValueError);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(parse_csv_file("/nonexistent/table.csv"), ConfigError);
}

TEST_CASE("export then parse reproduces random spectra exactly") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DampingRow> rows;
    double f = std::exp(u(rng));
    for (int i = 0; i < 30; ++i) {
      f = std::nextafter(f * (1.0 + std::exp(u(rng) / 4.0)), INFINITY);
      rows.push_back({f, std::exp(u(rng)), trial % 2 ? 0.0 : std::exp(u(rng))});
    }
    const DampingSpectrum s(rows, "trial " + std::to_string(trial));
    CHECK(parse(export_csv(s)) == s);
  }
}

TEST_CASE("interpolant") {
  const DampingSpectrum s = fixtures::square_plate_spectrum(10.0, 1e6, 60);
  const DampingInterpolant interp(s);

  SUBCASE("knots return the table rows exactly") {
    for (const DampingRow& r : s.rows()) {
      const DampingPoint p = interp(r.freq_hz);
      CHECK(p.b == r.b_ns_per_m);
      CHECK(p.kd == r.kd_n_per_m);
    }
  }
  SUBCASE("domain is closed and never extrapolated") {
    CHECK_NOTHROW(interp(s.f_min()));
    CHECK_NOTHROW(interp(s.f_max()));
    CHECK_THROWS_AS(interp(std::nextafter(s.f_min(), 0.0)), DomainError);
    CHECK_THROWS_AS(interp(std::nextafter(s.f_max(), INFINITY)), DomainError);
    CHECK_FALSE(interp.contains(0.5 * s.f_min()));
  }
  SUBCASE("values stay between bracketing knots") {
    for (std::size_t i = 1; i < s.size(); ++i) {
      const DampingRow& a = s.rows()[i - 1];
      const DampingRow& b = s.rows()[i];
      const DampingPoint p = interp(std::sqrt(a.freq_hz * b.freq_hz));
      CHECK(p.b <= a.b_ns_per_m);
      CHECK(p.b >= b.b_ns_per_m);
      CHECK(p.kd >= a.kd_n_per_m);
      CHECK(p.kd <= b.kd_n_per_m);
    }
    CHECK(interp.clamp_count() == 0);
  }
  SUBCASE("off-knot values track the analytical model") {
    const PlateGeometry g = fixtures::square_plate();
    const GasProperties gas = fixtures::low_pressure_air();
    const std::vector<double> fine = log_grid(10.0, 1e6, 119);
    for (std::size_t i = 1; i < fine.size(); i += 2) {
      const double w = kTwoPi * fine[i];
      const DampingPoint p = interp(fine[i]);
      CHECK(p.b == doctest::Approx(damping_coefficient(g, gas, w)).epsilon(0.01));
      CHECK(p.kd == doctest::Approx(spring_coefficient(g, gas, w)).epsilon(0.01));
    }
  }
  SUBCASE("deterministic") {
    const DampingInterpolant again(s);
    for (double f : log_grid(10.0, 1e6, 77)) {
      CHECK(again(f).b == interp(f).b);
      CHECK(again(f).kd == interp(f).kd);
    }
  }
}

TEST_CASE("interpolant needs enough rows") {
  const DampingSpectrum three({{1, 1, 0}, {2, 1, 0}, {3, 1, 0}}, "");
  CHECK_THROWS_AS(DampingInterpolant{three}, ConfigError);
}

TEST_CASE("log grid") {
  const auto g = log_grid(10.0, 1e4, 4);
  REQUIRE(g.size() == 4);
  CHECK(g.front() == 10.0);
  CHECK(g.back() == 1e4);
  CHECK(g[1] == doctest::Approx(100.0).epsilon(1e-14));
  CHECK_THROWS_AS(log_grid(10.0, 10.0, 4), ConfigError);
  CHECK_THROWS_AS(log_grid(20.0, 10.0, 4), ConfigError);
  CHECK_THROWS_AS(log_grid(0.0, 10.0, 4), ConfigError);
  CHECK_THROWS_AS(log_grid(1.0, 10.0, 0), ConfigError);
}

}  // TEST_SUITE
