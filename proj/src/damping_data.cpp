#include "squeezenoise/damping_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

// pchip.hpp (Boost 1.74) calls isnan unqualified; math.h puts it in scope.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "squeezenoise/errors.hpp"

namespace sqn {

namespace {

constexpr std::string_view kHeader = "freq_hz,b_ns_per_m,kd_n_per_m";
constexpr std::string_view kSourcePrefix = "# source:";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw SchemaError("line " + std::to_string(line_no) + ": malformed number '" +
                      std::string(field) + "'");
  }
  return value;
}

}  // namespace

DampingSpectrum::DampingSpectrum(std::vector<DampingRow> rows, std::string source_tag)
    : rows_(std::move(rows)), source_tag_(std::move(source_tag)) {
  if (rows_.empty()) throw ValueError("damping spectrum has no rows", 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const DampingRow& r = rows_[i];
    const std::string where = "row " + std::to_string(i);
    if (!(r.freq_hz > 0.0) || !std::isfinite(r.freq_hz)) {
      throw ValueError(where + ": freq_hz must be finite and positive", i);
    }
    if (!(r.b_ns_per_m > 0.0) || !std::isfinite(r.b_ns_per_m)) {
      throw ValueError(where + ": b_ns_per_m must be finite and positive", i);
    }
    if (!(r.kd_n_per_m >= 0.0) || !std::isfinite(r.kd_n_per_m)) {
      throw ValueError(where + ": kd_n_per_m must be finite and non-negative", i);
    }
    if (i > 0 && !(r.freq_hz > rows_[i - 1].freq_hz)) {
      throw OrderError(where + ": freq_hz not strictly increasing (" +
                           std::to_string(r.freq_hz) + " after " +
                           std::to_string(rows_[i - 1].freq_hz) + ")",
                       i);
    }
  }
}

struct DampingInterpolant::Curves {
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  Pchip log_b;
  Pchip kd;
};

DampingInterpolant::DampingInterpolant(const DampingSpectrum& spec)
    : knots_(spec.rows()), clamps_(std::make_shared<std::atomic<std::size_t>>(0)) {
  if (knots_.size() < kMinRows) {
    throw ConfigError("interpolation needs at least " + std::to_string(kMinRows) +
                      " rows, got " + std::to_string(knots_.size()));
  }
  std::vector<double> x, lb, kd, x2;
  for (const DampingRow& r : knots_) {
    x.push_back(std::log(r.freq_hz));
    lb.push_back(std::log(r.b_ns_per_m));
    kd.push_back(r.kd_n_per_m);
  }
  x2 = x;
  curves_ = std::make_shared<const Curves>(
      Curves{Curves::Pchip(std::move(x), std::move(lb)), Curves::Pchip(std::move(x2), std::move(kd))});
}

DampingPoint DampingInterpolant::evaluate(double freq_hz) const {
  if (!contains(freq_hz)) {
    throw DomainError("frequency " + std::to_string(freq_hz) + " Hz outside table range [" +
                      std::to_string(f_min()) + ", " + std::to_string(f_max()) + "]");
  }
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), freq_hz,
                                   [](const DampingRow& r, double f) { return r.freq_hz < f; });
  if (it != knots_.end() && it->freq_hz == freq_hz) return {it->b_ns_per_m, it->kd_n_per_m};

  const double x = std::log(freq_hz);
  DampingPoint p{std::exp(curves_->log_b(x)), curves_->kd(x)};
  if (p.kd < 0.0) {
    if (clamps_->fetch_add(1) == 0) {
      std::cerr << "warning: interpolated k_d < 0 at " << freq_hz << " Hz clamped to 0\n";
    }
    p.kd = 0.0;
  }
  return p;
}

DampingSpectrum parse_csv(std::istream& in) {
  std::string line;
  std::string tag;
  std::vector<DampingRow> rows;
  std::vector<std::size_t> line_of_row;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    if (view.starts_with('#')) {
      if (view.starts_with(kSourcePrefix)) tag = std::string(trim(view.substr(kSourcePrefix.size())));
      continue;
    }
    if (!header_seen) {
      if (view != kHeader) {
        throw SchemaError("line " + std::to_string(line_no) + ": expected header '" +
                          std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (trim(view).empty()) continue;
    DampingRow row;
    double* fields[] = {&row.freq_hz, &row.b_ns_per_m, &row.kd_n_per_m};
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      const auto field = view.substr(start, comma == std::string_view::npos ? view.npos : comma - start);
      if (count < 3) *fields[count] = parse_number(field, line_no);
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != 3) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                        std::to_string(count));
    }
    rows.push_back(row);
    line_of_row.push_back(line_no);
  }
  if (!header_seen) throw SchemaError("missing header '" + std::string(kHeader) + "'");
  if (rows.empty()) throw SchemaError("no data rows");
  try {
    return DampingSpectrum(std::move(rows), std::move(tag));
  } catch (const OrderError& e) {
    throw OrderError(std::string(e.what()) + " at line " + std::to_string(line_of_row[e.row()]),
                     e.row());
  } catch (const ValueError& e) {
    throw ValueError(std::string(e.what()) + " at line " + std::to_string(line_of_row[e.row()]),
                     e.row());
  }
}

DampingSpectrum parse_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_csv(in);
}

std::string export_csv(const DampingSpectrum& spec) {
  std::string out(kHeader);
  out += '\n';
  if (!spec.source_tag().empty()) {
    out += kSourcePrefix;
    out += ' ';
    out += spec.source_tag();
    out += '\n';
  }
  char buf[96];
  for (const DampingRow& r : spec.rows()) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e\n", r.freq_hz, r.b_ns_per_m, r.kd_n_per_m);
    out += buf;
  }
  return out;
}

std::vector<double> log_grid(double f_lo, double f_hi, std::size_t points) {
  if (points == 0) throw ConfigError("invalid frequency grid: zero points");
  if (!(f_lo > 0.0) || !std::isfinite(f_hi) || !(f_lo < f_hi || (points == 1 && f_lo == f_hi))) {
    throw ConfigError("invalid frequency grid");
  }
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = f_lo;
    return grid;
  }
  const double a = std::log(f_lo);
  const double step = (std::log(f_hi) - a) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = std::exp(a + step * static_cast<double>(i));
  grid.front() = f_lo;
  grid.back() = f_hi;
  return grid;
}

}  // namespace sqn
