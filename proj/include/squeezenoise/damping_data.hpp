#pragma once

#include <atomic>
#include <cstddef>
#include <istream>
#include <memory>
#include <string>
#include <vector>

namespace sqn {

struct DampingRow {
  double freq_hz = 0.0;
  double b_ns_per_m = 0.0;
  double kd_n_per_m = 0.0;

  friend bool operator==(const DampingRow&, const DampingRow&) = default;
};

/// Sampled b(f), k_d(f) table. Immutable once constructed: the constructor
/// validates ordering and ranges and throws OrderError / ValueError carrying
/// the offending row index.
class DampingSpectrum {
 public:
  DampingSpectrum(std::vector<DampingRow> rows, std::string source_tag);

  const std::vector<DampingRow>& rows() const { return rows_; }
  const std::string& source_tag() const { return source_tag_; }
  std::size_t size() const { return rows_.size(); }
  double f_min() const { return rows_.front().freq_hz; }
  double f_max() const { return rows_.back().freq_hz; }

  friend bool operator==(const DampingSpectrum&, const DampingSpectrum&) = default;

 private:
  std::vector<DampingRow> rows_;
  std::string source_tag_;
};

struct DampingPoint {
  double b = 0.0;
  double kd = 0.0;
};

/// Shape-preserving (monotone Hermite) interpolation of a DampingSpectrum:
/// log b and linear k_d, both against log f. Exact at the knots, never
/// evaluated outside [f_min, f_max].
class DampingInterpolant {
 public:
  static constexpr std::size_t kMinRows = 4;

  explicit DampingInterpolant(const DampingSpectrum& spec);

  /// Throws DomainError outside the table range.
  DampingPoint evaluate(double freq_hz) const;
  DampingPoint operator()(double freq_hz) const { return evaluate(freq_hz); }

  double f_min() const { return knots_.front().freq_hz; }
  double f_max() const { return knots_.back().freq_hz; }
  bool contains(double freq_hz) const { return freq_hz >= f_min() && freq_hz <= f_max(); }

  /// Number of evaluations where the k_d interpolant dipped below zero and
  /// was clamped.
  std::size_t clamp_count() const { return clamps_->load(); }

 private:
  struct Curves;
  std::vector<DampingRow> knots_;
  std::shared_ptr<const Curves> curves_;
  std::shared_ptr<std::atomic<std::size_t>> clamps_;
};

/// Reads the `freq_hz,b_ns_per_m,kd_n_per_m` CSV format. A `# source: <tag>`
/// comment sets the source tag; other `#` lines are ignored.
DampingSpectrum parse_csv(std::istream& in);
DampingSpectrum parse_csv_file(const std::string& path);

/// Inverse of parse_csv; 17 significant digits so every double round-trips.
std::string export_csv(const DampingSpectrum& spec);

/// Log-spaced grid of `points` frequencies from f_lo to f_hi inclusive.
std::vector<double> log_grid(double f_lo, double f_hi, std::size_t points);

}  // namespace sqn
