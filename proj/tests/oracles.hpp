#pragma once

// Test-only reference computations. Each one is written from the defining
// formula with no calls into the library code it is used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr long double kPi = std::numbers::pi_v<long double>;

struct SeriesPair {
  long double damping = 0.0L;
  long double elastic = 0.0L;
};

// Plain double sum over odd m, n <= m_max and odd n <= n_max, long double
// accumulation.
inline SeriesPair squeeze_series(double sigma, double beta, int m_max, int n_max) {
  SeriesPair s;
  const long double s2 = static_cast<long double>(sigma) * sigma / (kPi * kPi * kPi * kPi);
  for (int m = 1; m <= m_max; m += 2) {
    for (int n = 1; n <= n_max; n += 2) {
      const long double x = static_cast<long double>(m) * m +
                            (static_cast<long double>(n) / beta) * (static_cast<long double>(n) / beta);
      const long double mn2 = static_cast<long double>(m) * m * n * n;
      s.damping += x / (mn2 * (x * x + s2));
      s.elastic += 1.0L / (mn2 * (x * x + s2));
    }
  }
  return s;
}

inline SeriesPair squeeze_series(double sigma, double beta, int max_index) {
  return squeeze_series(sigma, beta, max_index, max_index);
}

// Bisection for a sign change of f on [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Short-circuit port noise of a series chain of (r_k || l_k) stages by nodal
// analysis: the port node is grounded, each resistor's thermal current source
// is injected across its own stage, and the current in the port short is
// solved for. Returns per-resistor PSD contributions.
inline std::vector<double> nodal_port_noise(const std::vector<double>& r, const std::vector<double>& l,
                                            double temperature_k, double omega) {
  using cd = std::complex<double>;
  constexpr double kB = 1.380649e-23;
  const int n = static_cast<int>(r.size());
  // Nodes: 0 = port (grounded through the short), 1..n-1 internal, n = ground.
  // Unknowns are the internal node voltages 1..n-1.
  std::vector<cd> y(n);
  for (int k = 0; k < n; ++k) y[k] = 1.0 / r[k] + 1.0 / cd(0.0, omega * l[k]);
  std::vector<double> out;
  for (int src = 0; src < n; ++src) {
    const double i_rms = std::sqrt(4.0 * kB * temperature_k / r[src]);
    // Stage k joins node k and node k+1.
    const int unknowns = n - 1;
    cd short_current;
    if (unknowns == 0) {
      // Single stage straight across the short: all source current flows in it.
      short_current = i_rms;
    } else {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(unknowns, unknowns);
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(unknowns);
      for (int k = 0; k < n; ++k) {
        const int a = k;      // node index
        const int b = k + 1;  // node index
        auto idx = [&](int node) { return node >= 1 && node <= n - 1 ? node - 1 : -1; };
        const int ia = idx(a);
        const int ib = idx(b);
        if (ia >= 0) g(ia, ia) += y[k];
        if (ib >= 0) g(ib, ib) += y[k];
        if (ia >= 0 && ib >= 0) {
          g(ia, ib) -= y[k];
          g(ib, ia) -= y[k];
        }
      }
      // Source pushes current from node src into node src+1 through the stage.
      const int ia = src >= 1 ? src - 1 : -1;
      const int ib = src + 1 <= n - 1 ? src : -1;
      if (ia >= 0) rhs(ia) -= i_rms;
      if (ib >= 0) rhs(ib) += i_rms;
      const Eigen::VectorXcd v = g.lu().solve(rhs);
      // Current leaving port node 0 through stage 0 into node 1, plus the
      // source current when the source sits in stage 0.
      const cd v1 = n > 1 ? v(0) : cd(0.0);
      short_current = (cd(0.0) - v1) * y[0];
      if (src == 0) short_current += i_rms;
    }
    out.push_back(std::norm(short_current));
  }
  return out;
}

}  // namespace oracle
