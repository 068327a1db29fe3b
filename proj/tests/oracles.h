// Independent reference implementations used only by the tests. None of
// these share code with the library.

#ifndef GTVV_TESTS_ORACLES_H_
#define GTVV_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace gtvv::testing {

inline double Factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double Binomial(int n, int k) {
  return Factorial(n) / (Factorial(k) * Factorial(n - k));
}

// P_l^m(x) = (1 - x^2)^(m/2) d^m/dx^m P_l(x), no Condon-Shortley phase.
// P_l expanded explicitly in monomials and differentiated term by term.
inline double AssociatedLegendre(int l, int m, double x) {
  double deriv = 0.0;
  for (int k = 0; 2 * k <= l; ++k) {
    const int power = l - 2 * k;
    if (power < m) continue;
    const double c = ((k % 2) ? -1.0 : 1.0) * Binomial(l, k) * Binomial(2 * l - 2 * k, l) /
                     std::pow(2.0, l);
    deriv += c * Factorial(power) / Factorial(power - m) * std::pow(x, power - m);
  }
  return std::pow(1.0 - x * x, 0.5 * m) * deriv;
}

// Real SN3D harmonics in ACN order.
inline Eigen::VectorXd ShOracle(double az, double el, int order) {
  Eigen::VectorXd y((order + 1) * (order + 1));
  const double x = std::sin(el);
  for (int l = 0; l <= order; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int am = std::abs(m);
      const double norm =
          std::sqrt((m == 0 ? 1.0 : 2.0) * Factorial(l - am) / Factorial(l + am));
      const double trig = m >= 0 ? std::cos(am * az) : std::sin(am * az);
      y[l * l + l + m] = norm * AssociatedLegendre(l, am, x) * trig;
    }
  }
  return y;
}

inline Eigen::Vector3d CartesianOracle(double az, double el) {
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

inline double AngleOracle(double az1, double el1, double az2, double el2) {
  const double d = CartesianOracle(az1, el1).dot(CartesianOracle(az2, el2));
  return std::acos(std::clamp(d, -1.0, 1.0));
}

// Naive O(N^2) inverse DFT of a one-sided spectrum sampled on `m` points,
// returning x[n] for n in [first, first + count).
inline Eigen::MatrixXd DenseInverseDft(const Eigen::MatrixXcd& one_sided, int m,
                                       int first, int count) {
  const int channels = static_cast<int>(one_sided.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(channels, count);
  for (int c = 0; c < channels; ++c) {
    for (int i = 0; i < count; ++i) {
      const long n = first + i;
      double acc = one_sided(c, 0).real();
      for (int k = 1; k < m / 2; ++k) {
        const double ph = 2.0 * std::numbers::pi * k * n / m;
        acc += 2.0 * (one_sided(c, k) * std::complex<double>(std::cos(ph), std::sin(ph))).real();
      }
      acc += (one_sided(c, m / 2) * std::complex<double>(std::cos(std::numbers::pi * n), 0.0)).real();
      out(c, i) = acc / m;
    }
  }
  return out;
}

// Exhaustive greedy pursuit: every atom against every lag with plain loops,
// projection by column-pivoted QR.
struct PursuitOracleResult {
  std::vector<int> atoms;
  std::vector<int> lag_columns;
};

inline PursuitOracleResult PursuitOracle(const Eigen::MatrixXd& v, const Eigen::MatrixXd& atoms,
                                         int iterations, int first_lag_column) {
  PursuitOracleResult out;
  Eigen::MatrixXd residual = -v;
  for (int it = 0; it < iterations; ++it) {
    int best_atom = -1;
    double best = -1.0;
    for (int s = 0; s < atoms.cols(); ++s) {
      for (int q = 0; q < v.cols(); ++q) {
        double dot = 0.0;
        for (int c = 0; c < v.rows(); ++c) dot += atoms(c, s) * residual(c, q);
        if (std::abs(dot) > best) {
          best = std::abs(dot);
          best_atom = s;
        }
      }
    }
    int best_lag = -1;
    best = -1.0;
    for (int q = first_lag_column; q < v.cols(); ++q) {
      double dot = 0.0;
      for (int c = 0; c < v.rows(); ++c) dot += atoms(c, best_atom) * residual(c, q);
      if (std::abs(dot) > best) {
        best = std::abs(dot);
        best_lag = q;
      }
    }
    out.atoms.push_back(best_atom);
    out.lag_columns.push_back(best_lag);
    Eigen::MatrixXd y_sel(v.rows(), static_cast<int>(out.atoms.size()));
    for (int i = 0; i < y_sel.cols(); ++i) y_sel.col(i) = atoms.col(out.atoms[i]);
    const Eigen::MatrixXd z = y_sel.colPivHouseholderQr().solve(v);
    residual = y_sel * z - v;
  }
  return out;
}

// Largest normalized inner product between two atoms of a support.
inline double SupportCoherence(const Eigen::MatrixXd& atoms, const std::vector<int>& support) {
  double worst = 0.0;
  for (size_t a = 0; a < support.size(); ++a) {
    for (size_t b = a + 1; b < support.size(); ++b) {
      const auto ya = atoms.col(support[a]), yb = atoms.col(support[b]);
      worst = std::max(worst, std::abs(ya.dot(yb)) / (ya.norm() * yb.norm()));
    }
  }
  return worst;
}

// Maximum-cardinality one-to-one assignment under an angle gate, found by
// enumerating every partial injection. Returns the number of pairs.
inline int MaxGatedAssignment(const Eigen::MatrixXd& angle, double gate) {
  const int rows = static_cast<int>(angle.rows());
  const int cols = static_cast<int>(angle.cols());
  int best = 0;
  std::vector<bool> used(cols, false);
  auto recurse = [&](auto&& self, int r, int count) -> void {
    if (r == rows) {
      best = std::max(best, count);
      return;
    }
    self(self, r + 1, count);
    for (int c = 0; c < cols; ++c) {
      if (!used[c] && angle(r, c) <= gate) {
        used[c] = true;
        self(self, r + 1, count + 1);
        used[c] = false;
      }
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

// Hand-rolled generators.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double Uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int Int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double Normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  // Uniform on the sphere: (azimuth, elevation).
  std::pair<double, double> SphereAngles() {
    const double z = Uniform(-1.0, 1.0);
    return {Uniform(-std::numbers::pi, std::numbers::pi), std::asin(z)};
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gtvv::testing

#endif  // GTVV_TESTS_ORACLES_H_
