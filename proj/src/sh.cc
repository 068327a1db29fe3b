#include "gtvv/sh.h"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gtvv/errors.h"

namespace gtvv {

namespace {

constexpr double kPi = std::numbers::pi;

double WrapAzimuth(double az) {
  double wrapped = std::remainder(az, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

double Factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Direction::Direction(double azimuth, double elevation) {
  if (!std::isfinite(azimuth) || !std::isfinite(elevation)) {
    throw InvalidArgument("direction angles must be finite");
  }
  if (elevation >= -kPi / 2 && elevation <= kPi / 2) {
    azimuth_ = WrapAzimuth(azimuth);
    elevation_ = elevation;
    return;
  }
  // Elevation past a pole: fold through the Cartesian form.
  const Eigen::Vector3d v(std::cos(elevation) * std::cos(azimuth),
                          std::cos(elevation) * std::sin(azimuth),
                          std::sin(elevation));
  *this = FromVector(v);
}

Direction Direction::FromDegrees(double azimuth_deg, double elevation_deg) {
  return Direction(azimuth_deg * kPi / 180.0, elevation_deg * kPi / 180.0);
}

Direction Direction::FromVector(const Eigen::Vector3d& v) {
  const double horizontal = std::hypot(v.x(), v.y());
  if (horizontal == 0.0 && v.z() == 0.0) {
    throw InvalidArgument("cannot take the direction of a zero vector");
  }
  Direction d;
  d.azimuth_ = WrapAzimuth(std::atan2(v.y(), v.x()));
  d.elevation_ = std::atan2(v.z(), horizontal);
  return d;
}

double Direction::azimuth_deg() const { return azimuth_ * 180.0 / kPi; }
double Direction::elevation_deg() const { return elevation_ * 180.0 / kPi; }

Eigen::Vector3d Direction::UnitVector() const {
  const double ce = std::cos(elevation_);
  return {ce * std::cos(azimuth_), ce * std::sin(azimuth_),
          std::sin(elevation_)};
}

double AngularDistance(const Direction& a, const Direction& b) {
  const Eigen::Vector3d ua = a.UnitVector();
  const Eigen::Vector3d ub = b.UnitVector();
  // atan2 form keeps precision near 0 and pi where acos does not.
  return std::atan2(ua.cross(ub).norm(), ua.dot(ub));
}

ShVector ShEval(const Direction& dir, int order) {
  if (order < 0 || order > kMaxShOrder) {
    throw InvalidArgument("SH order must be in [0, " +
                          std::to_string(kMaxShOrder) + "], got " +
                          std::to_string(order));
  }
  const double x = std::sin(dir.elevation());
  const double s = std::cos(dir.elevation());  // sqrt(1 - x^2), >= 0

  // Associated Legendre functions without the Condon-Shortley phase.
  std::array<std::array<double, kMaxShOrder + 1>, kMaxShOrder + 1> p{};
  double pmm = 1.0;
  for (int m = 0; m <= order; ++m) {
    if (m > 0) pmm *= (2.0 * m - 1.0) * s;
    p[m][m] = pmm;
    if (m + 1 <= order) p[m + 1][m] = x * (2.0 * m + 1.0) * pmm;
    for (int l = m + 2; l <= order; ++l) {
      p[l][m] = ((2.0 * l - 1.0) * x * p[l - 1][m] -
                 (l + m - 1.0) * p[l - 2][m]) /
                (l - m);
    }
  }

  ShVector out;
  out.order = order;
  out.coeffs.resize(NumChannels(order));
  for (int l = 0; l <= order; ++l) {
    out.coeffs[AcnIndex(l, 0)] = p[l][0];
    for (int m = 1; m <= l; ++m) {
      const double norm =
          std::sqrt(2.0 * Factorial(l - m) / Factorial(l + m)) * p[l][m];
      out.coeffs[AcnIndex(l, m)] = norm * std::cos(m * dir.azimuth());
      out.coeffs[AcnIndex(l, -m)] = norm * std::sin(m * dir.azimuth());
    }
  }
  return out;
}

double BeamWeights::Gain(const Direction& dir) const {
  return weights.dot(ShEval(dir, order).coeffs);
}

BeamWeights MakeReferenceBeam(const Direction& dir, int order) {
  const ShVector y = ShEval(dir, order);
  return {order, y.coeffs / y.coeffs.squaredNorm()};
}

BeamWeights MakeOmniBeam(int order) {
  if (order < 0 || order > kMaxShOrder) {
    throw InvalidArgument("SH order out of range");
  }
  BeamWeights w{order, Eigen::VectorXd::Zero(NumChannels(order))};
  w.weights[0] = 1.0;
  return w;
}

}  // namespace gtvv
