#ifndef GTVV_SH_H_
#define GTVV_SH_H_

#include <Eigen/Dense>

namespace gtvv {

inline constexpr int kMaxShOrder = 8;

inline constexpr int NumChannels(int order) { return (order + 1) * (order + 1); }

// ACN channel index of the harmonic of order l and degree m.
inline constexpr int AcnIndex(int l, int m) { return l * l + l + m; }

// Point on the unit sphere. Azimuth is counter-clockwise from +x in
// (-pi, pi], elevation is up from the horizontal plane in [-pi/2, pi/2].
// Out-of-range inputs are folded onto the canonical ranges.
class Direction {
 public:
  Direction() = default;
  Direction(double azimuth, double elevation);

  static Direction FromDegrees(double azimuth_deg, double elevation_deg);
  // `v` need not be normalized but must be non-zero.
  static Direction FromVector(const Eigen::Vector3d& v);

  double azimuth() const { return azimuth_; }
  double elevation() const { return elevation_; }
  double azimuth_deg() const;
  double elevation_deg() const;

  Eigen::Vector3d UnitVector() const;

  bool operator==(const Direction&) const = default;

 private:
  double azimuth_ = 0.0;
  double elevation_ = 0.0;
};

// Great-circle distance in radians.
double AngularDistance(const Direction& a, const Direction& b);

// Real spherical-harmonic coefficients, SN3D normalization, ACN ordering.
struct ShVector {
  int order = 0;
  Eigen::VectorXd coeffs;
};

// Evaluates all real SN3D harmonics up to `order` (0..kMaxShOrder).
// Throws InvalidArgument for orders outside that range.
ShVector ShEval(const Direction& dir, int order);

// Frequency-independent spatial filter applied as w^T b.
struct BeamWeights {
  int order = 0;
  Eigen::VectorXd weights;

  // w^T y for a unit-amplitude wave from `dir`.
  double Gain(const Direction& dir) const;
};

// Maximum-directivity beam steered at `dir`, scaled so that its gain toward
// `dir` is exactly one: w = y / (y^T y).
BeamWeights MakeReferenceBeam(const Direction& dir, int order);

// Omnidirectional reference w = [1, 0, ..., 0].
BeamWeights MakeOmniBeam(int order);

}  // namespace gtvv

#endif  // GTVV_SH_H_
