#ifndef GTVV_DICTIONARY_H_
#define GTVV_DICTIONARY_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtvv/sh.h"

namespace gtvv {

enum class GridScheme { kFibonacci, kFile };

// Minimum admissible great-circle separation between two atoms.
inline constexpr double kMinAtomSeparationRad = 0.1 * 3.14159265358979323846 / 180.0;

// Immutable set of sampled directions together with their SH atoms
// (one column per direction). Safe to share across threads.
class Dictionary {
 public:
  // Throws InvalidArgument if two directions are closer than
  // kMinAtomSeparationRad or the list is empty.
  Dictionary(std::vector<Direction> directions, int order);

  int order() const { return order_; }
  int size() const { return static_cast<int>(directions_.size()); }
  int channels() const { return static_cast<int>(atoms_.rows()); }
  const std::vector<Direction>& directions() const { return directions_; }
  const Eigen::MatrixXd& atoms() const { return atoms_; }

  // Index of the atom with the smallest angular distance to `dir`
  // (lowest index on ties).
  int Nearest(const Direction& dir) const;

 private:
  int order_;
  std::vector<Direction> directions_;
  Eigen::MatrixXd atoms_;
};

// Fibonacci spiral with z_i = 1 - (2i+1)/count.
std::vector<Direction> FibonacciDirections(int count);

// Parses a direction-list file: one "azimuth_rad elevation_rad" pair per
// line, blank lines and '#' comments ignored. Throws ConfigError.
std::vector<Direction> ReadDirectionFile(const std::string& path);

// kFibonacci: `count` spiral directions; count must be >= (order+1)^2.
// kFile: directions from `path`; `count` is ignored when <= 0 and must
// match the number of rows otherwise.
Dictionary BuildDictionary(int count, int order, GridScheme scheme,
                           const std::string& path = {});

}  // namespace gtvv

#endif  // GTVV_DICTIONARY_H_
