#include "gtvv/dictionary.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gtvv/errors.h"

namespace gtvv {

Dictionary::Dictionary(std::vector<Direction> directions, int order)
    : order_(order), directions_(std::move(directions)) {
  if (directions_.empty()) throw InvalidArgument("empty dictionary");
  const int n = size();
  std::vector<Eigen::Vector3d> units(n);
  for (int i = 0; i < n; ++i) units[i] = directions_[i].UnitVector();
  const double min_cos = std::cos(kMinAtomSeparationRad);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (units[i].dot(units[j]) > min_cos) {
        throw InvalidArgument("dictionary directions " + std::to_string(i) +
                              " and " + std::to_string(j) +
                              " are closer than 0.1 degrees");
      }
    }
  }
  atoms_.resize(NumChannels(order), n);
  for (int j = 0; j < n; ++j) atoms_.col(j) = ShEval(directions_[j], order).coeffs;
}

int Dictionary::Nearest(const Direction& dir) const {
  const Eigen::Vector3d u = dir.UnitVector();
  int best = 0;
  double best_dot = -2.0;
  for (int j = 0; j < size(); ++j) {
    const double d = directions_[j].UnitVector().dot(u);
    if (d > best_dot) {
      best_dot = d;
      best = j;
    }
  }
  return best;
}

std::vector<Direction> FibonacciDirections(int count) {
  if (count <= 0) throw InvalidArgument("direction count must be positive");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Direction> dirs;
  dirs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    dirs.emplace_back(golden_angle * i, std::asin(z));
  }
  return dirs;
}

std::vector<Direction> ReadDirectionFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open direction file: " + path);
  std::vector<Direction> dirs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    double az, el;
    if (!(fields >> az)) continue;  // blank or comment-only
    std::string rest;
    if (!(fields >> el) || (fields >> rest) || !std::isfinite(az) ||
        !std::isfinite(el)) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 'azimuth_rad elevation_rad'");
    }
    dirs.emplace_back(az, el);
  }
  if (dirs.empty()) throw ConfigError("no directions in " + path);
  return dirs;
}

Dictionary BuildDictionary(int count, int order, GridScheme scheme,
                           const std::string& path) {
  if (order < 0 || order > kMaxShOrder) {
    throw InvalidArgument("SH order out of range");
  }
  if (scheme == GridScheme::kFile) {
    std::vector<Direction> dirs = ReadDirectionFile(path);
    if (count > 0 && count != static_cast<int>(dirs.size())) {
      throw ConfigError(path + " holds " + std::to_string(dirs.size()) +
                        " directions, expected " + std::to_string(count));
    }
    return Dictionary(std::move(dirs), order);
  }
  if (count < NumChannels(order)) {
    throw InvalidArgument("dictionary size " + std::to_string(count) +
                          " is below the channel count " +
                          std::to_string(NumChannels(order)));
  }
  return Dictionary(FibonacciDirections(count), order);
}

}  // namespace gtvv
