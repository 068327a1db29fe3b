#ifndef GTVV_ERRORS_H_
#define GTVV_ERRORS_H_

#include <stdexcept>
#include <string>

namespace gtvv {

// Bad input to a library call (ranges, geometry, shapes).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unreadable or inconsistent experiment configuration / input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base for failures that come out of the numerics rather than the inputs.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SilentFrameError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InconsistentSpectrumError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ExpansionInvalidError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The per-bin least-squares system has collinear columns; `bin` is the most
// energetic offending frequency bin.
class EstimatorDegenerateError : public NumericalError {
 public:
  EstimatorDegenerateError(int bin, int num_bins_affected)
      : NumericalError("estimator degenerate at bin " + std::to_string(bin) +
                       " (" + std::to_string(num_bins_affected) +
                       " bins affected): source too stationary"),
        bin_(bin) {}
  int bin() const { return bin_; }

 private:
  int bin_;
};

}  // namespace gtvv

#endif  // GTVV_ERRORS_H_
