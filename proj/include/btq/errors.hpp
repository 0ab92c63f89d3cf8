#ifndef BTQ_ERRORS_HPP
#define BTQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace btq {

// Bad configuration or precondition violation (CLI exit code 1).
struct config_error : std::invalid_argument {
  explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A quadrature grid cannot integrate the requested integrand exactly.
struct exactness_error : std::runtime_error {
  explicit exactness_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Spectrum of an approximate idempotent has no usable gap at 1/2;
// signals that the level N is too small for the lift.
struct spectral_gap_error : std::runtime_error {
  double gap;
  explicit spectral_gap_error(const std::string& msg, double g)
      : std::runtime_error(msg), gap(g) {}
};

}  // namespace btq

#endif
