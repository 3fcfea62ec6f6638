#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ductmodes {

using cplx = std::complex<double>;

inline constexpr cplx kJ{0.0, 1.0};

enum class ErrorCode {
  RangeExceeded,
  Pole,
  DegenerateArguments,
  CompletenessFailure,
  StepCollapse,
  NoConvergence,
  TripleRoot,
  OutOfDisk,
  TrackingFailure,
  IllConditioned,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries a code so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures of an iterative numerical method, as opposed to bad
  /// input.
  bool is_convergence_failure() const noexcept;

 private:
  ErrorCode code_;
};

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Dense row-major complex matrix.
struct CMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> data;

  CMatrix() = default;
  CMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

  cplx& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  cplx operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// Worker threads used by the parallel parts of the library (sweeps, power
/// profiles). Defaults to DUCTMODES_THREADS when set, otherwise the hardware
/// concurrency.
int worker_threads();
/// Overrides the worker count; n <= 0 restores the default.
void set_worker_threads(int n);

}  // namespace ductmodes
