#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnls {

using cplx = std::complex<double>;
using Point = std::vector<double>;

/// Upper bound on the spatial dimension (fixed-size scratch buffers).
inline constexpr int kMaxDim = 8;

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, malformed specs, non-lattice shifts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation ran but failed to meet its contract.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach tolerance on [a, b].
class QuadratureError : public NumericalError {
 public:
  QuadratureError(double a, double b, double estimate);
  double a() const { return a_; }
  double b() const { return b_; }
  double estimate() const { return estimate_; }

 private:
  double a_, b_, estimate_;
};

/// A shift moved more than the allowed fraction of mass out of the window.
class MassLossError : public NumericalError {
 public:
  MassLossError(double fraction, double limit);
  double fraction() const { return fraction_; }

 private:
  double fraction_;
};

/// Worker count: MAGNLS_THREADS if set, otherwise hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks;
/// each index is processed exactly once, so results written per index are
/// independent of the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Sums partials in index order (deterministic reduction).
double ordered_sum(const std::vector<double>& partials);

/// Collects non-fatal warnings emitted by the compute modules.
namespace diagnostics {
void warn(const std::string& message);
std::vector<std::string> drain();
}  // namespace diagnostics

}  // namespace magnls
