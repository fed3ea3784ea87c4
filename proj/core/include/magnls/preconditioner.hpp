#pragma once

#include <memory>

#include "magnls/grid.hpp"

namespace magnls {

/// Exact inverse of (D^*D + shift) for the field-free staggered operator on
/// the grid, applied by separable eigendecomposition of the 1D operator.
class FreeResolvent {
 public:
  FreeResolvent(const Grid& g, double shift);
  ~FreeResolvent();
  FreeResolvent(const FreeResolvent&);
  FreeResolvent& operator=(const FreeResolvent&);

  ComplexField apply(const ComplexField& u) const;
  double shift() const;
  /// Smallest and largest eigenvalue of the 1D operator.
  double min_eigenvalue() const;
  double max_eigenvalue() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace magnls
