#pragma once

#include <vector>

#include "magnls/field.hpp"
#include "magnls/grid.hpp"

namespace magnls {

/// Discrete connection of a potential on a grid.
///
/// For each axis a the link integral of A_a over every grid edge is computed
/// by Gauss-Legendre quadrature and accumulated along grid lines into a
/// phase Theta_a (zero at the first node of the line). Covariant differences
/// along axis a act on exp(i Theta_a) u, which makes every operator built on
/// top of this class exactly gauge covariant on the grid.
class ParallelTransport {
 public:
  ParallelTransport() = default;
  ParallelTransport(const PotentialField& A, const Grid& g);
  /// Connection with all link integrals zero.
  static ParallelTransport trivial(const Grid& g);
  /// Connection from precomputed link integrals, links[a][idx] = int of A_a
  /// from node idx to idx + stride(a) (last node of each line ignored).
  static ParallelTransport from_links(const Grid& g, std::vector<std::vector<double>> links);

  const Grid& grid() const { return grid_; }
  bool is_trivial() const { return trivial_; }
  /// exp(i Theta_a) per node; empty when trivial.
  const std::vector<cplx>& factor(int axis) const { return factors_[static_cast<std::size_t>(axis)]; }
  const std::vector<double>& link(int axis) const { return links_[static_cast<std::size_t>(axis)]; }

 private:
  void accumulate();

  Grid grid_;
  bool trivial_ = true;
  std::vector<std::vector<double>> links_;
  std::vector<std::vector<cplx>> factors_;
};

}  // namespace magnls
