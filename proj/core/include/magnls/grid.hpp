#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "magnls/common.hpp"

namespace magnls {

/// Uniform Cartesian grid on [-L, L]^N with n nodes per axis (n odd).
/// Axis 0 varies fastest in the flat node index.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, double L, int n);

  int dim() const { return dim_; }
  double L() const { return L_; }
  int n() const { return n_; }
  double h() const { return h_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  /// Cell volume h^N, the trapezoid weight of an interior node.
  double cell_volume() const { return cell_; }
  int center_index() const { return (n_ - 1) / 2; }

  double coord(int i) const { return -L_ + h_ * i; }
  int axis_index(std::size_t idx, int axis) const {
    return static_cast<int>((idx / strides_[static_cast<std::size_t>(axis)]) % static_cast<std::size_t>(n_));
  }
  void point(std::size_t idx, double* x) const;
  Point point(std::size_t idx) const;
  std::size_t index(const std::vector<int>& multi) const;
  bool on_boundary(std::size_t idx) const;

  /// Number of lines parallel to an axis and the flat index of line j's first node.
  std::size_t line_count() const { return size_ / static_cast<std::size_t>(n_); }
  std::size_t line_start(int axis, std::size_t line) const;

  /// Nearest node index of a coordinate, or -1 if outside [-L, L].
  int nearest(double x) const;

  bool operator==(const Grid& o) const { return dim_ == o.dim_ && n_ == o.n_ && L_ == o.L_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int dim_ = 0;
  double L_ = 0.0;
  int n_ = 0;
  double h_ = 0.0;
  double cell_ = 0.0;
  std::size_t size_ = 0;
  std::vector<std::size_t> strides_;
};

/// Node values on a grid.
template <typename T>
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const Grid& g, T fill = T{}) : grid_(g), values_(g.size(), fill) {}
  GridFunction(const Grid& g, std::vector<T> values) : grid_(g), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw ValidationError("field size does not match grid");
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }
  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }

 private:
  Grid grid_;
  std::vector<T> values_;
};

using ComplexField = GridFunction<cplx>;
using RealField = GridFunction<double>;

/// Samples f at every node.
ComplexField sample_complex(const Grid& g, const std::function<cplx(const double*)>& f);
RealField sample_real(const Grid& g, const std::function<double(const double*)>& f);

/// Sum of |u|^2 on the outermost node layer over the total.
double boundary_mass_fraction(const ComplexField& u);

/// Trapezoid integral of |u|^2 (all nodes weighted h^N; boundary values are
/// assumed negligible for compactly supported data).
double mass(const ComplexField& u);

/// Real L^2 inner product Re <a, b> with quadrature weights.
double real_inner(const ComplexField& a, const ComplexField& b);

void axpy(cplx alpha, const ComplexField& x, ComplexField& y);
void scale(ComplexField& x, cplx alpha);
ComplexField modulus(const ComplexField& u);

}  // namespace magnls
