#include "magnls/grid.hpp"

#include <cmath>
#include <string>

namespace magnls {

Grid::Grid(int dim, double L, int n) : dim_(dim), L_(L), n_(n) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("grid dimension must be in [1, 8]");
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("grid half-width L must be positive");
  if (n < 3 || n % 2 == 0) throw ValidationError("grid needs an odd node count n >= 3, got " + std::to_string(n));
  h_ = 2.0 * L / (n - 1);
  size_ = 1;
  strides_.resize(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    strides_[static_cast<std::size_t>(a)] = size_;
    size_ *= static_cast<std::size_t>(n);
  }
  cell_ = std::pow(h_, dim);
}

void Grid::point(std::size_t idx, double* x) const {
  for (int a = 0; a < dim_; ++a) {
    x[a] = coord(static_cast<int>(idx % static_cast<std::size_t>(n_)));
    idx /= static_cast<std::size_t>(n_);
  }
}

Point Grid::point(std::size_t idx) const {
  Point x(static_cast<std::size_t>(dim_));
  point(idx, x.data());
  return x;
}

std::size_t Grid::index(const std::vector<int>& multi) const {
  std::size_t idx = 0;
  for (int a = dim_ - 1; a >= 0; --a) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(multi[static_cast<std::size_t>(a)]);
  return idx;
}

bool Grid::on_boundary(std::size_t idx) const {
  for (int a = 0; a < dim_; ++a) {
    int i = axis_index(idx, a);
    if (i == 0 || i == n_ - 1) return true;
  }
  return false;
}

std::size_t Grid::line_start(int axis, std::size_t line) const {
  std::size_t s = strides_[static_cast<std::size_t>(axis)];
  std::size_t low = line % s;
  std::size_t high = line / s;
  return low + high * s * static_cast<std::size_t>(n_);
}

int Grid::nearest(double x) const {
  double t = (x + L_) / h_;
  long i = std::lround(t);
  if (i < 0 || i >= n_) return -1;
  return static_cast<int>(i);
}

ComplexField sample_complex(const Grid& g, const std::function<cplx(const double*)>& f) {
  ComplexField u(g);
  parallel_for(g.size(), [&](std::size_t i) {
    double x[kMaxDim];
    g.point(i, x);
    u[i] = f(x);
  });
  return u;
}

RealField sample_real(const Grid& g, const std::function<double(const double*)>& f) {
  RealField u(g);
  parallel_for(g.size(), [&](std::size_t i) {
    double x[kMaxDim];
    g.point(i, x);
    u[i] = f(x);
  });
  return u;
}

double boundary_mass_fraction(const ComplexField& u) {
  const Grid& g = u.grid();
  double total = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double m = std::norm(u[i]);
    total += m;
    if (g.on_boundary(i)) edge += m;
  }
  return total > 0.0 ? edge / total : 0.0;
}

double mass(const ComplexField& u) {
  double s = 0.0;
  for (const auto& v : u.values()) s += std::norm(v);
  return s * u.grid().cell_volume();
}

double real_inner(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s * a.grid().cell_volume();
}

void axpy(cplx alpha, const ComplexField& x, ComplexField& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(ComplexField& x, cplx alpha) {
  for (auto& v : x.values()) v *= alpha;
}

ComplexField modulus(const ComplexField& u) {
  ComplexField m(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) m[i] = std::abs(u[i]);
  return m;
}

}  // namespace magnls
