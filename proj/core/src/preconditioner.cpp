#include "magnls/preconditioner.hpp"

#include <Eigen/Dense>

namespace magnls {

struct FreeResolvent::Impl {
  Grid grid;
  double shift = 0.0;
  Eigen::MatrixXd Q;   // columns are eigenvectors
  Eigen::MatrixXd Qt;
  Eigen::VectorXd eig;
  std::vector<double> denom;

  void transform(std::vector<double>& data, const Eigen::MatrixXd& M, std::vector<double>& tmp) const {
    const int n = grid.n();
    const Eigen::Index ni = n;
    for (int a = 0; a < grid.dim(); ++a) {
      const std::size_t inner = grid.stride(a);
      const std::size_t outer = grid.size() / (inner * static_cast<std::size_t>(n));
      if (inner == 1) {
        Eigen::Map<Eigen::MatrixXd> Z(data.data(), ni, static_cast<Eigen::Index>(outer));
        Eigen::Map<Eigen::MatrixXd> T(tmp.data(), ni, static_cast<Eigen::Index>(outer));
        T.noalias() = M * Z;
        Z = T;
      } else {
        const auto ii = static_cast<Eigen::Index>(inner);
        for (std::size_t o = 0; o < outer; ++o) {
          std::size_t off = o * inner * static_cast<std::size_t>(n);
          Eigen::Map<Eigen::MatrixXd> Y(data.data() + off, ii, ni);
          Eigen::Map<Eigen::MatrixXd> T(tmp.data() + off, ii, ni);
          T.noalias() = Y * M.transpose();
          Y = T;
        }
      }
    }
  }
};

FreeResolvent::FreeResolvent(const Grid& g, double shift) : impl_(std::make_unique<Impl>()) {
  impl_->grid = g;
  impl_->shift = shift;
  const int n = g.n();
  const double c[4] = {1460.0, -783.0, 54.0, -1.0};
  const double s = 1.0 / (576.0 * g.h() * g.h());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int d = std::abs(i - j);
      if (d < 4) T(i, j) = c[d] * s;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  impl_->Q = es.eigenvectors();
  impl_->Qt = impl_->Q.transpose();
  impl_->eig = es.eigenvalues();
  const int N = g.dim();
  impl_->denom.assign(g.size(), shift);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    double v = shift;
    for (int a = 0; a < N; ++a) v += impl_->eig(g.axis_index(idx, a));
    if (!(v > 0.0)) throw ValidationError("resolvent shift leaves the operator singular");
    impl_->denom[idx] = 1.0 / v;
  }
}

FreeResolvent::~FreeResolvent() = default;

FreeResolvent::FreeResolvent(const FreeResolvent& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}

FreeResolvent& FreeResolvent::operator=(const FreeResolvent& o) {
  if (this != &o) impl_ = std::make_unique<Impl>(*o.impl_);
  return *this;
}

ComplexField FreeResolvent::apply(const ComplexField& u) const {
  const Grid& g = impl_->grid;
  if (u.grid() != g) throw ValidationError("resolvent built for another grid");
  std::vector<double> re(g.size()), im(g.size()), tmp(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    re[i] = u[i].real();
    im[i] = u[i].imag();
  }
  impl_->transform(re, impl_->Qt, tmp);
  impl_->transform(im, impl_->Qt, tmp);
  for (std::size_t i = 0; i < g.size(); ++i) {
    re[i] *= impl_->denom[i];
    im[i] *= impl_->denom[i];
  }
  impl_->transform(re, impl_->Q, tmp);
  impl_->transform(im, impl_->Q, tmp);
  ComplexField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = cplx(re[i], im[i]);
  return out;
}

double FreeResolvent::shift() const { return impl_->shift; }
double FreeResolvent::min_eigenvalue() const { return impl_->eig.minCoeff(); }
double FreeResolvent::max_eigenvalue() const { return impl_->eig.maxCoeff(); }

}  // namespace magnls
