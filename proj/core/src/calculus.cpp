#include "magnls/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace magnls {

void FunctionalParams::validate(int dim) const {
  double pc = critical_exponent(dim);
  if (!(p > 2.0) || !(p < pc) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "exponent p=" << p << " outside the admissible interval (2, " << pc << ")";
    throw ValidationError(os.str());
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
  if (V) {
    if (V->grid().dim() != dim) throw ValidationError("potential V lives on a grid of another dimension");
    for (double v : V->values())
      if (!std::isfinite(v)) throw ValidationError("potential V is not bounded");
  }
}

double FunctionalParams::critical_exponent(int dim) {
  if (dim <= 2) return std::numeric_limits<double>::infinity();
  return 2.0 * dim / (dim - 2.0);
}

namespace {

void check_grid(const ComplexField& u, const ParallelTransport& T) {
  if (u.grid() != T.grid()) throw ValidationError("field and connection live on different grids");
}

void warn_boundary(const ComplexField& u) {
  double f = boundary_mass_fraction(u);
  if (f > kBoundaryMassWarn) {
    std::ostringstream os;
    os << "boundary mass fraction " << f << " exceeds " << kBoundaryMassWarn << "; energies are untrustworthy";
    diagnostics::warn(os.str());
  }
}

// Loads exp(i Theta) u along one line into buf[3 .. n+2], zero padding around.
inline void load_line(const ComplexField& u, const std::vector<cplx>* f, std::size_t start, std::size_t s, int n,
                      std::vector<cplx>& buf) {
  std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
  for (int j = 0; j < n; ++j) {
    std::size_t idx = start + static_cast<std::size_t>(j) * s;
    buf[static_cast<std::size_t>(j + 3)] = f ? (*f)[idx] * u[idx] : u[idx];
  }
}

// Midpoint differences d[m+2], m = -2..n, from the padded buffer.
inline void staggered(const std::vector<cplx>& buf, int n, double inv, std::vector<cplx>& d) {
  for (int m = -2; m <= n; ++m) {
    std::size_t b = static_cast<std::size_t>(m + 3);
    d[static_cast<std::size_t>(m + 2)] =
        (kStagger[0] * buf[b - 1] + kStagger[1] * buf[b] + kStagger[2] * buf[b + 1] + kStagger[3] * buf[b + 2]) * inv;
  }
}

}  // namespace

std::vector<ComplexField> covariant_gradient(const ComplexField& u, const ParallelTransport& T) {
  check_grid(u, T);
  const Grid& g = u.grid();
  const int N = g.dim(), n = g.n();
  const double inv = 1.0 / (2.0 * g.h());
  std::vector<ComplexField> grad(static_cast<std::size_t>(N), ComplexField(g));
  for (int a = 0; a < N; ++a) {
    const std::vector<cplx>* f = T.is_trivial() ? nullptr : &T.factor(a);
    const std::size_t s = g.stride(a);
    auto& out = grad[static_cast<std::size_t>(a)];
    parallel_for(g.line_count(), [&](std::size_t line) {
      std::vector<cplx> buf(static_cast<std::size_t>(n + 6));
      std::size_t start = g.line_start(a, line);
      load_line(u, f, start, s, n, buf);
      for (int j = 0; j < n; ++j) {
        std::size_t idx = start + static_cast<std::size_t>(j) * s;
        cplx v = (buf[static_cast<std::size_t>(j + 4)] - buf[static_cast<std::size_t>(j + 2)]) * inv;
        out[idx] = f ? std::conj((*f)[idx]) * v : v;
      }
    });
  }
  return grad;
}

std::vector<ComplexField> covariant_gradient(const ComplexField& u, const PotentialField& A) {
  return covariant_gradient(u, ParallelTransport(A, u.grid()));
}

double energy_EA(const ComplexField& u, const ParallelTransport& T) {
  check_grid(u, T);
  const Grid& g = u.grid();
  const int N = g.dim(), n = g.n();
  const double inv = 1.0 / (24.0 * g.h());
  const std::size_t lines = g.line_count();
  std::vector<double> partial(lines * static_cast<std::size_t>(N), 0.0);
  for (int a = 0; a < N; ++a) {
    const std::vector<cplx>* f = T.is_trivial() ? nullptr : &T.factor(a);
    const std::size_t s = g.stride(a);
    parallel_for(lines, [&](std::size_t line) {
      std::vector<cplx> buf(static_cast<std::size_t>(n + 6)), d(static_cast<std::size_t>(n + 3));
      load_line(u, f, g.line_start(a, line), s, n, buf);
      staggered(buf, n, inv, d);
      double acc = 0.0;
      for (const auto& v : d) acc += std::norm(v);
      partial[static_cast<std::size_t>(a) * lines + line] = acc;
    });
  }
  return ordered_sum(partial) * g.cell_volume();
}

double energy_EA(const ComplexField& u, const PotentialField& A) {
  warn_boundary(u);
  return energy_EA(u, ParallelTransport(A, u.grid()));
}

ComplexField kinetic(const ComplexField& u, const ParallelTransport& T) {
  check_grid(u, T);
  const Grid& g = u.grid();
  const int N = g.dim(), n = g.n();
  const double inv = 1.0 / (24.0 * g.h());
  ComplexField out(g);
  for (int a = 0; a < N; ++a) {
    const std::vector<cplx>* f = T.is_trivial() ? nullptr : &T.factor(a);
    const std::size_t s = g.stride(a);
    parallel_for(g.line_count(), [&](std::size_t line) {
      std::vector<cplx> buf(static_cast<std::size_t>(n + 6)), d(static_cast<std::size_t>(n + 3));
      std::size_t start = g.line_start(a, line);
      load_line(u, f, start, s, n, buf);
      staggered(buf, n, inv, d);
      for (int k = 0; k < n; ++k) {
        // node k receives d_m for m in [k-2, k+1] with weight kStagger[k-m+1]
        cplx acc = kStagger[3] * d[static_cast<std::size_t>(k)] + kStagger[2] * d[static_cast<std::size_t>(k + 1)] +
                   kStagger[1] * d[static_cast<std::size_t>(k + 2)] + kStagger[0] * d[static_cast<std::size_t>(k + 3)];
        acc *= inv;
        std::size_t idx = start + static_cast<std::size_t>(k) * s;
        out[idx] += f ? std::conj((*f)[idx]) * acc : acc;
      }
    });
  }
  return out;
}

ComplexField magnetic_laplacian(const ComplexField& u, const ParallelTransport& T) {
  ComplexField k = kinetic(u, T);
  scale(k, -1.0);
  return k;
}

double potential_energy(const ComplexField& u, const FunctionalParams& params) {
  if (!params.V) return params.lambda * mass(u);
  if (params.V->grid() != u.grid()) throw ValidationError("V and u live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (*params.V)[i] * std::norm(u[i]);
  return s * u.grid().cell_volume();
}

double functional_J(const ComplexField& u, const ParallelTransport& T, const FunctionalParams& params) {
  return energy_EA(u, T) + potential_energy(u, params);
}

double functional_J(const ComplexField& u, const PotentialField& A, const FunctionalParams& params) {
  warn_boundary(u);
  return functional_J(u, ParallelTransport(A, u.grid()), params);
}

double functional_I(const ComplexField& u, const ParallelTransport& T, const FunctionalParams& params) {
  return 0.5 * functional_J(u, T, params) - lp_norm_pow(u, params.p) / params.p;
}

double functional_I(const ComplexField& u, const PotentialField& A, const FunctionalParams& params) {
  warn_boundary(u);
  return functional_I(u, ParallelTransport(A, u.grid()), params);
}

double lp_norm_pow(const ComplexField& u, double p) {
  if (!(p >= 1.0)) throw ValidationError("lp_norm needs p >= 1");
  double s = 0.0;
  if (p == 2.0) {
    for (const auto& v : u.values()) s += std::norm(v);
  } else if (p == 4.0) {
    for (const auto& v : u.values()) {
      double m = std::norm(v);
      s += m * m;
    }
  } else {
    for (const auto& v : u.values()) s += std::pow(std::norm(v), 0.5 * p);
  }
  return s * u.grid().cell_volume();
}

double lp_norm(const ComplexField& u, double p) { return std::pow(lp_norm_pow(u, p), 1.0 / p); }

DiamagneticReport diamagnetic_check(const ComplexField& u, const ParallelTransport& T, double slack_const) {
  const Grid& g = u.grid();
  const int N = g.dim();
  auto gA = covariant_gradient(u, T);
  ComplexField mod = modulus(u);
  auto g0 = covariant_gradient(mod, ParallelTransport::trivial(g));
  DiamagneticReport r;
  r.slack = slack_const * g.h() * g.h();
  r.min_margin = std::numeric_limits<double>::infinity();
  double scale_max = 0.0;
  std::vector<double> margin(g.size()), scalev(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double a = 0.0, b = 0.0;
    for (int k = 0; k < N; ++k) {
      a += std::norm(gA[static_cast<std::size_t>(k)][i]);
      b += std::norm(g0[static_cast<std::size_t>(k)][i]);
    }
    margin[i] = a - b;
    scalev[i] = a + b;
    scale_max = std::max(scale_max, scalev[i]);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.on_boundary(i)) continue;
    r.min_margin = std::min(r.min_margin, margin[i]);
    // rounding-level tolerance plus the stated h^2 slack relative to the local scale
    double tol = r.slack * scalev[i] + 64.0 * std::numeric_limits<double>::epsilon() * scale_max;
    if (margin[i] < -tol) ++r.violations;
  }
  if (!std::isfinite(r.min_margin)) r.min_margin = 0.0;
  r.energy_A = energy_EA(u, T);
  r.energy_modulus = energy_EA(mod, ParallelTransport::trivial(g));
  r.integrated_gap = r.energy_A - r.energy_modulus;
  return r;
}

DiamagneticReport diamagnetic_check(const ComplexField& u, const PotentialField& A, double slack_const) {
  return diamagnetic_check(u, ParallelTransport(A, u.grid()), slack_const);
}

PointwiseBoundsReport pointwise_bounds_check(const ComplexField& u, const PotentialField& A, double lambda, int bumps,
                                             std::uint64_t seed, double slack_const) {
  const Grid& g = u.grid();
  const int N = g.dim();
  ParallelTransport T(A, g);
  ParallelTransport T0 = ParallelTransport::trivial(g);
  auto gA = covariant_gradient(u, T);
  auto g0 = covariant_gradient(u, T0);
  PointwiseBoundsReport r;
  r.slack_const = slack_const;
  r.worst_h1a = std::numeric_limits<double>::infinity();
  r.worst_h1 = std::numeric_limits<double>::infinity();
  const double h2 = g.h() * g.h();
  double a2max = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x[kMaxDim], Ax[kMaxDim], jac[kMaxDim * kMaxDim];
    g.point(i, x);
    A.eval(x, Ax);
    double a2 = 0.0, jmax = 0.0;
    for (int k = 0; k < N; ++k) a2 += Ax[k] * Ax[k];
    a2max = std::max(a2max, a2);
    if (A.has_jacobian()) {
      A.jacobian(x, jac);
      for (int k = 0; k < N * N; ++k) jmax = std::max(jmax, std::abs(jac[k]));
    }
    if (g.on_boundary(i)) continue;
    double dA = 0.0, d0 = 0.0;
    for (int k = 0; k < N; ++k) {
      dA += std::norm(gA[static_cast<std::size_t>(k)][i]);
      d0 += std::norm(g0[static_cast<std::size_t>(k)][i]);
    }
    double m2 = std::norm(u[i]);
    double local = (1.0 + jmax) * (1.0 + jmax) * (dA + d0 + (1.0 + a2) * (1.0 + a2) * m2);
    double slack = slack_const * h2 * local;
    double s1 = dA - 0.5 * d0 + 7.0 * a2 * m2;
    double s2 = 2.0 * dA + 14.0 * a2 * m2 - d0;
    r.worst_h1a = std::min(r.worst_h1a, s1 + slack);
    r.worst_h1 = std::min(r.worst_h1, s2 + slack);
    if (s1 + slack < 0.0) ++r.h1a_violations;
    if (s2 + slack < 0.0) ++r.h1_violations;
  }
  if (!std::isfinite(r.worst_h1a)) r.worst_h1a = 0.0;
  if (!std::isfinite(r.worst_h1)) r.worst_h1 = 0.0;

  // Local sandwich on random bumps over the grid window.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-0.4 * g.L(), 0.4 * g.L());
  std::uniform_real_distribution<double> width(0.5, 1.5);
  std::uniform_real_distribution<double> wave(-1.0, 1.0);
  r.bumps = bumps;
  r.ratio_min = std::numeric_limits<double>::infinity();
  r.ratio_max = 0.0;
  for (int b = 0; b < bumps; ++b) {
    double c[kMaxDim], k[kMaxDim];
    for (int a = 0; a < N; ++a) c[a] = centre(rng);
    double w = width(rng);
    for (int a = 0; a < N; ++a) k[a] = wave(rng);
    ComplexField v = sample_complex(g, [&](const double* x) {
      double r2 = 0.0, ph = 0.0;
      for (int a = 0; a < N; ++a) {
        r2 += (x[a] - c[a]) * (x[a] - c[a]);
        ph += k[a] * x[a];
      }
      return std::polar(std::exp(-r2 / (2.0 * w * w)), ph);
    });
    double M = mass(v);
    double ratio = (energy_EA(v, T) + lambda * M) / (energy_EA(v, T0) + M);
    r.ratio_min = std::min(r.ratio_min, ratio);
    r.ratio_max = std::max(r.ratio_max, ratio);
  }
  if (bumps == 0) r.ratio_min = r.ratio_max = 1.0;
  r.ratio_lower_bound = 0.0;
  r.ratio_upper_bound = 1.05 * std::max(2.0, 2.0 * a2max + lambda);
  r.ratio_ok = r.ratio_min > r.ratio_lower_bound && r.ratio_max <= r.ratio_upper_bound;
  return r;
}

std::vector<double> eta_map(const ComplexField& u, double p) {
  const Grid& g = u.grid();
  const int N = g.dim();
  std::vector<double> eta(static_cast<std::size_t>(N + 1), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double m = std::norm(u[i]);
    if (m == 0.0) continue;
    double w = (p == 4.0) ? m * m : std::pow(m, 0.5 * p);
    double x[kMaxDim];
    g.point(i, x);
    double r = 0.0;
    for (int a = 0; a < N; ++a) r += x[a] * x[a];
    r = std::sqrt(r);
    for (int a = 0; a < N; ++a) eta[static_cast<std::size_t>(a)] += x[a] / (1.0 + r) * w;
    eta[static_cast<std::size_t>(N)] += w;
  }
  for (auto& v : eta) v *= g.cell_volume();
  return eta;
}

Residual el_residual(const ComplexField& u, const ParallelTransport& T, const FunctionalParams& params) {
  Residual r{kinetic(u, T), 0.0};
  const bool quartic = params.p == 4.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double v = params.V ? (*params.V)[i] : params.lambda;
    double m = std::norm(u[i]);
    double nl = quartic ? m : std::pow(m, 0.5 * (params.p - 2.0));
    r.field[i] += (v - nl) * u[i];
  }
  r.norm = std::sqrt(mass(r.field));
  return r;
}

Residual el_residual(const ComplexField& u, const PotentialField& A, const FunctionalParams& params) {
  warn_boundary(u);
  return el_residual(u, ParallelTransport(A, u.grid()), params);
}

}  // namespace magnls
