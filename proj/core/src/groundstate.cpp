#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "magnls/solver.hpp"

namespace magnls {

namespace odeint = boost::numeric::odeint;

double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

namespace {

using State = std::array<double, 2>;

enum class Shot { undershoot, overshoot, survived };

struct Stop {
  Shot kind;
};

struct Radial {
  int N;
  double p, lambda;
  void operator()(const State& s, State& ds, double r) const {
    double u = s[0], v = s[1];
    double nl = std::pow(std::abs(u), p - 2.0) * u;
    ds[0] = v;
    ds[1] = (r > 0.0 ? -(N - 1) / r * v : 0.0) + lambda * u - nl;
  }
};

// Taylor start u = a + c2 r^2 + c4 r^4 at the first radius.
State series_start(const Radial& sys, double a, double r0) {
  double f = sys.lambda * a - std::pow(a, sys.p - 1.0);
  double fp = sys.lambda - (sys.p - 1.0) * std::pow(a, sys.p - 2.0);
  double c2 = f / (2.0 * sys.N);
  double c4 = fp * c2 / (4.0 * (sys.N + 2.0));
  return {a + c2 * r0 * r0 + c4 * r0 * r0 * r0 * r0, 2.0 * c2 * r0 + 4.0 * c4 * r0 * r0 * r0};
}

struct ShotResult {
  Shot kind = Shot::survived;
  std::vector<double> u, v;  // on mesh indices 0..last
};

ShotResult shoot(const Radial& sys, double a, double dr, std::size_t count, double tol, bool record) {
  ShotResult res;
  const double r0 = sys.N == 1 ? 0.0 : 1e-2 * dr;
  State s = series_start(sys, a, r0);
  if (record) {
    res.u.push_back(a);
    res.v.push_back(0.0);
  }
  std::vector<double> times;
  times.reserve(count);
  times.push_back(r0);
  for (std::size_t i = 1; i < count; ++i) times.push_back(dr * static_cast<double>(i));
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
  bool first = true;
  auto observer = [&](const State& st, double) {
    if (first) {
      first = false;
      return;
    }
    if (record) {
      res.u.push_back(st[0]);
      res.v.push_back(st[1]);
    }
    if (st[0] < 0.0) throw Stop{Shot::overshoot};
    if (st[1] > 0.0) throw Stop{Shot::undershoot};
  };
  try {
    odeint::integrate_times(stepper, sys, s, times.begin(), times.end(), 0.1 * dr, observer);
  } catch (const Stop& stop) {
    res.kind = stop.kind;
  }
  return res;
}

double simpson(const std::vector<double>& f, double dr) {
  // composite Simpson; trailing interval by trapezoid if the count is even
  std::size_t n = f.size();
  if (n < 2) return 0.0;
  std::size_t m = (n % 2 == 1) ? n : n - 1;
  double s = f[0] + f[m - 1];
  for (std::size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  s *= dr / 3.0;
  if (m != n) s += 0.5 * dr * (f[n - 2] + f[n - 1]);
  return s;
}

}  // namespace

double GroundState::lp_pow() const { return std::pow(normp, p); }

double GroundState::nehari_residual() const {
  double J = energy0 + lambda * norm2 * norm2;
  return std::abs(J - lp_pow()) / J;
}

double GroundState::value(double rho) const {
  rho = std::abs(rho);
  const double dr = r[1] - r[0];
  const std::size_t last = r.size() - 1;
  if (rho >= r[last]) {
    double k = std::sqrt(lambda);
    return w[last] * std::pow(r[last] / rho, 0.5 * (N - 1)) * std::exp(-k * (rho - r[last]));
  }
  auto i = static_cast<std::size_t>(rho / dr);
  if (i >= last) i = last - 1;
  double t = (rho - r[i]) / dr;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * w[i] + h10 * dr * dw[i] + h01 * w[i + 1] + h11 * dr * dw[i + 1];
}

double GroundState::ode_residual() const {
  const double dr = r[1] - r[0];
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < r.size() && r[i + 2] <= r_cut; ++i) {
    double d2 = (-dw[i + 2] + 8.0 * dw[i + 1] - 8.0 * dw[i - 1] + dw[i - 2]) / (12.0 * dr);
    double res = d2 + (N - 1) / r[i] * dw[i] - lambda * w[i] + std::pow(w[i], p - 1.0);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

GroundState radial_ground_state(int N, double p, double lambda, double r_max, double tol, double dr) {
  if (N < 1) throw ValidationError("ground state needs N >= 1");
  FunctionalParams fp{p, lambda, {}};
  fp.validate(N);
  if (!(tol > 0.0) || !(dr > 0.0)) throw ValidationError("tolerance and mesh step must be positive");
  if (r_max <= 0.0) r_max = 40.0 / std::sqrt(lambda);
  const auto count = static_cast<std::size_t>(std::ceil(r_max / dr)) + 1;
  Radial sys{N, p, lambda};

  double a_lo = std::pow(lambda, 1.0 / (p - 2.0)) * (1.0 + 1e-9);
  if (shoot(sys, a_lo, dr, count, tol, false).kind != Shot::undershoot)
    throw NumericalError("shooting bracket: constant-state start does not undershoot");
  double a_hi = 2.0 * a_lo;
  int expand = 0;
  while (shoot(sys, a_hi, dr, count, tol, false).kind != Shot::overshoot) {
    a_lo = a_hi;
    a_hi *= 2.0;
    if (++expand > 60) throw NumericalError("shooting bracket not found within bounds");
  }
  GroundState gs;
  gs.N = N;
  gs.p = p;
  gs.lambda = lambda;
  gs.tol = tol;
  int steps = 0;
  while (a_hi - a_lo > 4.0 * std::numeric_limits<double>::epsilon() * a_hi) {
    double mid = 0.5 * (a_lo + a_hi);
    if (mid <= a_lo || mid >= a_hi) break;
    Shot k = shoot(sys, mid, dr, count, tol, false).kind;
    if (k == Shot::overshoot)
      a_hi = mid;
    else
      a_lo = mid;
    if (++steps > 400) throw NumericalError("shooting bisection did not reach tolerance");
  }
  gs.bisection_steps = steps;

  ShotResult lo = shoot(sys, a_lo, dr, count, tol, true);
  ShotResult hi = shoot(sys, a_hi, dr, count, tol, true);
  std::size_t cut = std::min(lo.u.size(), hi.u.size());
  for (std::size_t i = 1; i < cut; ++i) {
    if (std::abs(hi.u[i] - lo.u[i]) > 1e-7 * std::abs(lo.u[i]) || lo.v[i] >= 0.0 || hi.u[i] <= 0.0) {
      cut = i;
      break;
    }
  }
  if (cut < 16) throw NumericalError("shooting profile diverged immediately");
  cut -= 1;

  gs.r.resize(count);
  gs.w.resize(count);
  gs.dw.resize(count);
  const double k = std::sqrt(lambda);
  for (std::size_t i = 0; i < count; ++i) {
    double rr = dr * static_cast<double>(i);
    gs.r[i] = rr;
    if (i <= cut) {
      gs.w[i] = 0.5 * (lo.u[i] + hi.u[i]);
      gs.dw[i] = 0.5 * (lo.v[i] + hi.v[i]);
    } else {
      double rc = gs.r[cut];
      double wc = gs.w[cut];
      gs.w[i] = wc * std::pow(rc / rr, 0.5 * (N - 1)) * std::exp(-k * (rr - rc));
      gs.dw[i] = gs.w[i] * (-0.5 * (N - 1) / rr - k);
    }
  }
  gs.r_cut = gs.r[cut];
  gs.u0 = gs.w[0];

  const double omega = sphere_area(N);
  std::vector<double> f2(count), fp_(count), fe(count), fm(count);
  for (std::size_t i = 0; i < count; ++i) {
    double jac = std::pow(gs.r[i], N - 1);
    double w2 = gs.w[i] * gs.w[i];
    f2[i] = w2 * jac;
    fp_[i] = std::pow(gs.w[i], p) * jac;
    fe[i] = gs.dw[i] * gs.dw[i] * jac;
    fm[i] = gs.r[i] * gs.r[i] * w2 * jac;
  }
  gs.norm2 = std::sqrt(omega * simpson(f2, dr));
  gs.normp = std::pow(omega * simpson(fp_, dr), 1.0 / p);
  gs.energy0 = omega * simpson(fe, dr);
  gs.second_moment = omega * simpson(fm, dr);
  gs.c_inf = (p - 2.0) / (2.0 * p) * gs.lp_pow();
  return gs;
}

ComplexField interpolate_to_grid(const GroundState& gs, const Grid& g, const Point& centre) {
  if (g.dim() != gs.N) throw ValidationError("ground state and grid dimensions differ");
  Point c = centre.empty() ? Point(static_cast<std::size_t>(g.dim()), 0.0) : centre;
  return sample_complex(g, [&](const double* x) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      double d = x[a] - c[static_cast<std::size_t>(a)];
      r2 += d * d;
    }
    return cplx(gs.value(std::sqrt(r2)), 0.0);
  });
}

double nehari_scale(const ComplexField& u, const ParallelTransport& T, const FunctionalParams& params) {
  double M = lp_norm_pow(u, params.p);
  if (!(M > 0.0)) throw ValidationError("nehari_scale needs a nonzero function");
  double J = functional_J(u, T, params);
  if (!(J > 0.0)) throw NumericalError("nehari_scale: J is not positive");
  return std::pow(J / M, 1.0 / (params.p - 2.0));
}

double nehari_scale(const ComplexField& u, const PotentialField& A, const FunctionalParams& params) {
  return nehari_scale(u, ParallelTransport(A, u.grid()), params);
}

}  // namespace magnls
