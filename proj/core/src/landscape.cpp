#include <cmath>
#include <numbers>

#include "magnls/solver.hpp"

namespace magnls {

namespace {

std::vector<Point> ball_lattice(int N, double R, double s) {
  const int k = static_cast<int>(std::floor(R / s + 1e-12));
  std::vector<Point> pts;
  std::vector<int> idx(static_cast<std::size_t>(N), -k);
  while (true) {
    Point y(static_cast<std::size_t>(N));
    double r2 = 0.0;
    for (int a = 0; a < N; ++a) {
      y[static_cast<std::size_t>(a)] = s * idx[static_cast<std::size_t>(a)];
      r2 += y[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(a)];
    }
    if (r2 <= R * R * (1.0 + 1e-12)) pts.push_back(y);
    int a = 0;
    while (a < N && ++idx[static_cast<std::size_t>(a)] > k) idx[static_cast<std::size_t>(a++)] = -k;
    if (a == N) break;
  }
  return pts;
}

double peak_level(double J, double M, double p) {
  return (0.5 - 1.0 / p) * std::pow(J / std::pow(M, 2.0 / p), p / (p - 2.0));
}

}  // namespace

ComplexField landscape_seed(const PotentialField& A, const GroundState& gs, const Grid& grid, const Point& y, double t,
                            double quad_tol) {
  ComplexField w = interpolate_to_grid(gs, grid);
  ShiftOp g = make_shift(A, y, grid, 0.0, quad_tol, PhaseNormalization::at_base, 1e-4);
  ComplexField v = shift_apply(g, w);
  scale(v, t);
  return v;
}

LandscapeResult landscape_eval(const PotentialField& A, const GroundState& gs, const FunctionalParams& params, double R,
                               double T, const Grid& grid, const LandscapeOptions& opts) {
  const int N = grid.dim();
  params.validate(N);
  if (gs.N != N || gs.p != params.p || gs.lambda != params.lambda)
    throw ValidationError("ground state does not match the functional parameters");
  if (!(R > 0.0) || !(T > 0.0)) throw ValidationError("landscape needs R > 0 and T > 0");
  if (opts.t_samples < 2) throw ValidationError("landscape needs at least two t samples");
  const double p = params.p;
  LandscapeResult res;
  res.R = R;
  res.T = T;
  res.c_inf = gs.c_inf;
  res.slack = opts.slack;

  ParallelTransport conn(A, grid);
  ComplexField w = interpolate_to_grid(gs, grid);
  const double M0 = lp_norm_pow(w, p);
  const double h = grid.h();
  const double s = std::max(1.0, std::round(opts.y_spacing / h)) * h;
  auto ys = ball_lattice(N, R, s);

  std::vector<double> eta_w;
  res.eta_min_distance = INFINITY;
  bool origin_hit = false, stray_hit = false;
  res.max_value = -INFINITY;
  res.min_value = INFINITY;
  for (const auto& y : ys) {
    ShiftOp g = make_shift(A, y, grid, 0.0, opts.quad_tol, PhaseNormalization::at_base, opts.max_loss);
    ComplexField v = shift_apply(g, w);
    LandscapePoint pt;
    pt.y = y;
    pt.J = functional_J(v, conn, params);
    pt.M = lp_norm_pow(v, p);
    pt.t_max = std::pow(pt.J / pt.M, 1.0 / (p - 2.0));
    pt.I_max = peak_level(pt.J, pt.M, p);
    if (pt.t_max >= T) throw ValidationError("T is too small: I(t g_y w) still increases at t = T; use a larger T");
    if (pt.I_max > res.max_value) {
      res.max_value = pt.I_max;
      res.max_point = y;
      res.max_t = pt.t_max;
    }
    res.min_value = std::min(res.min_value, pt.I_max);

    auto eta = eta_map(v, p);
    bool is_origin = true;
    for (double c : y) is_origin = is_origin && c == 0.0;
    for (int k = 0; k < opts.t_samples; ++k) {
      double t = T * k / (opts.t_samples - 1);
      double tp = std::pow(t, p);
      double d2 = 0.0;
      for (int a = 0; a < N; ++a) d2 += tp * tp * eta[static_cast<std::size_t>(a)] * eta[static_cast<std::size_t>(a)];
      double last = tp * eta[static_cast<std::size_t>(N)] - M0;
      d2 += last * last;
      double d = std::sqrt(d2);
      if (d < opts.eta_tol) {
        res.eta_hits.emplace_back(y, t);
        (is_origin ? origin_hit : stray_hit) = true;
      } else if (!is_origin) {
        res.eta_min_distance = std::min(res.eta_min_distance, d);
      }
    }
    res.surface.push_back(std::move(pt));
  }
  res.eta_only_origin = origin_hit && !stray_hit;
  if (!std::isfinite(res.eta_min_distance)) res.eta_min_distance = 0.0;

  TwoForm B = curl(A, Window::cube(N, grid.L()), grid.n());
  res.b_sup = b_sup_norm(B);
  res.sigma = res.b_sup * res.b_sup * gs.second_moment / gs.lp_pow();
  res.holds_B = res.sigma < std::pow(2.0, (p - 2.0) / p) - 1.0;
  res.upper_bound = gs.c_inf * std::pow(1.0 + res.sigma, p / (p - 2.0));
  res.lower_ok = res.max_value > gs.c_inf * (1.0 + opts.slack);
  res.upper_ok = res.max_value <= res.upper_bound * (1.0 + opts.slack);
  res.below_twice = res.upper_bound < 2.0 * gs.c_inf;

  if (opts.two_bump) {
    double best = -INFINITY;
    for (const auto& y : ys) {
      double r = 0.0;
      for (double c : y) r += c * c;
      r = std::sqrt(r);
      Point e(static_cast<std::size_t>(N), 0.0);
      if (r > 0.0)
        for (int a = 0; a < N; ++a) e[static_cast<std::size_t>(a)] = y[static_cast<std::size_t>(a)] / r;
      else
        e[0] = 1.0;
      Point zp(static_cast<std::size_t>(N)), zm(static_cast<std::size_t>(N));
      for (int a = 0; a < N; ++a) {
        zp[static_cast<std::size_t>(a)] = std::round(R * e[static_cast<std::size_t>(a)] / h) * h;
        zm[static_cast<std::size_t>(a)] = -zp[static_cast<std::size_t>(a)];
      }
      double ang = std::numbers::pi * r / (2.0 * R);
      ComplexField v = shift_apply(make_shift(A, zm, grid, 0.0, opts.quad_tol, PhaseNormalization::at_base, opts.max_loss), w);
      scale(v, std::cos(ang));
      ComplexField v2 = shift_apply(make_shift(A, zp, grid, 0.0, opts.quad_tol, PhaseNormalization::at_base, opts.max_loss), w);
      axpy(std::sin(ang), v2, v);
      best = std::max(best, peak_level(functional_J(v, conn, params), lp_norm_pow(v, p), p));
    }
    res.two_bump_max = best;
  }
  return res;
}

}  // namespace magnls
