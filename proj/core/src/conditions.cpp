#include <cmath>

#include "magnls/solver.hpp"

namespace magnls {

ConditionReport condition_report(const PotentialField& A, const GroundState& gs, const FunctionalParams& params,
                                 const Grid& grid, const ConditionOptions& opts) {
  const int N = A.dim();
  if (gs.N != N || gs.p != params.p || gs.lambda != params.lambda)
    throw ValidationError("ground state does not match the functional parameters");
  if (grid.dim() != N) throw ValidationError("grid and potential dimensions differ");
  const double p = params.p;
  ConditionReport r;
  r.c_inf = gs.c_inf;

  Window win = opts.b_window ? *opts.b_window : Window::cube(N, grid.L());
  TwoForm B = curl(A, win, opts.b_resolution);
  r.b_sup = b_sup_norm(B);
  const double Mp = gs.lp_pow();
  r.sigma = r.b_sup * r.b_sup * gs.second_moment / Mp;
  r.threshold_sigma = std::pow(2.0, (p - 2.0) / p) - 1.0;
  r.threshold_B = std::sqrt(r.threshold_sigma * Mp / gs.second_moment);
  r.holds_B_by_sigma = r.sigma < r.threshold_sigma;
  r.holds_B_by_norm = r.b_sup < r.threshold_B;
  r.formulations_agree = r.holds_B_by_sigma == r.holds_B_by_norm;
  r.holds_B = r.holds_B_by_sigma;
  r.upper_bound = gs.c_inf * std::pow(1.0 + r.sigma, p / (p - 2.0));

  // decay at infinity along the coordinate axes and the diagonal
  Grid probe(N, opts.probe_window_L, opts.probe_window_n);
  r.holds_A = true;
  std::vector<Point> dirs;
  for (int a = 0; a < N; ++a) {
    Point d(static_cast<std::size_t>(N), 0.0);
    d[static_cast<std::size_t>(a)] = 1.0;
    dirs.push_back(d);
  }
  dirs.emplace_back(static_cast<std::size_t>(N), 1.0 / std::sqrt(static_cast<double>(N)));
  for (const auto& d : dirs) {
    std::vector<Point> traj;
    for (double s : opts.probe_steps) {
      Point y(static_cast<std::size_t>(N));
      for (int a = 0; a < N; ++a) y[static_cast<std::size_t>(a)] = s * d[static_cast<std::size_t>(a)];
      traj.push_back(y);
    }
    AtInfinity inf = potential_at_infinity(A, traj, probe, opts.a_tol);
    r.probe_a_inf_sup.push_back(inf.a_inf_sup);
    if (!(inf.a_inf_sup < opts.a_tol)) r.holds_A = false;
  }

  if (opts.V) {
    const RealField& V = *opts.V;
    if (V.grid().dim() != N) throw ValidationError("V lives on a grid of another dimension");
    double vmin = INFINITY;
    for (double v : V.values()) vmin = std::min(vmin, v);
    double vlim = opts.V_limit ? *opts.V_limit : params.lambda;
    r.v_min = vmin;
    r.v_limit = vlim;
    r.holds_V = vmin >= vlim - 1e-12 * std::max(1.0, std::abs(vlim));
    ComplexField w = interpolate_to_grid(gs, V.grid());
    double excess = 0.0;
    for (std::size_t i = 0; i < V.size(); ++i) excess += (V[i] - vlim) * std::norm(w[i]);
    excess *= V.grid().cell_volume();
    r.bprime_lhs = r.b_sup * r.b_sup * gs.second_moment + excess;
    r.bprime_rhs = r.threshold_sigma * (2.0 * p / (p - 2.0)) * gs.c_inf;
    r.holds_Bprime = *r.bprime_lhs <= *r.bprime_rhs;
  }
  if (opts.lambda0_grid) r.lambda0_estimate = lambda0_estimate(A, *opts.lambda0_grid);
  return r;
}

}  // namespace magnls
