#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "magnls/calculus.hpp"
#include "magnls/field.hpp"
#include "magnls/gauge.hpp"
#include "magnls/grid.hpp"

namespace magnls {

// ---------------------------------------------------------------------------
// Radial ground state of -Laplacian w + lambda w = w^{p-1}

struct GroundState {
  int N = 3;
  double p = 4.0;
  double lambda = 1.0;
  double tol = 1e-12;
  /// Uniform radial mesh with value and derivative.
  std::vector<double> r, w, dw;
  /// Radius beyond which the profile is the fitted exponential tail.
  double r_cut = 0.0;
  double u0 = 0.0;
  double norm2 = 0.0;   // ||w||_2
  double normp = 0.0;   // ||w||_p
  double energy0 = 0.0; // E_0(w)
  double second_moment = 0.0;  // int |x|^2 w^2
  double c_inf = 0.0;
  int bisection_steps = 0;

  double lp_pow() const;
  /// Nehari residual |J - ||w||_p^p| / J with J = E_0 + lambda ||w||_2^2.
  double nehari_residual() const;
  /// Cubic Hermite interpolation of w at radius rho (tail formula beyond the mesh).
  double value(double rho) const;
  /// max over interior mesh points of |w'' + (N-1)/r w' - lambda w + w^{p-1}|
  /// with w'' from fourth-order differences of w'.
  double ode_residual() const;
};

/// Area of the unit sphere in R^N (2 for N = 1).
double sphere_area(int N);

/// Shooting on w(0) with bisection between undershoot (w' > 0 while w > 0)
/// and overshoot (w crosses zero); dopri5 with absolute/relative tolerance tol.
GroundState radial_ground_state(int N, double p, double lambda, double r_max = 0.0, double tol = 1e-12,
                                double dr = 1e-3);

/// w(|x - centre|) on the grid.
ComplexField interpolate_to_grid(const GroundState& gs, const Grid& g, const Point& centre = {});

/// Unique t > 0 maximizing I(t u): (J(u)/||u||_p^p)^{1/(p-2)}.
double nehari_scale(const ComplexField& u, const ParallelTransport& T, const FunctionalParams& params);
double nehari_scale(const ComplexField& u, const PotentialField& A, const FunctionalParams& params);

// ---------------------------------------------------------------------------
// Constrained minimization of J on {||u||_p = 1}

struct MinimizeOptions {
  int max_iter = 2000;
  /// Stop when the relative decrease over `stall_window` iterations is below this.
  double stall_tol = 1e-12;
  int stall_window = 20;
  /// Stop when the preconditioned gradient norm is below this.
  double grad_tol = 1e-9;
  /// Initial step for the first iteration (quasi-Newton steps start at 1).
  double step = 1.0;
  int memory = 12;
  /// Relative increase tolerated before a step counts as an ascent.
  double ascent_tol = 1e-12;
  int max_ascents = 5;
  std::optional<ComplexField> seed;
  /// Offset of the default Gaussian seed (breaks the symmetry of the window).
  std::vector<double> seed_offset;
  /// Record one trace entry every `trace_every` iterations (last always recorded).
  int trace_every = 1;
};

struct TraceEntry {
  int iteration = 0;
  double value = 0.0;
  double centroid_distance = 0.0;
  std::vector<double> centroid;
};

struct MinimizeResult {
  ComplexField u;
  double value = 0.0;
  std::vector<TraceEntry> trace;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> centroid;
  double centroid_distance = 0.0;
};

/// Minimizes J_{A,V}(u) / ||u||_p^2 by preconditioned limited-memory
/// quasi-Newton steps (initial metric: the free resolvent, i.e. a Sobolev
/// gradient), renormalizing to ||u||_p = 1 after every step with an Armijo
/// backtracking line search. With p = 2 the value is inf J / ||u||_2^2.
MinimizeResult minimize_constrained(const PotentialField& A, const FunctionalParams& params, const Grid& grid,
                                    const MinimizeOptions& opts = {});

/// lambda_0 = inf_{||u||_2 = 1} E_A(u) on the grid (p = 2 mode).
double lambda0_estimate(const PotentialField& A, const Grid& grid, const MinimizeOptions& opts = {});

// ---------------------------------------------------------------------------
// Conditions

struct ConditionOptions {
  /// Window used for the curl sup norm (default: the grid window of `grid`).
  std::optional<Window> b_window;
  int b_resolution = 129;
  /// Probe trajectories for the decay condition: directions e_a scaled by `probe_steps`.
  std::vector<double> probe_steps = {8.0, 16.0, 24.0, 32.0};
  int probe_window_n = 9;
  double probe_window_L = 2.0;
  double a_tol = 1e-6;
  /// Optional potential V (grid samples) and its limit at infinity.
  std::optional<RealField> V;
  std::optional<double> V_limit;
  /// Compute lambda_0 with the p = 2 descent on this grid.
  std::optional<Grid> lambda0_grid;
};

struct ConditionReport {
  double sigma = 0.0;
  double b_sup = 0.0;
  /// Largest ||B||_inf allowed by the smallness condition.
  double threshold_B = 0.0;
  /// Largest sigma allowed: 2^{(p-2)/p} - 1.
  double threshold_sigma = 0.0;
  bool holds_B = false;
  bool holds_B_by_norm = false;
  bool holds_B_by_sigma = false;
  bool formulations_agree = true;
  bool holds_A = false;
  std::vector<double> probe_a_inf_sup;
  std::optional<bool> holds_Bprime;
  std::optional<double> bprime_lhs;
  std::optional<double> bprime_rhs;
  std::optional<bool> holds_V;
  std::optional<double> v_limit;
  std::optional<double> v_min;
  std::optional<double> lambda0_estimate;
  double c_inf = 0.0;
  double upper_bound = 0.0;  // c_inf (1 + sigma)^{p/(p-2)}
};

ConditionReport condition_report(const PotentialField& A, const GroundState& gs, const FunctionalParams& params,
                                 const Grid& grid, const ConditionOptions& opts = {});

// ---------------------------------------------------------------------------
// Landscape along t g_y w

struct LandscapeOptions {
  /// y-lattice spacing (rounded to a multiple of the grid spacing).
  double y_spacing = 1.0;
  int t_samples = 61;
  /// Distance below which eta(gamma(y, t)) counts as equal to eta_0.
  double eta_tol = 1e-6;
  double slack = 1e-6;
  bool two_bump = false;
  double quad_tol = kDefaultQuadTol;
  /// Largest mass fraction a shift may push out of the window.
  double max_loss = 1e-4;
};

struct LandscapePoint {
  Point y;
  double J = 0.0;
  double M = 0.0;
  double t_max = 0.0;
  double I_max = 0.0;
};

struct LandscapeResult {
  std::vector<LandscapePoint> surface;
  Point max_point;
  double max_t = 0.0;
  double max_value = 0.0;
  double min_value = 0.0;
  double R = 0.0;
  double T = 0.0;
  double c_inf = 0.0;
  double sigma = 0.0;
  double b_sup = 0.0;
  double upper_bound = 0.0;
  bool holds_B = false;
  bool lower_ok = false;
  bool upper_ok = false;
  bool below_twice = false;
  double slack = 0.0;
  /// (y, t) samples where |eta - eta_0| < eta_tol.
  std::vector<std::pair<Point, double>> eta_hits;
  bool eta_only_origin = false;
  double eta_min_distance = 0.0;
  std::optional<double> two_bump_max;
};

LandscapeResult landscape_eval(const PotentialField& A, const GroundState& gs, const FunctionalParams& params,
                               double R, double T, const Grid& grid, const LandscapeOptions& opts = {});

/// The ground state shifted magnetically to y and scaled by t.
ComplexField landscape_seed(const PotentialField& A, const GroundState& gs, const Grid& grid, const Point& y,
                            double t, double quad_tol = kDefaultQuadTol);

// ---------------------------------------------------------------------------
// Critical points

struct CriticalOptions {
  double tol = 1e-8;
  int max_newton = 40;
  int krylov_restart = 60;
  int krylov_max = 600;
  std::optional<double> c_inf;
};

struct CriticalTraceEntry {
  int iteration = 0;
  double level = 0.0;
  double residual = 0.0;
  double step = 0.0;
  int krylov_iterations = 0;
};

struct CriticalResult {
  ComplexField u;
  double level = 0.0;
  double residual = 0.0;
  std::vector<CriticalTraceEntry> trace;
  bool converged = false;
  bool trivial = false;
  std::optional<bool> in_bracket;
  std::string stop_reason;
};

/// Damped Newton-Krylov descent on ||el_residual||^2 with Armijo backtracking;
/// Krylov solves use GMRES preconditioned by the free resolvent.
CriticalResult critical_point_search(const PotentialField& A, const FunctionalParams& params, const ComplexField& seed,
                                     const CriticalOptions& opts = {});

}  // namespace magnls
