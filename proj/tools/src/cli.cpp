#include "magnls/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "magnls/calculus.hpp"
#include "magnls/field.hpp"
#include "magnls/gauge.hpp"
#include "magnls/io.hpp"
#include "magnls/profiles.hpp"
#include "magnls/solver.hpp"

namespace magnls::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string subcommand;
  std::string field = "zero";
  int dim = 2;
  std::optional<double> L;
  std::optional<int> n;
  double p = 4.0;
  std::optional<double> lambda;
  std::string V;
  std::string y;
  std::optional<double> R;
  double T = 3.0;
  std::string spec;
  std::string out = "magnls_out";
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string normalization = "at_base";
  std::string construction = "auto";
  bool minimize = false;
  double seed_scale = 1.1;
  double y_spacing = 1.0;
  bool two_bump = false;
  double eps_mass = 1e-2;
  double rho = 1.0;
  bool seed_given = false;
};

json tv(double value, double tol) {
  json j;
  j["value"] = value;
  j["tol"] = tol;
  return j;
}

json point_json(const Point& y) {
  json a = json::array();
  for (double v : y) a.push_back(v);
  return a;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

Point parse_point(const std::string& s, int dim, const char* what) {
  Point y;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      y.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(std::string("cannot parse ") + what + " '" + s + "'");
    }
  }
  if (static_cast<int>(y.size()) != dim)
    throw ValidationError(std::string(what) + " has " + std::to_string(y.size()) + " components, expected " +
                          std::to_string(dim));
  return y;
}

double default_L(int dim) { return dim == 1 ? 20.0 : (dim == 2 ? 8.0 : 6.0); }
int default_n(int dim) { return dim == 1 ? 401 : (dim == 2 ? 129 : 65); }

Grid make_grid(const RunConfig& c) { return Grid(c.dim, c.L.value_or(default_L(c.dim)), c.n.value_or(default_n(c.dim))); }

std::map<std::string, double> parse_kv(const std::string& body, const std::string& spec) {
  std::map<std::string, double> kv;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ValidationError("malformed V spec '" + spec + "'");
    try {
      kv[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("malformed V spec '" + spec + "'");
    }
  }
  return kv;
}

// const:v=f  |  bump:lambda=f,a=f,s=f  (V = lambda + a exp(-|x|^2 / s^2))
struct VSpec {
  double limit = 0.0;
  std::function<double(const double*, int)> eval;
};

VSpec parse_V(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  auto kv = parse_kv(colon == std::string::npos ? "" : spec.substr(colon + 1), spec);
  auto need = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ValidationError("V spec '" + spec + "' lacks '" + key + "'");
    return it->second;
  };
  VSpec v;
  if (kind == "const") {
    double c = need("v");
    v.limit = c;
    v.eval = [c](const double*, int) { return c; };
  } else if (kind == "bump") {
    double lam = need("lambda"), a = need("a"), s = need("s");
    if (!(s > 0.0)) throw ValidationError("V bump width must be positive");
    v.limit = lam;
    v.eval = [lam, a, s](const double* x, int N) {
      double r2 = 0.0;
      for (int i = 0; i < N; ++i) r2 += x[i] * x[i];
      return lam + a * std::exp(-r2 / (s * s));
    };
  } else {
    throw ValidationError("unknown V spec '" + spec + "' (expected const:v=.. or bump:lambda=..,a=..,s=..)");
  }
  return v;
}

FunctionalParams make_params(const RunConfig& c, const Grid* grid) {
  FunctionalParams fp;
  fp.p = c.p;
  fp.lambda = c.lambda.value_or(1.0);
  if (!c.V.empty()) {
    VSpec v = parse_V(c.V);
    if (c.lambda && std::abs(*c.lambda - v.limit) > 1e-12 * std::max(1.0, std::abs(v.limit)))
      throw ValidationError("--lambda differs from the limit of V at infinity");
    fp.lambda = v.limit;
    if (grid) {
      const int N = grid->dim();
      RealField V(*grid);
      for (std::size_t i = 0; i < grid->size(); ++i) {
        double x[kMaxDim];
        grid->point(i, x);
        V[i] = v.eval(x, N);
      }
      fp.V = std::move(V);
    }
  }
  return fp;
}

json config_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["field"] = c.field;
  j["dim"] = c.dim;
  if (c.subcommand != "groundstate" && c.subcommand != "profiles") {
    j["L"] = c.L.value_or(default_L(c.dim));
    j["n"] = c.n.value_or(default_n(c.dim));
  }
  j["p"] = c.p;
  j["lambda"] = c.lambda.value_or(1.0);
  j["V"] = c.V;
  j["y"] = c.y;
  if (c.R)
    j["R"] = *c.R;
  else
    j["R"] = nullptr;
  j["T"] = c.T;
  j["spec"] = c.spec;
  j["out"] = c.out;
  j["seed"] = c.seed;
  if (c.tol)
    j["tol"] = *c.tol;
  else
    j["tol"] = nullptr;
  j["normalization"] = c.normalization;
  j["construction"] = c.construction;
  j["minimize"] = c.minimize;
  j["seed_scale"] = c.seed_scale;
  j["y_spacing"] = c.y_spacing;
  j["two_bump"] = c.two_bump;
  j["eps_mass"] = c.eps_mass;
  j["rho"] = c.rho;
  return j;
}

json drain_warnings() {
  json w = json::array();
  for (auto& s : diagnostics::drain()) w.push_back(s);
  return w;
}

PhaseNormalization parse_normalization(const std::string& s) {
  if (s == "at_base") return PhaseNormalization::at_base;
  if (s == "at_half") return PhaseNormalization::at_half;
  throw ValidationError("unknown normalization '" + s + "' (at_base | at_half)");
}

// ---------------------------------------------------------------------------

void run_gauge(const RunConfig& c, const fs::path& out, json& r) {
  if (c.y.empty()) throw ValidationError("gauge needs --y");
  Grid grid = make_grid(c);
  PotentialField A = parse_field(c.field, c.dim);
  Point y = parse_point(c.y, c.dim, "--y");
  const double qt = c.tol.value_or(kDefaultQuadTol);
  PhaseNormalization norm = parse_normalization(c.normalization);
  Construction cons;
  if (c.construction == "auto")
    cons = A.has_jacobian() ? Construction::direct_formula : Construction::grad_of_phase;
  else if (c.construction == "direct_formula")
    cons = Construction::direct_formula;
  else if (c.construction == "grad_of_phase")
    cons = Construction::grad_of_phase;
  else
    throw ValidationError("unknown construction '" + c.construction + "'");

  GaugePhase phase = rephase_field(A, y, grid, qt, norm);
  CorrectedPotential Ay = corrected_potential(A, phase, grid, cons);
  TwoForm B = curl(A, Window::cube(c.dim, grid.L()), grid.n());
  const double bound_tol = 1e-8;
  LinearBoundReport lb = linear_bound_check(Ay, grid, B, bound_tol);

  double ay_at_y = 0.0;
  {
    std::vector<double> v(static_cast<std::size_t>(c.dim));
    if (A.has_jacobian())
      corrected_potential_at(A, y, y.data(), v.data(), qt);
    else
      corrected_potential_field(A, y, qt).eval(y.data(), v.data());
    for (double a : v) ay_at_y = std::max(ay_at_y, std::abs(a));
  }

  write_real_csv((out / "phi.csv").string(), {phase.samples}, {"phi"});
  std::vector<std::string> names;
  for (int a = 0; a < c.dim; ++a) names.push_back("A" + std::to_string(a + 1));
  write_real_csv((out / "Ay.csv").string(), Ay.components, names);

  const double h2 = grid.h() * grid.h();
  r["grid"] = json::parse(grid_header_json(grid));
  r["base_point"] = point_json(y);
  r["normalization"] = to_string(norm);
  r["construction"] = to_string(cons);
  r["b_sup"] = tv(b_sup_norm(B), B.analytic ? qt : h2);
  r["max_bound_violation"] = tv(lb.max_violation, bound_tol);
  r["bound_violations"] = lb.violations;
  r["max_component_violation"] = tv(lb.max_component_violation, bound_tol);
  r["component_violations"] = lb.component_violations;
  r["curl_error"] = tv(curl_error(Ay, A, grid), 10.0 * h2);
  r["slab_error"] = tv(slab_error(Ay, grid), 1e-8);
  r["A_y_at_base"] = tv(ay_at_y, 1e-8);
  r["quad_tol"] = qt;
  return;
}

json gs_json(const GroundState& gs) {
  const double t = std::max(gs.tol, 1e-12);
  json j;
  j["N"] = gs.N;
  j["p"] = gs.p;
  j["lambda"] = gs.lambda;
  j["u0"] = tv(gs.u0, 1e-10);
  j["r_cut"] = gs.r_cut;
  j["norm2"] = tv(gs.norm2, 1e-8);
  j["normp"] = tv(gs.normp, 1e-8);
  j["energy0"] = tv(gs.energy0, 1e-8);
  j["second_moment"] = tv(gs.second_moment, 1e-8);
  j["c_inf"] = tv(gs.c_inf, 1e-8);
  j["nehari_residual"] = tv(gs.nehari_residual(), 1e-6);
  j["ode_residual"] = tv(gs.ode_residual(), 1e-4);
  j["bisection_steps"] = gs.bisection_steps;
  j["shooting_tol"] = t;
  return j;
}

void run_groundstate(const RunConfig& c, const fs::path& out, json& r) {
  if (c.dim < 1 || c.dim > 3) throw ValidationError("groundstate supports dim 1..3");
  FunctionalParams fp = make_params(c, nullptr);
  fp.validate(c.dim);
  GroundState gs = radial_ground_state(c.dim, fp.p, fp.lambda, 0.0, c.tol.value_or(1e-12));
  {
    std::ofstream os(out / "w.csv", std::ios::binary);
    os << "r,w,dw\n";
    for (std::size_t i = 0; i < gs.r.size(); ++i)
      os << format_number(gs.r[i]) << ',' << format_number(gs.w[i]) << ',' << format_number(gs.dw[i]) << '\n';
  }
  r = gs_json(gs);
  if (c.dim == 1) {
    // w(x) = (p lambda / 2)^{1/(p-2)} sech^{2/(p-2)}((p-2) sqrt(lambda) x / 2)
    const double p = fp.p, lam = fp.lambda;
    double err = 0.0;
    for (std::size_t i = 0; i < gs.r.size(); ++i) {
      double ex = std::pow(0.5 * p * lam, 1.0 / (p - 2.0)) *
                  std::pow(1.0 / std::cosh(0.5 * (p - 2.0) * std::sqrt(lam) * gs.r[i]), 2.0 / (p - 2.0));
      err = std::max(err, std::abs(ex - gs.w[i]));
    }
    r["closed_form_sup_error"] = tv(err, 1e-6);
  }
  return;
}

ConditionReport conditions_for(const RunConfig& c, const PotentialField& A, const GroundState& gs,
                               const FunctionalParams& fp, const Grid& grid) {
  ConditionOptions o;
  o.b_resolution = grid.n();
  if (fp.V) {
    o.V = fp.V;
    o.V_limit = fp.lambda;
  }
  (void)c;
  return condition_report(A, gs, fp, grid, o);
}

void run_conditions(const RunConfig& c, const fs::path& out, json& r) {
  (void)out;
  Grid grid = make_grid(c);
  r["grid"] = json::parse(grid_header_json(grid));
  PotentialField A = parse_field(c.field, c.dim);
  FunctionalParams fp = make_params(c, &grid);
  fp.validate(c.dim);
  GroundState gs = radial_ground_state(c.dim, fp.p, fp.lambda);
  ConditionReport cr = conditions_for(c, A, gs, fp, grid);
  r["c_inf"] = tv(cr.c_inf, 1e-8);
  r["b_sup"] = tv(cr.b_sup, 1e-8);
  r["sigma"] = tv(cr.sigma, 1e-8);
  r["threshold_sigma"] = tv(cr.threshold_sigma, 0.0);
  r["threshold_B"] = tv(cr.threshold_B, 1e-8);
  r["holds_B"] = cr.holds_B;
  r["holds_B_by_norm"] = cr.holds_B_by_norm;
  r["formulations_agree"] = cr.formulations_agree;
  r["holds_A"] = cr.holds_A;
  json probes = json::array();
  for (double v : cr.probe_a_inf_sup) probes.push_back(tv(v, 1e-6));
  r["probe_a_inf_sup"] = probes;
  r["upper_bound"] = tv(cr.upper_bound, 1e-8);
  r["below_twice"] = cr.upper_bound < 2.0 * cr.c_inf;
  if (cr.holds_Bprime) {
    r["holds_Bprime"] = *cr.holds_Bprime;
    r["bprime_lhs"] = tv(*cr.bprime_lhs, 1e-8);
    r["bprime_rhs"] = tv(*cr.bprime_rhs, 1e-8);
  }
  if (cr.holds_V) {
    r["holds_V"] = *cr.holds_V;
    r["v_min"] = tv(*cr.v_min, 1e-12);
    r["v_limit"] = tv(*cr.v_limit, 1e-12);
  }
  return;
}

void run_landscape(const RunConfig& c, const fs::path& out, json& r) {
  FunctionalParams fp = make_params(c, nullptr);
  fp.validate(c.dim);
  // default radius: six decay lengths; the default window grows by R at the same spacing
  const double R = c.R.value_or(6.0 / std::sqrt(fp.lambda));
  Grid grid = make_grid(c);
  if (!c.L && !c.n) {
    const double h = grid.h();
    const int half = static_cast<int>(std::ceil((default_L(c.dim) + R) / h));
    grid = Grid(c.dim, half * h, 2 * half + 1);
  }
  PotentialField A = parse_field(c.field, c.dim);
  if (!c.V.empty()) throw ValidationError("landscape works with V = lambda; drop --V");
  GroundState gs = radial_ground_state(c.dim, fp.p, fp.lambda);
  LandscapeOptions o;
  o.y_spacing = c.y_spacing;
  o.two_bump = c.two_bump;
  if (c.tol) o.quad_tol = *c.tol;
  LandscapeResult lr = landscape_eval(A, gs, fp, R, c.T, grid, o);
  {
    std::ofstream os(out / "landscape.csv", std::ios::binary);
    for (int a = 0; a < c.dim; ++a) os << 'y' << (a + 1) << ',';
    os << "t_max,I_value\n";
    for (const auto& pt : lr.surface) {
      for (double v : pt.y) os << format_number(v) << ',';
      os << format_number(pt.t_max) << ',' << format_number(pt.I_max) << '\n';
    }
  }
  r["grid"] = json::parse(grid_header_json(grid));
  r["R"] = lr.R;
  r["T"] = lr.T;
  r["c_inf"] = tv(lr.c_inf, 1e-8);
  r["max_value"] = tv(lr.max_value, lr.slack);
  r["max_point"] = point_json(lr.max_point);
  r["max_t"] = tv(lr.max_t, 1e-8);
  r["min_value"] = tv(lr.min_value, lr.slack);
  r["sigma"] = tv(lr.sigma, 1e-8);
  r["b_sup"] = tv(lr.b_sup, 1e-8);
  r["upper_bound"] = tv(lr.upper_bound, lr.slack);
  r["holds_B"] = lr.holds_B;
  r["lower_ok"] = lr.lower_ok;
  r["upper_ok"] = lr.upper_ok;
  r["below_twice"] = lr.below_twice;
  r["eta_hits"] = lr.eta_hits.size();
  r["eta_only_origin"] = lr.eta_only_origin;
  r["eta_min_distance"] = tv(lr.eta_min_distance, o.eta_tol);
  if (lr.two_bump_max) r["two_bump_max"] = tv(*lr.two_bump_max, lr.slack);
  return;
}

void run_solve(const RunConfig& c, const fs::path& out, json& r) {
  Grid grid = make_grid(c);
  PotentialField A = parse_field(c.field, c.dim);
  FunctionalParams fp = make_params(c, &grid);
  fp.validate(c.dim);
  r["grid"] = json::parse(grid_header_json(grid));
  if (c.minimize) {
    MinimizeOptions mo;
    if (c.tol) mo.grad_tol = *c.tol;
    MinimizeResult mr = minimize_constrained(A, fp, grid, mo);
    write_field_csv((out / "solution.csv").string(), mr.u);
    r["mode"] = "minimize";
    r["value"] = tv(mr.value, mo.stall_tol);
    r["iterations"] = mr.iterations;
    r["converged"] = mr.converged;
    r["stop_reason"] = mr.stop_reason;
    r["centroid"] = point_json(mr.centroid);
    r["centroid_distance"] = tv(mr.centroid_distance, grid.h());
    if (c.dim <= 3) {
      GroundState gs = radial_ground_state(c.dim, fp.p, fp.lambda);
      // C(p, N, 0, lambda) = (2p/(p-2) c_inf)^{(p-2)/p}
      double c0 = std::pow(2.0 * fp.p / (fp.p - 2.0) * gs.c_inf, (fp.p - 2.0) / fp.p);
      r["free_constant"] = tv(c0, 1e-8);
    }
    return;
  }
  GroundState gs = radial_ground_state(c.dim, fp.p, fp.lambda);
  Point y = c.y.empty() ? Point(static_cast<std::size_t>(c.dim), 0.0) : parse_point(c.y, c.dim, "--y");
  ComplexField seed = landscape_seed(A, gs, grid, y, c.seed_scale);
  CriticalOptions co;
  if (c.tol) co.tol = *c.tol;
  co.c_inf = gs.c_inf;
  CriticalResult cr = critical_point_search(A, fp, seed, co);
  write_field_csv((out / "solution.csv").string(), cr.u);
  r["mode"] = "critical";
  r["level"] = tv(cr.level, co.tol);
  r["residual"] = tv(cr.residual, co.tol);
  r["converged"] = cr.converged;
  r["stop_reason"] = cr.stop_reason;
  r["trivial"] = cr.trivial;
  r["c_inf"] = tv(gs.c_inf, 1e-8);
  if (cr.in_bracket) r["in_bracket"] = *cr.in_bracket;
  json trace = json::array();
  for (const auto& t : cr.trace) {
    json e;
    e["iteration"] = t.iteration;
    e["level"] = t.level;
    e["residual"] = t.residual;
    e["step"] = t.step;
    e["krylov_iterations"] = t.krylov_iterations;
    trace.push_back(e);
  }
  r["trace"] = trace;
  if (!cr.converged) throw NumericalError("critical point search stopped: " + cr.stop_reason);
  return;
}

void run_profiles(const RunConfig& c, const fs::path& out, json& r) {
  if (c.spec.empty()) throw ValidationError("profiles needs --spec");
  SyntheticSpec spec = load_synthetic_spec(c.spec);
  if (c.seed_given) spec.seed = c.seed;
  Grid grid = spec.grid();
  PotentialField A = parse_field(spec.field, spec.dim);
  FunctionalParams fp{spec.p, spec.lambda, {}};
  fp.validate(spec.dim);
  SyntheticSequence seq = synthesize_sequence(spec, A, grid);
  Discretization xi(grid, c.rho, std::max(c.rho, 0.5 * c.rho * std::sqrt(static_cast<double>(spec.dim))));
  ExtractOptions eo;
  eo.eps_mass = c.eps_mass;
  eo.lambda = spec.lambda;
  eo.p = spec.p;
  if (c.tol) eo.quad_tol = *c.tol;
  Decomposition dec = extract_profiles(seq.u, A, xi, eo);
  SplittingReport sr = verify_decomposition(dec, seq.u, A, fp);

  const double W = dec.window_radius;
  int half = std::min(static_cast<int>(std::ceil(W / grid.h())), (grid.n() - 1) / 2);
  Grid pw(grid.dim(), half * grid.h(), 2 * half + 1);
  json terms = json::array();
  for (const auto& t : dec.terms) {
    json e;
    e["index"] = t.index;
    json traj = json::array();
    for (const auto& y : t.trajectory) traj.push_back(point_json(y));
    e["trajectory"] = traj;
    e["local_mass"] = tv(t.local_mass, eo.eps_mass);
    e["agreement"] = tv(t.agreement, eo.agree_tol);
    e["convergent"] = t.convergent;
    e["lp_pow"] = tv(lp_norm_pow(t.profile, spec.p), 1e-8);
    e["l2_pow"] = tv(mass(t.profile), 1e-8);
    if (t.index > 0) {
      e["a_inf_sup"] = tv(t.a_inf_sup, eo.a_inf_tol);
      e["a_inf_vanishes"] = t.a_inf_vanishes;
      e["a_inf_converged"] = t.a_inf_converged;
    }
    std::string file = "profile_" + std::to_string(t.index) + ".csv";
    write_field_csv((out / file).string(), restrict_to(t.profile, pw));
    e["file"] = file;
    terms.push_back(e);
  }
  r["grid"] = json::parse(grid_header_json(grid));
  r["profile_grid"] = json::parse(grid_header_json(pw));
  r["K"] = spec.K;
  r["window_radius"] = W;
  r["tail_start"] = dec.tail_start;
  r["lattice"] = {{"rho", xi.rho()}, {"rho_cover", xi.rho_cover()}, {"multiplicity", xi.multiplicity()}};
  r["terms"] = terms;
  json rl = json::array();
  for (double v : dec.remainder_lp) rl.push_back(tv(v, eo.eps_mass));
  r["remainder_lp"] = rl;
  json split;
  split["mass_defect"] = tv(sr.mass_defect, 0.02);
  split["mass_defect_abs"] = tv(sr.mass_defect_abs, 1e-8);
  split["lp_last"] = tv(sr.lp_last, 1e-8);
  split["lp_profiles"] = tv(sr.lp_profiles, 1e-8);
  split["l2_slack"] = tv(sr.l2_slack, 1e-6);
  split["energy_slack"] = tv(sr.energy_slack, 1e-6);
  split["liminf_l2"] = tv(sr.liminf_l2, 1e-8);
  split["liminf_energy"] = tv(sr.liminf_energy, 1e-8);
  split["min_separation_start"] = tv(sr.min_separation_start, xi.rho());
  split["min_separation_end"] = tv(sr.min_separation_end, xi.rho());
  split["separation_grows"] = sr.separation_grows;
  split["permutation_defect"] = tv(sr.permutation_defect, 1e-12);
  r["splitting"] = split;
  r["success"] = dec.success;
  json w = json::array();
  for (const auto& s : dec.warnings) w.push_back(s);
  r["extraction_warnings"] = w;
  return;
}

const char* report_name(const std::string& sub) {
  if (sub == "gauge") return "gauge.json";
  if (sub == "groundstate") return "gs.json";
  if (sub == "conditions") return "conditions.json";
  if (sub == "landscape") return "landscape.json";
  if (sub == "solve") return "solve.json";
  return "decomposition.json";
}

void add_common(CLI::App* s, RunConfig& c) {
  s->add_option("--field", c.field, "magnetic potential: zero | landau:b= | symmetric:b= | gauss:b0=,s= | periodic:b=,L=");
  s->add_option("--dim", c.dim, "space dimension");
  s->add_option("--L", c.L, "half-width of the window [-L, L]^N");
  s->add_option("--n", c.n, "nodes per axis (odd)");
  s->add_option("--p", c.p, "nonlinearity exponent");
  s->add_option("--lambda", c.lambda, "linear coefficient (limit of V)");
  s->add_option("--V", c.V, "potential: const:v= | bump:lambda=,a=,s=");
  s->add_option("--y", c.y, "point, comma separated");
  s->add_option("--R", c.R, "landscape radius");
  s->add_option("--T", c.T, "landscape scaling bound");
  s->add_option("--spec", c.spec, "synthetic sequence spec (JSON)");
  s->add_option("--out", c.out, "output directory");
  s->add_option("--seed", c.seed, "random seed")->each([&c](const std::string&) { c.seed_given = true; });
  s->add_option("--tol", c.tol, "tolerance (quadrature, solver or gradient, per subcommand)");
}

}  // namespace

int run(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"magnetic NLS toolkit", "magnls"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  auto* g = app.add_subcommand("gauge", "phase, corrected potential and gauge identities");
  auto* gs = app.add_subcommand("groundstate", "radial ground state of the limit problem");
  auto* co = app.add_subcommand("conditions", "magnetic and potential conditions");
  auto* la = app.add_subcommand("landscape", "mountain-pass landscape over magnetic shifts");
  auto* so = app.add_subcommand("solve", "critical point search or constrained minimization");
  auto* pr = app.add_subcommand("profiles", "profile decomposition of a synthetic sequence");
  for (auto* s : {g, gs, co, la, so, pr}) add_common(s, c);
  g->add_option("--normalization", c.normalization, "at_base | at_half");
  g->add_option("--construction", c.construction, "auto | direct_formula | grad_of_phase");
  la->add_option("--y-spacing", c.y_spacing, "spacing of the y lattice");
  la->add_flag("--two-bump", c.two_bump, "also evaluate the two-bump path");
  so->add_flag("--minimize", c.minimize, "minimize J / ||u||_p^2 instead of searching a critical point");
  so->add_option("--seed-scale", c.seed_scale, "seed = scale * shifted ground state");
  pr->add_option("--eps-mass", c.eps_mass, "local mass threshold");
  pr->add_option("--rho", c.rho, "lattice spacing of the local mass scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  for (auto* s : {g, gs, co, la, so, pr})
    if (s->parsed()) c.subcommand = s->get_name();

  fs::path out(c.out);
  json manifest;
  manifest["tool"] = "magnls";
  manifest["version"] = kVersion;
  manifest["config"] = config_json(c);
  json report;
  int code = 0;
  diagnostics::drain();
  try {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw ValidationError("cannot create output directory '" + c.out + "'");
    if (c.subcommand == "gauge")
      run_gauge(c, out, report);
    else if (c.subcommand == "groundstate")
      run_groundstate(c, out, report);
    else if (c.subcommand == "conditions")
      run_conditions(c, out, report);
    else if (c.subcommand == "landscape")
      run_landscape(c, out, report);
    else if (c.subcommand == "solve")
      run_solve(c, out, report);
    else
      run_profiles(c, out, report);
    report["status"] = "ok";
  } catch (const ValidationError& e) {
    std::cerr << "magnls: " << e.what() << '\n' << app.get_subcommand(c.subcommand)->help();
    report["status"] = "validation_error";
    report["error"] = e.what();
    code = 1;
  } catch (const std::exception& e) {
    std::cerr << "magnls: numerical failure: " << e.what() << '\n';
    report["status"] = "numerical_failure";
    report["error"] = e.what();
    code = 2;
  }
  report["warnings"] = drain_warnings();
  manifest["exit_code"] = code;
  manifest["status"] = report["status"];
  try {
    if (fs::is_directory(out)) {
      if (code != 1) write_json(out / report_name(c.subcommand), report);
      write_json(out / "manifest.json", manifest);
    }
  } catch (const std::exception& e) {
    std::cerr << "magnls: " << e.what() << '\n';
    return code == 0 ? 1 : code;
  }
  return code;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("magnls");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace magnls::cli
