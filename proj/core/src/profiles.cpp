#include "magnls/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace magnls {

namespace {

double norm2(const Point& y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return std::sqrt(s);
}

double dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<double> pow_density(const ComplexField& u, double p) {
  std::vector<double> d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double m = std::norm(u[i]);
    d[i] = p == 4.0 ? m * m : (p == 2.0 ? m : std::pow(m, 0.5 * p));
  }
  return d;
}

void window_to(ComplexField& u, double W) {
  const Grid& g = u.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x[kMaxDim];
    g.point(i, x);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += x[a] * x[a];
    if (r2 > W * W) u[i] = 0.0;
  }
}

double rel_l2(const ComplexField& a, const ComplexField& b) {
  ComplexField d = a;
  axpy(-1.0, b, d);
  double den = std::max(std::sqrt(mass(a)), std::sqrt(mass(b)));
  return den > 0.0 ? std::sqrt(mass(d)) / den : 0.0;
}

ComplexField average(const std::vector<ComplexField>& fs, std::size_t lo, std::size_t hi) {
  ComplexField out(fs[lo].grid());
  for (std::size_t k = lo; k < hi; ++k) axpy(1.0, fs[k], out);
  scale(out, 1.0 / static_cast<double>(hi - lo));
  return out;
}

}  // namespace

Discretization::Discretization(const Grid& grid, double rho, double rho_cover)
    : grid_(grid), rho_(rho), rho_cover_(rho_cover) {
  if (!(rho > 0.0)) throw ValidationError("lattice spacing rho must be positive");
  if (!(rho_cover >= rho)) throw ValidationError("covering radius must be at least rho");
  const int N = grid.dim();
  if (rho_cover < 0.5 * rho * std::sqrt(static_cast<double>(N)))
    throw ValidationError("balls of radius rho_cover do not cover the window");
  const int k = static_cast<int>(std::floor(grid.L() / rho + 1e-12));
  std::vector<int> idx(static_cast<std::size_t>(N), -k);
  while (true) {
    Point z(static_cast<std::size_t>(N));
    for (int a = 0; a < N; ++a) z[static_cast<std::size_t>(a)] = rho * idx[static_cast<std::size_t>(a)];
    points_.push_back(z);
    int a = 0;
    while (a < N && ++idx[static_cast<std::size_t>(a)] > k) idx[static_cast<std::size_t>(a++)] = -k;
    if (a == N) break;
  }
  const double h = grid.h();
  const int span = static_cast<int>(std::ceil(rho_cover / h));
  std::vector<int> count(grid.size(), 0);
  balls_.resize(points_.size());
  for (std::size_t p = 0; p < points_.size(); ++p) {
    const Point& z = points_[p];
    std::vector<int> lo(static_cast<std::size_t>(N)), hi(static_cast<std::size_t>(N)), cur(static_cast<std::size_t>(N));
    for (int a = 0; a < N; ++a) {
      auto ua = static_cast<std::size_t>(a);
      int c = static_cast<int>(std::lround((z[ua] + grid.L()) / h));
      lo[ua] = std::max(0, c - span);
      hi[ua] = std::min(grid.n() - 1, c + span);
      cur[ua] = lo[ua];
    }
    while (true) {
      double r2 = 0.0;
      for (int a = 0; a < N; ++a) {
        double d = grid.coord(cur[static_cast<std::size_t>(a)]) - z[static_cast<std::size_t>(a)];
        r2 += d * d;
      }
      if (r2 <= rho_cover * rho_cover * (1.0 + 1e-12)) {
        std::size_t id = grid.index(cur);
        balls_[p].push_back(id);
        ++count[id];
      }
      int a = 0;
      while (a < N && ++cur[static_cast<std::size_t>(a)] > hi[static_cast<std::size_t>(a)]) {
        cur[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
        ++a;
      }
      if (a == N) break;
    }
  }
  multiplicity_ = *std::max_element(count.begin(), count.end());
}

LocalMass local_mass_sup(const ComplexField& u, const Discretization& xi, double p, const std::vector<Point>& exclude,
                         double exclude_radius, const ParallelTransport* T) {
  if (u.grid() != xi.grid()) throw ValidationError("field and discretization use different grids");
  auto dens = pow_density(u, p);
  const double cell = u.grid().cell_volume();
  LocalMass lm;
  lm.multiplicity = xi.multiplicity();
  bool have = false;
  for (std::size_t k = 0; k < xi.points().size(); ++k) {
    const Point& z = xi.points()[k];
    bool skip = false;
    for (const auto& e : exclude)
      if (dist(z, e) < exclude_radius) skip = true;
    if (skip) continue;
    double s = 0.0;
    for (std::size_t id : xi.ball(k)) s += dens[id];
    s *= cell;
    bool better = !have || s > lm.value;
    if (have && s == lm.value) {
      double nz = norm2(z), nb = norm2(lm.argmax);
      better = nz < nb || (nz == nb && std::lexicographical_compare(z.begin(), z.end(), lm.argmax.begin(), lm.argmax.end()));
    }
    if (better) {
      have = true;
      lm.value = s;
      lm.argmax = z;
      lm.argmax_index = k;
    }
  }
  if (!have) lm.argmax = Point(static_cast<std::size_t>(u.grid().dim()), 0.0);
  double total = ordered_sum(dens) * cell;
  if (total > 0.0 && lm.value > 0.0) {
    ParallelTransport triv = ParallelTransport::trivial(u.grid());
    double H = energy_EA(u, T ? *T : triv) + mass(u);
    lm.chain_ratio = total / (H * std::pow(lm.value, 1.0 - 2.0 / p));
  }
  return lm;
}

ComplexField profile_field(const ProfileSpec& spec, const Grid& grid) {
  const int N = grid.dim();
  if (!(spec.width > 0.0)) throw ValidationError("profile width must be positive");
  if (spec.shape != "gauss" && spec.shape != "sech") throw ValidationError("unknown profile shape '" + spec.shape + "'");
  std::vector<double> k = spec.wavevector;
  k.resize(static_cast<std::size_t>(N), 0.0);
  return sample_complex(grid, [&](const double* x) {
    double r2 = 0.0, ph = spec.phase;
    for (int a = 0; a < N; ++a) {
      r2 += x[a] * x[a];
      ph += k[static_cast<std::size_t>(a)] * x[a];
    }
    double r = std::sqrt(r2) / spec.width;
    double m = spec.shape == "gauss" ? std::exp(-0.5 * r * r) : 1.0 / std::cosh(r);
    return std::polar(spec.amplitude * m, ph);
  });
}

SyntheticSequence synthesize_sequence(const SyntheticSpec& spec, const PotentialField& A, const Grid& grid) {
  const int N = grid.dim();
  if (spec.K < 1) throw ValidationError("sequence length K must be positive");
  if (A.dim() != N) throw ValidationError("field and grid dimensions differ");
  SyntheticSequence seq;
  for (const auto& pr : spec.profiles) {
    seq.profiles.push_back(profile_field(pr, grid));
    std::vector<double> start = pr.start, step = pr.step;
    start.resize(static_cast<std::size_t>(N), 0.0);
    step.resize(static_cast<std::size_t>(N), 0.0);
    std::vector<Point> traj;
    const double reach = pr.shape == "gauss" ? 6.0 * pr.width : 12.0 * pr.width;
    for (int k = 0; k < spec.K; ++k) {
      Point y(static_cast<std::size_t>(N));
      double sup = 0.0;
      for (int a = 0; a < N; ++a) {
        auto ua = static_cast<std::size_t>(a);
        y[ua] = start[ua] + k * step[ua];
        sup = std::max(sup, std::abs(y[ua]));
      }
      if (sup + reach > grid.L()) {
        std::ostringstream os;
        os << "profile trajectory exits the window at k=" << k << " before K=" << spec.K;
        throw ValidationError(os.str());
      }
      traj.push_back(y);
    }
    seq.trajectories.push_back(std::move(traj));
  }
  for (int k = 0; k < spec.K; ++k) {
    ComplexField u(grid);
    for (std::size_t n = 0; n < spec.profiles.size(); ++n) {
      const Point& y = seq.trajectories[n][static_cast<std::size_t>(k)];
      ShiftOp g = make_shift(A, y, grid, 0.0, spec.quad_tol, PhaseNormalization::at_base, 1e-6);
      axpy(1.0, shift_apply(g, seq.profiles[n]), u);
    }
    if (spec.spreading_amplitude != 0.0) {
      double s = k + 1.0;
      double amp = spec.spreading_amplitude * std::pow(s, -0.5 * N);
      double w = spec.spreading_width * s;
      ComplexField spread = sample_complex(grid, [&](const double* x) {
        double r2 = 0.0;
        for (int a = 0; a < N; ++a) r2 += x[a] * x[a];
        return cplx(amp * std::exp(-0.5 * r2 / (w * w)), 0.0);
      });
      axpy(1.0, spread, u);
    }
    if (spec.noise_amplitude != 0.0) {
      std::mt19937_64 rng(spec.seed + 7919ULL * static_cast<std::uint64_t>(k));
      std::normal_distribution<double> nd(0.0, 1.0);
      double amp = spec.noise_amplitude * std::pow(k + 1.0, -spec.noise_decay) / std::sqrt(2.0);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double re = nd(rng);
        double im = nd(rng);
        u[i] += amp * cplx(re, im);
      }
    }
    seq.u.push_back(std::move(u));
  }
  return seq;
}

ComplexField restrict_to(const ComplexField& u, const Grid& sub) {
  const Grid& g = u.grid();
  if (sub.dim() != g.dim() || std::abs(sub.h() - g.h()) > 1e-12 * g.h() || sub.n() > g.n())
    throw ValidationError("sub-grid must share the spacing and fit inside");
  const int off = (g.n() - sub.n()) / 2;
  ComplexField out(sub);
  std::vector<int> multi(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < sub.size(); ++i) {
    for (int a = 0; a < g.dim(); ++a) multi[static_cast<std::size_t>(a)] = sub.axis_index(i, a) + off;
    out[i] = u[g.index(multi)];
  }
  return out;
}

namespace {

Grid profile_grid(const Grid& g, double W, int n_override) {
  int half = static_cast<int>(std::ceil(W / g.h())) + 3;
  half = std::min(half, (g.n() - 1) / 2);
  if (n_override > 0) half = std::min(half, (n_override - 1) / 2);
  return Grid(g.dim(), half * g.h(), 2 * half + 1);
}

}  // namespace

Decomposition extract_profiles(const std::vector<ComplexField>& seq, const PotentialField& A, const Discretization& xi,
                               const ExtractOptions& opts) {
  if (seq.empty()) throw ValidationError("empty sequence");
  const Grid& grid = seq.front().grid();
  for (const auto& u : seq)
    if (u.grid() != grid) throw ValidationError("sequence members live on different grids");
  if (xi.grid() != grid) throw ValidationError("discretization uses another grid");
  const auto K = seq.size();
  const auto tw = static_cast<std::size_t>(opts.tail_window);
  if (opts.tail_window < 2 || K < 2 * tw) throw ValidationError("need K >= 2 * tail_window and tail_window >= 2");
  const double p = opts.p;
  const double W = opts.window_radius > 0.0 ? opts.window_radius : 6.0 / std::sqrt(opts.lambda);
  const double escape = opts.min_escape > 0.0 ? opts.min_escape : xi.rho();
  const std::size_t t0 = K - tw, mid = t0 + tw / 2;
  ParallelTransport conn(A, grid);

  Decomposition dec;
  dec.window_radius = W;
  dec.tail_start = static_cast<int>(t0);
  dec.remainders = seq;
  std::vector<std::vector<Point>> claimed(K);

  // n = 0: windowed tail average
  {
    std::vector<ComplexField> win(seq.begin(), seq.end());
    for (std::size_t k = t0; k < K; ++k) window_to(win[k], W);
    ComplexField v = average(win, t0, K);
    ComplexField va = average(win, t0, mid), vb = average(win, mid, K);
    double lm = local_mass_sup(v, xi, p).value;
    if (lm >= opts.eps_mass) {
      ProfileTerm t;
      t.index = 0;
      t.trajectory.assign(K, Point(static_cast<std::size_t>(grid.dim()), 0.0));
      t.agreement = rel_l2(va, vb);
      t.convergent = t.agreement <= opts.agree_tol;
      t.local_mass = lm;
      if (!t.convergent) dec.warnings.push_back("term 0: tail averages disagree (non-convergent)");
      for (auto& r : dec.remainders) axpy(-1.0, v, r);
      t.profile = std::move(v);
      for (auto& c : claimed) c.push_back(Point(static_cast<std::size_t>(grid.dim()), 0.0));
      dec.terms.push_back(std::move(t));
    }
  }

  bool stopped_by_mass = false;
  int next_index = 1;
  while (true) {
    std::vector<LocalMass> found(K);
    double tail_sup = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      found[k] = local_mass_sup(dec.remainders[k], xi, p, claimed[k], W);
      if (k >= t0) tail_sup = std::max(tail_sup, found[k].value);
    }
    if (tail_sup < opts.eps_mass) {
      stopped_by_mass = true;
      break;
    }
    if (next_index > opts.max_profiles) {
      dec.warnings.push_back("max_profiles reached");
      break;
    }
    bool diverging = true;
    for (std::size_t k = t0 + 1; k < K; ++k)
      if (!(norm2(found[k].argmax) > norm2(found[k - 1].argmax))) diverging = false;
    if (norm2(found[K - 1].argmax) - norm2(found[t0].argmax) < escape) diverging = false;
    if (!diverging) {
      dec.warnings.push_back("bounded trajectory rejected; extraction stopped");
      break;
    }
    ProfileTerm t;
    t.index = next_index++;
    for (std::size_t k = 0; k < K; ++k) t.trajectory.push_back(found[k].argmax);
    t.local_mass = tail_sup;
    std::vector<ShiftOp> shifts;
    for (std::size_t k = 0; k < K; ++k)
      shifts.push_back(make_shift(A, t.trajectory[k], grid, 0.0, opts.quad_tol, PhaseNormalization::at_base, 1.0));
    std::vector<ComplexField> back(K);
    for (std::size_t k = t0; k < K; ++k) {
      back[k] = shift_invert(shifts[k], dec.remainders[k]);
      window_to(back[k], W);
    }
    ComplexField v = average(back, t0, K);
    t.agreement = rel_l2(average(back, t0, mid), average(back, mid, K));
    t.convergent = t.agreement <= opts.agree_tol;
    if (!t.convergent) {
      std::ostringstream os;
      os << "term " << t.index << ": tail averages disagree (non-convergent)";
      dec.warnings.push_back(os.str());
    }
    for (std::size_t k = 0; k < K; ++k) axpy(-1.0, shift_apply(shifts[k], v), dec.remainders[k]);
    for (std::size_t k = 0; k < K; ++k) claimed[k].push_back(t.trajectory[k]);
    t.profile = std::move(v);

    std::vector<Point> tail(t.trajectory.begin() + static_cast<std::ptrdiff_t>(t0), t.trajectory.end());
    Grid pw = profile_grid(grid, W, opts.inf_window_n);
    AtInfinity inf = potential_at_infinity(A, tail, pw, opts.a_inf_tol, opts.quad_tol);
    t.a_inf = inf.a_inf;
    t.a_inf_sup = inf.a_inf_sup;
    t.a_inf_converged = inf.converged;
    t.a_inf_vanishes = inf.a_inf_sup < opts.a_inf_tol;
    t.a_inf_field = t.a_inf_vanishes ? field_library(FieldTag::zero, grid.dim(), {}) : inf.field;
    dec.terms.push_back(std::move(t));
  }

  for (const auto& r : dec.remainders) {
    dec.remainder_lp.push_back(lp_norm(r, p));
    dec.remainder_local_mass.push_back(local_mass_sup(r, xi, p).value);
  }
  bool all_ok = std::all_of(dec.terms.begin(), dec.terms.end(), [](const ProfileTerm& t) { return t.convergent; });
  dec.success = stopped_by_mass && all_ok;
  (void)conn;
  return dec;
}

SplittingReport verify_decomposition(const Decomposition& dec, const std::vector<ComplexField>& seq,
                                     const PotentialField& A, const FunctionalParams& params) {
  if (seq.size() != dec.remainders.size()) throw ValidationError("decomposition does not match the sequence");
  const Grid& grid = seq.front().grid();
  for (const auto& t : dec.terms)
    if (t.profile.grid() != grid || t.trajectory.size() != seq.size())
      throw ValidationError("decomposition does not match the sequence");
  const double p = params.p;
  const std::size_t K = seq.size();
  const auto t0 = static_cast<std::size_t>(dec.tail_start);
  ParallelTransport conn(A, grid);
  ParallelTransport free_conn = ParallelTransport::trivial(grid);
  SplittingReport r;

  r.lp_last = lp_norm_pow(seq.back(), p);
  double l2_sum = 0.0, e_sum = 0.0;
  Grid pw = profile_grid(grid, dec.window_radius, 0);
  for (const auto& t : dec.terms) {
    r.lp_profiles += lp_norm_pow(t.profile, p);
    l2_sum += mass(t.profile);
    double e;
    if (t.index == 0) {
      e = energy_EA(t.profile, conn);
    } else if (!t.a_inf_field || t.a_inf_field->is_zero()) {
      e = energy_EA(t.profile, free_conn);
    } else {
      ComplexField v = restrict_to(t.profile, pw);
      e = energy_EA(v, ParallelTransport(*t.a_inf_field, pw));
    }
    r.profile_energies.push_back(e);
    e_sum += e;
  }
  r.mass_defect_abs = std::abs(r.lp_last - r.lp_profiles);
  r.mass_defect = r.lp_last > 0.0 ? r.mass_defect_abs / r.lp_last : 0.0;

  r.liminf_l2 = INFINITY;
  r.liminf_energy = INFINITY;
  for (std::size_t k = t0; k < K; ++k) {
    r.liminf_l2 = std::min(r.liminf_l2, mass(seq[k]));
    r.liminf_energy = std::min(r.liminf_energy, energy_EA(seq[k], conn));
  }
  r.l2_slack = r.liminf_l2 > 0.0 ? (r.liminf_l2 - l2_sum) / r.liminf_l2 : 0.0;
  r.energy_slack = r.liminf_energy > 0.0 ? (r.liminf_energy - e_sum) / r.liminf_energy : 0.0;

  r.min_separation_start = INFINITY;
  r.min_separation_end = INFINITY;
  for (std::size_t a = 0; a < dec.terms.size(); ++a)
    for (std::size_t b = a + 1; b < dec.terms.size(); ++b) {
      double s0 = dist(dec.terms[a].trajectory[t0], dec.terms[b].trajectory[t0]);
      double s1 = dist(dec.terms[a].trajectory[K - 1], dec.terms[b].trajectory[K - 1]);
      r.min_separation_start = std::min(r.min_separation_start, s0);
      r.min_separation_end = std::min(r.min_separation_end, s1);
      if (!(s1 > s0)) r.separation_grows = false;
    }
  if (!std::isfinite(r.min_separation_start)) r.min_separation_start = r.min_separation_end = 0.0;
  for (std::size_t k = t0; k < K; ++k) r.remainder_tail_lp.push_back(lp_norm(dec.remainders[k], p));

  // finite sum in forward and reverse order at the last index
  std::vector<ComplexField> parts;
  for (const auto& t : dec.terms) {
    if (t.index == 0) {
      parts.push_back(t.profile);
      continue;
    }
    ShiftOp g = make_shift(A, t.trajectory[K - 1], grid, 0.0, kDefaultQuadTol, PhaseNormalization::at_base, 1.0);
    parts.push_back(shift_apply(g, t.profile));
  }
  ComplexField fwd(grid), rev(grid);
  for (std::size_t i = 0; i < parts.size(); ++i) axpy(1.0, parts[i], fwd);
  for (std::size_t i = parts.size(); i-- > 0;) axpy(1.0, parts[i], rev);
  for (std::size_t i = 0; i < grid.size(); ++i) r.permutation_defect = std::max(r.permutation_defect, std::abs(fwd[i] - rev[i]));
  return r;
}

}  // namespace magnls
