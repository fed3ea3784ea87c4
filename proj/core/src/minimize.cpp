#include <cmath>
#include <deque>

#include "magnls/preconditioner.hpp"
#include "magnls/solver.hpp"

namespace magnls {

namespace {

struct Evaluation {
  double value = 0.0;
  ComplexField grad;
};

class Quotient {
 public:
  Quotient(const ParallelTransport& T, const FunctionalParams& params) : T_(T), params_(params) {}

  // R(u) = J(u) / ||u||_p^2 and its L^2 gradient.
  Evaluation operator()(const ComplexField& u) const {
    ComplexField Hu = kinetic(u, T_);
    const double p = params_.p;
    double J = 0.0, M = 0.0;
    ComplexField nl(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
      double v = params_.V ? (*params_.V)[i] : params_.lambda;
      Hu[i] += v * u[i];
      J += Hu[i].real() * u[i].real() + Hu[i].imag() * u[i].imag();
      double m = std::norm(u[i]);
      double w = p == 2.0 ? 1.0 : (p == 4.0 ? m : std::pow(m, 0.5 * (p - 2.0)));
      nl[i] = w * u[i];
      M += w * m;
    }
    const double cell = u.grid().cell_volume();
    J *= cell;
    M *= cell;
    const double M2p = std::pow(M, 2.0 / p);
    Evaluation e{J / M2p, ComplexField(u.grid())};
    const double a = 2.0 / M2p, b = 2.0 / M2p * J / M;
    for (std::size_t i = 0; i < u.size(); ++i) e.grad[i] = a * Hu[i] - b * nl[i];
    return e;
  }

 private:
  const ParallelTransport& T_;
  const FunctionalParams& params_;
};

void normalize(ComplexField& u, double p) {
  double n = lp_norm(u, p);
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("iterate lost its norm");
  scale(u, 1.0 / n);
}

std::vector<double> centroid(const ComplexField& u, double* dist) {
  const Grid& g = u.grid();
  const int N = g.dim();
  std::vector<double> c(static_cast<std::size_t>(N), 0.0);
  double tot = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double m = std::norm(u[i]);
    if (m == 0.0) continue;
    double x[kMaxDim];
    g.point(i, x);
    for (int a = 0; a < N; ++a) c[static_cast<std::size_t>(a)] += x[a] * m;
    tot += m;
  }
  double d = 0.0;
  for (auto& v : c) {
    v /= tot;
    d += v * v;
  }
  *dist = std::sqrt(d);
  return c;
}

}  // namespace

MinimizeResult minimize_constrained(const PotentialField& A, const FunctionalParams& params, const Grid& grid,
                                    const MinimizeOptions& opts) {
  if (params.p != 2.0) params.validate(grid.dim());
  if (!(params.lambda > 0.0)) throw ValidationError("lambda must be positive");
  if (opts.max_iter < 1) throw ValidationError("max_iter must be positive");
  const double p = params.p;
  ParallelTransport T(A, grid);
  Quotient R(T, params);
  double shift = params.lambda;
  if (params.V) {
    double vmin = INFINITY;
    for (double v : params.V->values()) vmin = std::min(vmin, v);
    shift = std::max(vmin, 1e-2);
  }
  FreeResolvent P(grid, shift);

  ComplexField u;
  if (opts.seed) {
    if (opts.seed->grid() != grid) throw ValidationError("seed lives on another grid");
    u = *opts.seed;
  } else {
    std::vector<double> off = opts.seed_offset;
    off.resize(static_cast<std::size_t>(grid.dim()), 0.0);
    u = sample_complex(grid, [&](const double* x) {
      double r2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) {
        double d = x[a] - off[static_cast<std::size_t>(a)];
        r2 += d * d;
      }
      return cplx(std::exp(-0.5 * r2), 0.0);
    });
  }
  normalize(u, p);
  Evaluation cur = R(u);

  MinimizeResult res;
  auto record = [&](int it) {
    TraceEntry t;
    t.iteration = it;
    t.value = cur.value;
    t.centroid = centroid(u, &t.centroid_distance);
    res.trace.push_back(std::move(t));
  };
  record(0);

  std::deque<std::pair<ComplexField, ComplexField>> pairs;  // (s, y)
  std::deque<double> rho;
  std::vector<double> history{cur.value};
  int ascents = 0;
  int it = 0;
  res.stop_reason = "max_iter";
  bool first = true;
  for (it = 1; it <= opts.max_iter; ++it) {
    // two-loop recursion with the free resolvent as initial inverse metric
    ComplexField q = cur.grad;
    std::vector<double> alpha(pairs.size());
    for (std::size_t k = pairs.size(); k-- > 0;) {
      alpha[k] = rho[k] * real_inner(pairs[k].first, q);
      axpy(-alpha[k], pairs[k].second, q);
    }
    ComplexField d = P.apply(q);
    double gamma = 0.5 * opts.step;
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      ComplexField Py = P.apply(y);
      gamma = real_inner(s, y) / real_inner(y, Py);
    }
    scale(d, gamma);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      double beta = rho[k] * real_inner(pairs[k].second, d);
      axpy(alpha[k] - beta, pairs[k].first, d);
    }
    scale(d, -1.0);
    double slope = real_inner(cur.grad, d);
    if (!(slope < 0.0)) {
      pairs.clear();
      rho.clear();
      d = P.apply(cur.grad);
      scale(d, -0.5 * opts.step);
      slope = real_inner(cur.grad, d);
    }
    // preconditioned gradient norm
    double gnorm = std::sqrt(std::max(0.0, real_inner(cur.grad, P.apply(cur.grad))));
    if (gnorm < opts.grad_tol) {
      res.converged = true;
      res.stop_reason = "gradient";
      break;
    }

    double step = 1.0;
    bool accepted = false;
    ComplexField trial;
    Evaluation next;
    for (int ls = 0; ls < 40; ++ls) {
      trial = u;
      axpy(step, d, trial);
      normalize(trial, p);
      next = R(trial);
      if (next.value <= cur.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!pairs.empty() || !first) {
        pairs.clear();
        rho.clear();
        first = true;
        continue;
      }
      res.converged = true;
      res.stop_reason = "line_search";
      break;
    }
    first = false;
    if (next.value > cur.value * (1.0 + opts.ascent_tol) && ++ascents > opts.max_ascents)
      throw NumericalError("constrained descent diverged: value increased repeatedly");

    ComplexField s = trial;
    axpy(-1.0, u, s);
    ComplexField y = next.grad;
    axpy(-1.0, cur.grad, y);
    double sy = real_inner(s, y);
    if (sy > 1e-14 * std::sqrt(real_inner(s, s) * real_inner(y, y))) {
      pairs.emplace_back(std::move(s), std::move(y));
      rho.push_back(1.0 / sy);
      if (static_cast<int>(pairs.size()) > opts.memory) {
        pairs.pop_front();
        rho.pop_front();
      }
    }
    u = std::move(trial);
    cur = std::move(next);
    history.push_back(cur.value);
    if (it % std::max(1, opts.trace_every) == 0) record(it);

    if (static_cast<int>(history.size()) > opts.stall_window) {
      double old = history[history.size() - 1 - static_cast<std::size_t>(opts.stall_window)];
      if (old - cur.value <= opts.stall_tol * std::abs(cur.value)) {
        res.converged = true;
        res.stop_reason = "stall";
        break;
      }
    }
  }
  res.iterations = std::min(it, opts.max_iter);
  if (res.trace.back().iteration != res.iterations) record(res.iterations);
  res.value = cur.value;
  res.u = std::move(u);
  res.centroid = centroid(res.u, &res.centroid_distance);
  return res;
}

double lambda0_estimate(const PotentialField& A, const Grid& grid, const MinimizeOptions& opts) {
  FunctionalParams params{2.0, 1.0, {}};
  return minimize_constrained(A, params, grid, opts).value - 1.0;
}

}  // namespace magnls
