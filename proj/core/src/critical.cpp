#include <cmath>

#include "magnls/preconditioner.hpp"
#include "magnls/solver.hpp"

namespace magnls {

namespace {

double norm(const ComplexField& v) { return std::sqrt(std::max(0.0, real_inner(v, v))); }

// Restarted GMRES over the reals for a real-linear operator on complex fields.
template <typename Op>
ComplexField gmres(const Op& op, const ComplexField& b, double tol, int restart, int max_iter, int* iterations) {
  const Grid& g = b.grid();
  ComplexField x(g);
  int total = 0;
  double bnorm = norm(b);
  if (bnorm == 0.0) {
    *iterations = 0;
    return x;
  }
  ComplexField r = b;
  while (total < max_iter) {
    double beta = norm(r);
    if (beta <= tol) break;
    std::vector<ComplexField> V;
    V.push_back(r);
    scale(V[0], 1.0 / beta);
    std::vector<std::vector<double>> H(static_cast<std::size_t>(restart + 1), std::vector<double>(static_cast<std::size_t>(restart), 0.0));
    std::vector<double> cs(static_cast<std::size_t>(restart)), sn(static_cast<std::size_t>(restart));
    std::vector<double> e(static_cast<std::size_t>(restart + 1), 0.0);
    e[0] = beta;
    int k = 0;
    for (; k < restart && total < max_iter; ++k, ++total) {
      auto uk = static_cast<std::size_t>(k);
      ComplexField w = op(V[uk]);
      for (int j = 0; j <= k; ++j) {
        auto uj = static_cast<std::size_t>(j);
        H[uj][uk] = real_inner(w, V[uj]);
        axpy(-H[uj][uk], V[uj], w);
      }
      // second orthogonalization pass for stability
      for (int j = 0; j <= k; ++j) {
        auto uj = static_cast<std::size_t>(j);
        double c = real_inner(w, V[uj]);
        H[uj][uk] += c;
        axpy(-c, V[uj], w);
      }
      double hn = norm(w);
      H[uk + 1][uk] = hn;
      for (int j = 0; j < k; ++j) {
        auto uj = static_cast<std::size_t>(j);
        double t = cs[uj] * H[uj][uk] + sn[uj] * H[uj + 1][uk];
        H[uj + 1][uk] = -sn[uj] * H[uj][uk] + cs[uj] * H[uj + 1][uk];
        H[uj][uk] = t;
      }
      double den = std::hypot(H[uk][uk], H[uk + 1][uk]);
      cs[uk] = den > 0.0 ? H[uk][uk] / den : 1.0;
      sn[uk] = den > 0.0 ? H[uk + 1][uk] / den : 0.0;
      H[uk][uk] = den;
      H[uk + 1][uk] = 0.0;
      e[uk + 1] = -sn[uk] * e[uk];
      e[uk] = cs[uk] * e[uk];
      if (hn > 0.0) {
        scale(w, 1.0 / hn);
        V.push_back(std::move(w));
      }
      if (std::abs(e[uk + 1]) <= tol || hn == 0.0) {
        ++k;
        ++total;
        break;
      }
    }
    // back substitution
    std::vector<double> yv(static_cast<std::size_t>(k), 0.0);
    for (int i = k - 1; i >= 0; --i) {
      auto ui = static_cast<std::size_t>(i);
      double s = e[ui];
      for (int j = i + 1; j < k; ++j) s -= H[ui][static_cast<std::size_t>(j)] * yv[static_cast<std::size_t>(j)];
      yv[ui] = H[ui][ui] != 0.0 ? s / H[ui][ui] : 0.0;
    }
    for (int j = 0; j < k; ++j) axpy(yv[static_cast<std::size_t>(j)], V[static_cast<std::size_t>(j)], x);
    r = b;
    axpy(-1.0, op(x), r);
    if (norm(r) <= tol) break;
  }
  *iterations = total;
  return x;
}

}  // namespace

CriticalResult critical_point_search(const PotentialField& A, const FunctionalParams& params, const ComplexField& seed,
                                     const CriticalOptions& opts) {
  const Grid& g = seed.grid();
  params.validate(g.dim());
  const double p = params.p;
  ParallelTransport T(A, g);
  double shift = params.lambda;
  if (params.V) {
    double vmin = INFINITY;
    for (double v : params.V->values()) vmin = std::min(vmin, v);
    shift = std::max(vmin, 1e-2);
  }
  FreeResolvent P(g, shift);

  auto level = [&](const ComplexField& u) { return functional_I(u, T, params); };
  auto residual = [&](const ComplexField& u) { return el_residual(u, T, params); };

  CriticalResult res;
  res.u = seed;
  Residual F = residual(res.u);
  res.stop_reason = "max_newton";
  for (int it = 0;; ++it) {
    CriticalTraceEntry te;
    te.iteration = it;
    te.level = level(res.u);
    te.residual = F.norm;
    if (F.norm < opts.tol) {
      res.trace.push_back(te);
      res.converged = true;
      res.stop_reason = "tolerance";
      break;
    }
    if (it >= opts.max_newton) {
      res.trace.push_back(te);
      break;
    }
    const ComplexField& u = res.u;
    std::vector<double> w1(g.size()), w2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      double m = std::norm(u[i]);
      double v = params.V ? (*params.V)[i] : params.lambda;
      double a = p == 4.0 ? m : std::pow(m, 0.5 * (p - 2.0));
      w1[i] = v - a;
      w2[i] = m > 0.0 ? (p - 2.0) * a / m : 0.0;
    }
    auto jac = [&](const ComplexField& d) {
      ComplexField out = kinetic(d, T);
      for (std::size_t i = 0; i < g.size(); ++i) {
        double re = u[i].real() * d[i].real() + u[i].imag() * d[i].imag();
        out[i] += w1[i] * d[i] - w2[i] * re * u[i];
      }
      return P.apply(out);
    };
    ComplexField rhs = P.apply(F.field);
    scale(rhs, -1.0);
    double eta = std::min(1e-2, std::max(1e-10, F.norm));
    int kiters = 0;
    ComplexField delta = gmres(jac, rhs, eta * norm(rhs), opts.krylov_restart, opts.krylov_max, &kiters);
    te.krylov_iterations = kiters;

    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      ComplexField trial = u;
      axpy(step, delta, trial);
      Residual Ft = residual(trial);
      if (Ft.norm <= (1.0 - 1e-4 * step) * F.norm) {
        res.u = std::move(trial);
        F = std::move(Ft);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    te.step = accepted ? step : 0.0;
    res.trace.push_back(te);
    if (!accepted) {
      res.stop_reason = "stagnation";
      break;
    }
  }
  res.residual = F.norm;
  res.level = level(res.u);
  res.trivial = lp_norm_pow(res.u, 2.0) == 0.0;
  if (opts.c_inf) res.in_bracket = res.level > *opts.c_inf && res.level < 2.0 * *opts.c_inf;
  return res;
}

}  // namespace magnls
