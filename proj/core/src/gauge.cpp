#include "magnls/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "magnls/quadrature.hpp"

namespace magnls {

std::string to_string(PhaseNormalization n) { return n == PhaseNormalization::at_base ? "at_base" : "at_half"; }

std::string to_string(Construction c) {
  return c == Construction::grad_of_phase ? "grad_of_phase" : "direct_formula";
}

namespace {

constexpr double kMaxPiece = 0.25;

bool is_origin(const Point& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; });
}

void check_dim(const PotentialField& A, const Point& y) {
  if (static_cast<int>(y.size()) != A.dim()) throw ValidationError("base point dimension does not match the potential");
  for (double v : y)
    if (!std::isfinite(v)) throw ValidationError("base point is not finite");
}

// Staircase sum at x with base y, no normalization constant.
double staircase(const PotentialField& A, const Point& y, const double* x, double tol) {
  const int N = A.dim();
  double p[kMaxDim], out[kMaxDim];
  double phi = 0.0;
  for (int m = 0; m < N; ++m) {
    for (int a = 0; a < m; ++a) p[a] = y[static_cast<std::size_t>(a)];
    for (int a = m + 1; a < N; ++a) p[a] = x[a];
    auto g = [&](double t) {
      p[m] = t;
      A.eval(p, out);
      return out[m];
    };
    phi -= piecewise_simpson(g, y[static_cast<std::size_t>(m)], x[m], tol / N, kMaxPiece);
  }
  return phi;
}

double normalization_constant(const PotentialField& A, const Point& y, PhaseNormalization normalization,
                              double tol) {
  if (normalization == PhaseNormalization::at_base) return 0.0;
  Point half(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) half[a] = 0.5 * y[a];
  return staircase(A, y, half.data(), tol);
}

// Values of int_{ya}^{t_j} g(t) dt at the nodes t_j = t0 + j h, j < n.
std::vector<double> line_antiderivative(const std::function<double(double)>& g, double ya, double t0, double h,
                                        int n, double seg_tol) {
  std::vector<double> F(static_cast<std::size_t>(n), 0.0);
  std::vector<double> seg(static_cast<std::size_t>(n - 1));
  for (int j = 0; j + 1 < n; ++j) {
    double a = t0 + h * j;
    seg[static_cast<std::size_t>(j)] = adaptive_simpson(g, a, a + h, seg_tol);
  }
  const double tlast = t0 + h * (n - 1);
  int anchor;
  if (ya <= t0) {
    anchor = 0;
    F[0] = piecewise_simpson(g, ya, t0, seg_tol * std::ceil((t0 - ya) / h + 1.0), h);
  } else if (ya >= tlast) {
    anchor = n - 1;
    F[static_cast<std::size_t>(anchor)] = piecewise_simpson(g, ya, tlast, seg_tol * std::ceil((ya - tlast) / h + 1.0), h);
  } else {
    anchor = static_cast<int>(std::floor((ya - t0) / h));
    anchor = std::clamp(anchor, 0, n - 2);
    double ta = t0 + h * anchor;
    F[static_cast<std::size_t>(anchor)] = (ya == ta) ? 0.0 : adaptive_simpson(g, ya, ta, seg_tol);
  }
  for (int j = anchor; j + 1 < n; ++j) F[static_cast<std::size_t>(j + 1)] = F[static_cast<std::size_t>(j)] + seg[static_cast<std::size_t>(j)];
  for (int j = anchor; j > 0; --j) F[static_cast<std::size_t>(j - 1)] = F[static_cast<std::size_t>(j)] - seg[static_cast<std::size_t>(j - 1)];
  return F;
}

}  // namespace

double phase_at(const PotentialField& A, const Point& y, const double* x, double quad_tol,
                PhaseNormalization normalization) {
  check_dim(A, y);
  if (is_origin(y) || A.is_zero()) return 0.0;
  return staircase(A, y, x, quad_tol) - normalization_constant(A, y, normalization, quad_tol);
}

GaugePhase rephase_field(const PotentialField& A, const Point& y, const Grid& grid, double quad_tol,
                         PhaseNormalization normalization) {
  check_dim(A, y);
  if (grid.dim() != A.dim()) throw ValidationError("grid and potential dimensions differ");
  if (!(quad_tol > 0.0)) throw ValidationError("quad_tol must be positive");
  GaugePhase ph{y, normalization, RealField(grid, 0.0), quad_tol};
  if (is_origin(y) || A.is_zero()) return ph;

  const int N = grid.dim();
  const int n = grid.n();
  const double h = grid.h();
  const double t0 = grid.coord(0);
  auto& phi = ph.samples.values();

  for (int m = 0; m < N; ++m) {
    const double ym = y[static_cast<std::size_t>(m)];
    double outside = std::max({0.0, t0 - ym, ym - grid.coord(n - 1)});
    double pieces = (n - 1) + std::ceil(outside / h) + 2.0;
    double seg_tol = quad_tol / (N * pieces);
    // Term m depends on axes m..N-1; lines run along axis m.
    std::size_t lines = 1;
    for (int a = m + 1; a < N; ++a) lines *= static_cast<std::size_t>(n);
    std::vector<double> term(lines * static_cast<std::size_t>(n));
    parallel_for(lines, [&](std::size_t c) {
      double p[kMaxDim], out[kMaxDim];
      for (int a = 0; a < m; ++a) p[a] = y[static_cast<std::size_t>(a)];
      std::size_t rest = c;
      for (int a = m + 1; a < N; ++a) {
        p[a] = grid.coord(static_cast<int>(rest % static_cast<std::size_t>(n)));
        rest /= static_cast<std::size_t>(n);
      }
      auto g = [&](double t) {
        p[m] = t;
        A.eval(p, out);
        return out[m];
      };
      auto F = line_antiderivative(g, ym, t0, h, n, seg_tol);
      std::copy(F.begin(), F.end(), term.begin() + static_cast<std::ptrdiff_t>(c * static_cast<std::size_t>(n)));
    });
    const std::size_t s = grid.stride(m);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) phi[idx] -= term[idx / s];
  }
  double c = normalization_constant(A, y, normalization, quad_tol);
  if (c != 0.0)
    for (auto& v : phi) v -= c;
  return ph;
}

void corrected_potential_at(const PotentialField& A, const Point& y, const double* x, double* out, double quad_tol) {
  const int N = A.dim();
  A.eval(x, out);
  if (is_origin(y) || A.is_zero()) return;
  if (!A.has_jacobian()) throw ValidationError("direct formula requires an analytic jacobian");
  double p[kMaxDim], tmp[kMaxDim], jac[kMaxDim * kMaxDim];
  for (int n = 0; n < N; ++n) {
    for (int a = 0; a < n; ++a) p[a] = y[static_cast<std::size_t>(a)];
    for (int a = n; a < N; ++a) p[a] = x[a];
    A.eval(p, tmp);
    double v = out[n] - tmp[n];
    for (int m = 0; m < n; ++m) {
      for (int a = 0; a < m; ++a) p[a] = y[static_cast<std::size_t>(a)];
      for (int a = m + 1; a < N; ++a) p[a] = x[a];
      auto g = [&](double t) {
        p[m] = t;
        A.jacobian(p, jac);
        return jac[m * N + n];
      };
      v -= piecewise_simpson(g, y[static_cast<std::size_t>(m)], x[m], quad_tol / N, kMaxPiece);
    }
    out[n] = v;
  }
}

CorrectedPotential corrected_potential(const PotentialField& A, const GaugePhase& phase, const Grid& grid,
                                       Construction construction) {
  const int N = grid.dim();
  CorrectedPotential Ay{phase.base_point, std::vector<RealField>(static_cast<std::size_t>(N), RealField(grid, 0.0)),
                        construction};
  if (construction == Construction::direct_formula) {
    if (!A.has_jacobian()) throw ValidationError("direct_formula requested for a potential without jacobian");
    parallel_for(grid.size(), [&](std::size_t idx) {
      double x[kMaxDim], out[kMaxDim];
      grid.point(idx, x);
      corrected_potential_at(A, phase.base_point, x, out, phase.quad_tol);
      for (int a = 0; a < N; ++a) Ay.components[static_cast<std::size_t>(a)][idx] = out[a];
    });
    return Ay;
  }
  if (phase.samples.grid() != grid) throw ValidationError("phase is sampled on a different grid");
  const auto& phi = phase.samples;
  const int n = grid.n();
  const double h = grid.h();
  parallel_for(grid.size(), [&](std::size_t idx) {
    double x[kMaxDim], out[kMaxDim];
    grid.point(idx, x);
    A.eval(x, out);
    for (int a = 0; a < N; ++a) {
      std::size_t s = grid.stride(a);
      int j = grid.axis_index(idx, a);
      double d;
      if (j == 0)
        d = (-3.0 * phi[idx] + 4.0 * phi[idx + s] - phi[idx + 2 * s]) / (2.0 * h);
      else if (j == n - 1)
        d = (3.0 * phi[idx] - 4.0 * phi[idx - s] + phi[idx - 2 * s]) / (2.0 * h);
      else
        d = (phi[idx + s] - phi[idx - s]) / (2.0 * h);
      Ay.components[static_cast<std::size_t>(a)][idx] = out[a] + d;
    }
  });
  return Ay;
}

PotentialField corrected_potential_field(const PotentialField& A, const Point& y, double quad_tol) {
  check_dim(A, y);
  const int N = A.dim();
  if (A.is_zero()) return A;
  if (A.has_jacobian())
    return PotentialField(N, [A, y, quad_tol](const double* x, double* out) {
      corrected_potential_at(A, y, x, out, quad_tol);
    });
  return PotentialField(N, [A, y, quad_tol, N](const double* x, double* out) {
    const double d = 1e-4;
    double p[kMaxDim];
    A.eval(x, out);
    for (int a = 0; a < N; ++a) {
      std::copy(x, x + N, p);
      p[a] = x[a] + d;
      double fp = phase_at(A, y, p, quad_tol);
      p[a] = x[a] - d;
      double fm = phase_at(A, y, p, quad_tol);
      out[a] += (fp - fm) / (2.0 * d);
    }
  });
}

PotentialField shifted_corrected_field(const PotentialField& A, const Point& y, double quad_tol) {
  return translated(corrected_potential_field(A, y, quad_tol), y);
}

LinearBoundReport linear_bound_check(const CorrectedPotential& Ay, const Grid& grid, const TwoForm& B, double tol) {
  const int N = grid.dim();
  LinearBoundReport r;
  r.b_sup = b_sup_norm(B);
  r.tol = tol;
  r.nodes = grid.size();
  r.max_violation = -INFINITY;
  r.max_component_violation = -INFINITY;
  const Point& y = Ay.base_point;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double x[kMaxDim];
    grid.point(idx, x);
    double norm2 = 0.0, dist2 = 0.0;
    for (int a = 0; a < N; ++a) {
      double v = Ay.components[static_cast<std::size_t>(a)][idx];
      norm2 += v * v;
      double d = x[a] - y[static_cast<std::size_t>(a)];
      dist2 += d * d;
    }
    double viol = std::sqrt(norm2) - r.b_sup * std::sqrt(dist2);
    r.max_violation = std::max(r.max_violation, viol);
    if (viol > tol) ++r.violations;
    for (int n = 0; n < N; ++n) {
      double bound = 0.0;
      for (int m = 0; m < n; ++m) bound += B.sup(m, n) * std::abs(x[m] - y[static_cast<std::size_t>(m)]);
      double cv = std::abs(Ay.components[static_cast<std::size_t>(n)][idx]) - bound;
      r.max_component_violation = std::max(r.max_component_violation, cv);
      if (cv > tol) ++r.component_violations;
    }
  }
  return r;
}

double slab_error(const CorrectedPotential& Ay, const Grid& grid) {
  const int N = grid.dim();
  const Point& y = Ay.base_point;
  const double eps = 1e-9 * grid.h();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double x[kMaxDim];
    grid.point(idx, x);
    for (int n = 0; n < N; ++n) {
      if (n > 0 && std::abs(x[n - 1] - y[static_cast<std::size_t>(n - 1)]) > eps) break;
      worst = std::max(worst, std::abs(Ay.components[static_cast<std::size_t>(n)][idx]));
    }
  }
  return worst;
}

double curl_error(const CorrectedPotential& Ay, const PotentialField& A, const Grid& grid) {
  const int N = grid.dim();
  if (N < 2) return 0.0;
  const double h = grid.h();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    bool interior = true;
    for (int a = 0; a < N; ++a) {
      int j = grid.axis_index(idx, a);
      interior = interior && j > 0 && j < grid.n() - 1;
    }
    if (!interior) continue;
    double x[kMaxDim], jac[kMaxDim * kMaxDim];
    grid.point(idx, x);
    if (A.has_jacobian()) {
      A.jacobian(x, jac);
    } else {
      const double d = 1e-5;
      double p[kMaxDim], fp[kMaxDim], fm[kMaxDim];
      for (int n = 0; n < N; ++n) {
        std::copy(x, x + N, p);
        p[n] = x[n] + d;
        A.eval(p, fp);
        p[n] = x[n] - d;
        A.eval(p, fm);
        for (int m = 0; m < N; ++m) jac[m * N + n] = (fp[m] - fm[m]) / (2.0 * d);
      }
    }
    for (int m = 0; m < N; ++m)
      for (int n = m + 1; n < N; ++n) {
        const auto& Am = Ay.components[static_cast<std::size_t>(m)];
        const auto& An = Ay.components[static_cast<std::size_t>(n)];
        std::size_t sm = grid.stride(m), sn = grid.stride(n);
        double fd = (Am[idx + sn] - Am[idx - sn] - An[idx + sm] + An[idx - sm]) / (2.0 * h);
        double exact = jac[m * N + n] - jac[n * N + m];
        worst = std::max(worst, std::abs(fd - exact));
      }
  }
  return worst;
}

ShiftOp make_shift(const PotentialField& A, const Point& y, const Grid& grid, double theta, double quad_tol,
                   PhaseNormalization normalization, double max_loss) {
  check_dim(A, y);
  ShiftOp g;
  g.y = y;
  g.theta = theta;
  g.max_loss = max_loss;
  g.offset.resize(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) {
    double k = std::round(y[a] / grid.h());
    if (std::abs(y[a] - k * grid.h()) > 1e-9 * std::max(1.0, std::abs(y[a])))
      throw ValidationError("shift vector is not a lattice vector of the grid");
    g.offset[a] = static_cast<long>(k);
  }
  g.phase = rephase_field(A, y, grid, quad_tol, normalization);
  return g;
}

namespace {

// dst[x] = factor(x) * src[x - sign*offset]; returns the mass fraction of src
// that falls outside the window.
ComplexField lattice_move(const ShiftOp& g, const ComplexField& src, int sign) {
  const Grid& grid = src.grid();
  if (g.phase.samples.grid() != grid) throw ValidationError("shift was built for a different grid");
  const int N = grid.dim();
  const long n = grid.n();
  ComplexField dst(grid, cplx(0.0, 0.0));
  double total = 0.0, lost = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double m = std::norm(src[idx]);
    total += m;
    std::size_t target = 0;
    bool inside = true;
    for (int a = N - 1; a >= 0; --a) {
      long j = grid.axis_index(idx, a) + sign * g.offset[static_cast<std::size_t>(a)];
      if (j < 0 || j >= n) {
        inside = false;
        break;
      }
      target = target * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
    }
    if (!inside) {
      lost += m;
      continue;
    }
    // phase evaluated at the point where the shifted value lives in the image of g_y
    std::size_t at = sign > 0 ? target : idx;
    cplx f = std::polar(1.0, g.theta + g.phase.samples[at]);
    dst[target] = sign > 0 ? f * src[idx] : std::conj(f) * src[idx];
  }
  double frac = total > 0.0 ? lost / total : 0.0;
  if (frac > g.max_loss) throw MassLossError(frac, g.max_loss);
  return dst;
}

}  // namespace

ComplexField shift_apply(const ShiftOp& g, const ComplexField& u) { return lattice_move(g, u, +1); }

ComplexField shift_invert(const ShiftOp& g, const ComplexField& v) { return lattice_move(g, v, -1); }

AtInfinity potential_at_infinity(const PotentialField& A, const std::vector<Point>& trajectory, const Grid& window,
                                 double tol, double quad_tol) {
  if (trajectory.size() < 2) throw ValidationError("trajectory needs at least two points");
  double prev = -1.0;
  for (const auto& y : trajectory) {
    check_dim(A, y);
    double r = 0.0;
    for (double v : y) r += v * v;
    r = std::sqrt(r);
    if (!(r > prev)) throw ValidationError("trajectory is not diverging (|y_k| must increase strictly)");
    prev = r;
  }
  const int N = A.dim();
  AtInfinity res;
  res.tol = tol;
  for (const auto& y : trajectory) {
    PotentialField f = shifted_corrected_field(A, y, quad_tol);
    std::vector<RealField> comps(static_cast<std::size_t>(N), RealField(window, 0.0));
    parallel_for(window.size(), [&](std::size_t idx) {
      double x[kMaxDim], out[kMaxDim];
      window.point(idx, x);
      f.eval(x, out);
      for (int a = 0; a < N; ++a) comps[static_cast<std::size_t>(a)][idx] = out[a];
    });
    if (!res.samples.empty()) {
      double d = 0.0;
      const auto& last = res.samples.back();
      for (int a = 0; a < N; ++a)
        for (std::size_t i = 0; i < window.size(); ++i)
          d = std::max(d, std::abs(comps[static_cast<std::size_t>(a)][i] - last[static_cast<std::size_t>(a)][i]));
      res.consecutive_distance.push_back(d);
    }
    res.samples.push_back(std::move(comps));
    res.field = f;
  }
  res.a_inf = res.samples.back();
  for (const auto& c : res.a_inf)
    for (double v : c.values()) res.a_inf_sup = std::max(res.a_inf_sup, std::abs(v));
  res.converged = res.consecutive_distance.back() < tol;
  return res;
}

namespace {

double gamma_stats(const PotentialField& A, const Point& y1, const Point& y2, const Grid& grid, double quad_tol,
                   double* spread) {
  const int N = grid.dim();
  Point sum(y1.size());
  for (std::size_t a = 0; a < y1.size(); ++a) sum[a] = y1[a] + y2[a];
  auto p12 = rephase_field(A, sum, grid, quad_tol, PhaseNormalization::at_half);
  auto p2 = rephase_field(A, y2, grid, quad_tol, PhaseNormalization::at_half);
  std::vector<double> gam(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    double x[kMaxDim];
    grid.point(idx, x);
    for (int a = 0; a < N; ++a) x[a] -= y2[static_cast<std::size_t>(a)];
    double p1 = phase_at(A, y1, x, quad_tol, PhaseNormalization::at_half);
    gam[idx] = p12.samples[idx] - p1 - p2.samples[idx];
  });
  double mean = ordered_sum(gam) / static_cast<double>(gam.size());
  double s = 0.0;
  for (double v : gam) s = std::max(s, std::abs(v - mean));
  if (spread) *spread = s;
  return mean;
}

}  // namespace

CompositionReport composition_constant(const PotentialField& A, const Point& y1, const Point& y2, const Grid& grid,
                                       double theta, double tol, double quad_tol) {
  check_dim(A, y1);
  check_dim(A, y2);
  CompositionReport r;
  r.tol = tol;
  r.gamma = gamma_stats(A, y1, y2, grid, quad_tol, &r.spread);
  Point neg(y1.size());
  for (std::size_t a = 0; a < y1.size(); ++a) neg[a] = -y1[a];
  r.gamma_antipodal = gamma_stats(A, y1, neg, grid, quad_tol, nullptr);
  r.admissible = r.spread <= tol;

  // g_{-y,-theta} g_{y,theta} u on a bump centred at the origin
  const double width = std::max(grid.L() / 8.0, 2.0 * grid.h());
  ComplexField u = sample_complex(grid, [&](const double* x) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) r2 += x[a] * x[a];
    return cplx(std::exp(-r2 / (2.0 * width * width)), 0.0);
  });
  try {
    auto g = make_shift(A, y1, grid, theta, quad_tol, PhaseNormalization::at_half, 1.0);
    auto ginv = make_shift(A, neg, grid, -theta, quad_tol, PhaseNormalization::at_half, 1.0);
    ComplexField v = shift_apply(ginv, shift_apply(g, u));
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (v[i] != cplx(0.0, 0.0)) err = std::max(err, std::abs(v[i] - u[i]));
    r.inverse_roundtrip_error = err;
  } catch (const ValidationError&) {
    r.inverse_roundtrip_error = std::nan("");
  }
  return r;
}

}  // namespace magnls
