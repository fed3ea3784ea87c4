#include "magnls/transport.hpp"

#include "magnls/quadrature.hpp"

namespace magnls {

ParallelTransport::ParallelTransport(const PotentialField& A, const Grid& g) : grid_(g) {
  if (A.dim() != g.dim()) throw ValidationError("potential and grid dimensions differ");
  const int N = g.dim();
  links_.assign(static_cast<std::size_t>(N), {});
  factors_.assign(static_cast<std::size_t>(N), {});
  if (A.is_zero()) return;
  trivial_ = false;
  const double h = g.h();
  for (int a = 0; a < N; ++a) {
    auto& lk = links_[static_cast<std::size_t>(a)];
    lk.assign(g.size(), 0.0);
    parallel_for(g.size(), [&](std::size_t idx) {
      if (g.axis_index(idx, a) == g.n() - 1) return;
      double x[kMaxDim], out[kMaxDim];
      g.point(idx, x);
      double x0 = x[a];
      lk[idx] = gauss_legendre(
          [&](double t) {
            x[a] = t;
            A.eval(x, out);
            return out[a];
          },
          x0, x0 + h);
    });
  }
  accumulate();
}

ParallelTransport ParallelTransport::trivial(const Grid& g) {
  ParallelTransport t;
  t.grid_ = g;
  t.links_.assign(static_cast<std::size_t>(g.dim()), {});
  t.factors_.assign(static_cast<std::size_t>(g.dim()), {});
  return t;
}

ParallelTransport ParallelTransport::from_links(const Grid& g, std::vector<std::vector<double>> links) {
  if (static_cast<int>(links.size()) != g.dim()) throw ValidationError("link set dimension mismatch");
  for (const auto& l : links)
    if (l.size() != g.size()) throw ValidationError("link set size mismatch");
  ParallelTransport t;
  t.grid_ = g;
  t.trivial_ = false;
  t.links_ = std::move(links);
  t.factors_.assign(static_cast<std::size_t>(g.dim()), {});
  t.accumulate();
  return t;
}

void ParallelTransport::accumulate() {
  const Grid& g = grid_;
  const int N = g.dim();
  const int n = g.n();
  for (int a = 0; a < N; ++a) {
    auto& f = factors_[static_cast<std::size_t>(a)];
    const auto& lk = links_[static_cast<std::size_t>(a)];
    f.assign(g.size(), cplx(1.0, 0.0));
    const std::size_t s = g.stride(a);
    parallel_for(g.line_count(), [&](std::size_t line) {
      std::size_t start = g.line_start(a, line);
      double theta = 0.0;
      for (int j = 0; j < n; ++j) {
        std::size_t idx = start + static_cast<std::size_t>(j) * s;
        f[idx] = std::polar(1.0, theta);
        theta += lk[idx];
      }
    });
  }
}

}  // namespace magnls
