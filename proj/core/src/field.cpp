#include "magnls/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace magnls {

std::string to_string(FieldTag tag) {
  switch (tag) {
    case FieldTag::zero: return "zero";
    case FieldTag::landau: return "landau";
    case FieldTag::symmetric: return "symmetric";
    case FieldTag::gaussian_decay: return "gaussian_decay";
    case FieldTag::lattice_periodic: return "lattice_periodic";
    case FieldTag::custom: return "custom";
  }
  return "custom";
}

PotentialField::PotentialField(int dim, Eval eval, Jacobian jacobian, FieldTag tag,
                               std::map<std::string, double> params)
    : dim_(dim), eval_(std::move(eval)), jacobian_(std::move(jacobian)), tag_(tag), params_(std::move(params)) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("potential dimension out of range");
  if (!eval_) throw ValidationError("potential needs an evaluator");
}

std::vector<double> PotentialField::eval(const std::vector<double>& x) const {
  std::vector<double> out(static_cast<std::size_t>(dim_));
  eval_(x.data(), out.data());
  return out;
}

void PotentialField::jacobian(const double* x, double* jac) const {
  if (!jacobian_) throw ValidationError("potential has no analytic jacobian");
  jacobian_(x, jac);
}

std::vector<double> PotentialField::jacobian(const std::vector<double>& x) const {
  std::vector<double> out(static_cast<std::size_t>(dim_ * dim_));
  jacobian(x.data(), out.data());
  return out;
}

std::string PotentialField::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(tag_);
  char sep = ':';
  for (const auto& [k, v] : params_) {
    os << sep << k << '=' << v;
    sep = ',';
  }
  return os.str();
}

Window Window::cube(int dim, double L) {
  return Window{std::vector<double>(static_cast<std::size_t>(dim), -L), std::vector<double>(static_cast<std::size_t>(dim), L)};
}

std::size_t TwoForm::node_count() const {
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(resolution);
  return c;
}

void TwoForm::node(std::size_t idx, double* x) const {
  for (int a = 0; a < dim; ++a) {
    auto i = idx % static_cast<std::size_t>(resolution);
    idx /= static_cast<std::size_t>(resolution);
    double lo = window.lo[static_cast<std::size_t>(a)], hi = window.hi[static_cast<std::size_t>(a)];
    x[a] = lo + (hi - lo) * static_cast<double>(i) / (resolution - 1);
  }
}

double TwoForm::sup(int m, int n) const {
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (pairs[k].first == m && pairs[k].second == n) return sup_norms[k];
  return 0.0;
}

namespace {

double b_component(const PotentialField& A, const double* x, int m, int n, std::vector<double>& jac) {
  A.jacobian(x, jac.data());
  int N = A.dim();
  return jac[static_cast<std::size_t>(m * N + n)] - jac[static_cast<std::size_t>(n * N + m)];
}

// Polishes a sampled maximum of |B_mn| by coordinate-wise golden search
// in the surrounding cell, clipped to the window.
double refine_sup(const PotentialField& A, const Window& w, std::vector<double> x, std::vector<double> cell,
                  int m, int n, double start) {
  int N = A.dim();
  std::vector<double> jac(static_cast<std::size_t>(N * N));
  double best = start;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int a = 0; a < N; ++a) {
      auto ua = static_cast<std::size_t>(a);
      double lo = std::max(w.lo[ua], x[ua] - cell[ua]);
      double hi = std::min(w.hi[ua], x[ua] + cell[ua]);
      if (!(hi > lo)) continue;
      auto f = [&](double t) {
        std::vector<double> p = x;
        p[ua] = t;
        return std::abs(b_component(A, p.data(), m, n, jac));
      };
      double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
      double fc = f(c), fd = f(d);
      for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
        if (fc > fd) {
          hi = d; d = c; fd = fc;
          c = hi - gr * (hi - lo); fc = f(c);
        } else {
          lo = c; c = d; fc = fd;
          d = lo + gr * (hi - lo); fd = f(d);
        }
      }
      double t = 0.5 * (lo + hi);
      double ft = f(t);
      if (ft > best) {
        best = ft;
        x[ua] = t;
      }
      cell[ua] *= 0.5;
    }
  }
  return best;
}

}  // namespace

TwoForm curl(const PotentialField& A, const Window& window, int resolution) {
  if (resolution < 3) throw ValidationError("curl needs resolution >= 3");
  const int N = A.dim();
  if (static_cast<int>(window.lo.size()) != N || static_cast<int>(window.hi.size()) != N)
    throw ValidationError("curl window dimension mismatch");
  for (int a = 0; a < N; ++a)
    if (!(window.hi[static_cast<std::size_t>(a)] > window.lo[static_cast<std::size_t>(a)]))
      throw ValidationError("curl window is empty");

  TwoForm B;
  B.dim = N;
  B.window = window;
  B.resolution = resolution;
  B.analytic = A.has_jacobian();
  for (int m = 0; m < N; ++m)
    for (int n = m + 1; n < N; ++n) B.pairs.emplace_back(m, n);
  const std::size_t count = B.node_count();
  B.samples.assign(B.pairs.size(), std::vector<double>(count, 0.0));
  B.sup_norms.assign(B.pairs.size(), 0.0);
  if (B.pairs.empty()) return B;

  std::vector<double> spacing(static_cast<std::size_t>(N));
  for (int a = 0; a < N; ++a)
    spacing[static_cast<std::size_t>(a)] = (window.hi[static_cast<std::size_t>(a)] - window.lo[static_cast<std::size_t>(a)]) / (resolution - 1);

  if (B.analytic) {
    parallel_for(count, [&](std::size_t i) {
      double x[kMaxDim];
      double jac[kMaxDim * kMaxDim];
      B.node(i, x);
      A.jacobian(x, jac);
      for (std::size_t k = 0; k < B.pairs.size(); ++k) {
        auto [m, n] = B.pairs[k];
        B.samples[k][i] = jac[m * N + n] - jac[n * N + m];
      }
    });
  } else {
    std::vector<double> Avals(count * static_cast<std::size_t>(N));
    parallel_for(count, [&](std::size_t i) {
      double x[kMaxDim];
      B.node(i, x);
      A.eval(x, &Avals[i * static_cast<std::size_t>(N)]);
    });
    std::vector<std::size_t> stride(static_cast<std::size_t>(N));
    std::size_t s = 1;
    for (int a = 0; a < N; ++a) {
      stride[static_cast<std::size_t>(a)] = s;
      s *= static_cast<std::size_t>(resolution);
    }
    auto deriv = [&](std::size_t i, int comp, int axis) {
      auto ua = static_cast<std::size_t>(axis);
      int j = static_cast<int>((i / stride[ua]) % static_cast<std::size_t>(resolution));
      auto at = [&](int jj) { return Avals[(i + (static_cast<std::size_t>(jj) - static_cast<std::size_t>(j)) * stride[ua]) * static_cast<std::size_t>(N) + static_cast<std::size_t>(comp)]; };
      double h = spacing[ua];
      if (j == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
      if (j == resolution - 1) return (3.0 * at(j) - 4.0 * at(j - 1) + at(j - 2)) / (2.0 * h);
      return (at(j + 1) - at(j - 1)) / (2.0 * h);
    };
    parallel_for(count, [&](std::size_t i) {
      for (std::size_t k = 0; k < B.pairs.size(); ++k) {
        auto [m, n] = B.pairs[k];
        B.samples[k][i] = deriv(i, m, n) - deriv(i, n, m);
      }
    });
  }

  for (std::size_t k = 0; k < B.pairs.size(); ++k) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double v = std::abs(B.samples[k][i]);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (B.analytic && best > 0.0) {
      std::vector<double> x(static_cast<std::size_t>(N));
      B.node(arg, x.data());
      best = refine_sup(A, window, x, spacing, B.pairs[k].first, B.pairs[k].second, best);
    }
    B.sup_norms[k] = best;
  }
  return B;
}

double b_sup_norm(const TwoForm& B) {
  double s = 0.0;
  for (double v : B.sup_norms) s += v * v;
  return std::sqrt(s);
}

namespace {

double require(const std::map<std::string, double>& params, const std::string& key, const std::string& tag) {
  auto it = params.find(key);
  if (it == params.end()) throw ValidationError("field '" + tag + "' is missing parameter '" + key + "'");
  if (!std::isfinite(it->second)) throw ValidationError("field parameter '" + key + "' is not finite");
  return it->second;
}

void need_plane(int dim, const std::string& tag) {
  if (dim < 2) throw ValidationError("field '" + tag + "' needs dimension >= 2");
}

void zero_fill(int N, double* out) { std::fill(out, out + N, 0.0); }

}  // namespace

PotentialField field_library(FieldTag tag, int dim, const std::map<std::string, double>& params) {
  const int N = dim;
  switch (tag) {
    case FieldTag::zero:
      return PotentialField(
          N, [N](const double*, double* out) { zero_fill(N, out); },
          [N](const double*, double* jac) { zero_fill(N * N, jac); }, tag, {});
    case FieldTag::landau: {
      need_plane(N, "landau");
      double b = require(params, "b", "landau");
      return PotentialField(
          N,
          [N, b](const double* x, double* out) {
            zero_fill(N, out);
            out[1] = b * x[0];
          },
          [N, b](const double*, double* jac) {
            zero_fill(N * N, jac);
            jac[1 * N + 0] = b;
          },
          tag, {{"b", b}});
    }
    case FieldTag::symmetric: {
      need_plane(N, "symmetric");
      double b = require(params, "b", "symmetric");
      return PotentialField(
          N,
          [N, b](const double* x, double* out) {
            zero_fill(N, out);
            out[0] = -0.5 * b * x[1];
            out[1] = 0.5 * b * x[0];
          },
          [N, b](const double*, double* jac) {
            zero_fill(N * N, jac);
            jac[0 * N + 1] = -0.5 * b;
            jac[1 * N + 0] = 0.5 * b;
          },
          tag, {{"b", b}});
    }
    case FieldTag::gaussian_decay: {
      need_plane(N, "gaussian_decay");
      double b0 = require(params, "b0", "gaussian_decay");
      double s = require(params, "s", "gaussian_decay");
      if (!(s > 0.0)) throw ValidationError("gaussian_decay width s must be positive");
      double inv = 1.0 / (s * s);
      return PotentialField(
          N,
          [N, b0, inv](const double* x, double* out) {
            double r2 = 0.0;
            for (int a = 0; a < N; ++a) r2 += x[a] * x[a];
            zero_fill(N, out);
            out[1] = b0 * std::exp(-r2 * inv);
          },
          [N, b0, inv](const double* x, double* jac) {
            double r2 = 0.0;
            for (int a = 0; a < N; ++a) r2 += x[a] * x[a];
            double g = b0 * std::exp(-r2 * inv);
            zero_fill(N * N, jac);
            for (int a = 0; a < N; ++a) jac[1 * N + a] = -2.0 * x[a] * inv * g;
          },
          tag, {{"b0", b0}, {"s", s}});
    }
    case FieldTag::lattice_periodic: {
      need_plane(N, "lattice_periodic");
      double b = require(params, "b", "lattice_periodic");
      double P = require(params, "period", "lattice_periodic");
      if (!(P > 0.0)) throw ValidationError("lattice_periodic period must be positive");
      double k = 2.0 * std::numbers::pi / P;
      return PotentialField(
          N,
          [N, b, k](const double* x, double* out) {
            zero_fill(N, out);
            out[1] = b * x[0] + (b / k) * std::sin(k * x[0]) * std::cos(k * x[1]);
          },
          [N, b, k](const double* x, double* jac) {
            zero_fill(N * N, jac);
            jac[1 * N + 0] = b + b * std::cos(k * x[0]) * std::cos(k * x[1]);
            jac[1 * N + 1] = -b * std::sin(k * x[0]) * std::sin(k * x[1]);
          },
          tag, {{"b", b}, {"period", P}});
    }
    case FieldTag::custom:
      break;
  }
  throw ValidationError("unknown field tag");
}

PotentialField parse_field(const std::string& spec, int dim) {
  std::string name = spec;
  std::map<std::string, double> kv;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw ValidationError("malformed field parameter '" + item + "'");
      std::string key = item.substr(0, eq);
      std::string val = item.substr(eq + 1);
      try {
        std::size_t used = 0;
        double v = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
        if (!kv.emplace(key, v).second) throw ValidationError("duplicate field parameter '" + key + "'");
      } catch (const std::logic_error&) {
        throw ValidationError("field parameter '" + key + "' is not a number: '" + val + "'");
      }
    }
  }
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : kv) {
      bool ok = false;
      for (const char* allowed : keys) ok = ok || k == allowed;
      if (!ok) throw ValidationError("field '" + name + "' does not take parameter '" + k + "'");
    }
  };
  if (name == "zero") {
    only({});
    return field_library(FieldTag::zero, dim, {});
  }
  if (name == "landau") {
    only({"b"});
    return field_library(FieldTag::landau, dim, kv);
  }
  if (name == "symmetric") {
    only({"b"});
    return field_library(FieldTag::symmetric, dim, kv);
  }
  if (name == "gauss") {
    only({"b0", "s"});
    return field_library(FieldTag::gaussian_decay, dim, kv);
  }
  if (name == "periodic") {
    only({"b", "L"});
    std::map<std::string, double> p;
    if (kv.count("b")) p["b"] = kv["b"];
    if (kv.count("L")) p["period"] = kv["L"];
    return field_library(FieldTag::lattice_periodic, dim, p);
  }
  throw ValidationError("unknown field '" + name + "'");
}

PotentialField translated(const PotentialField& A, const Point& y) {
  const int N = A.dim();
  if (static_cast<int>(y.size()) != N) throw ValidationError("translation dimension mismatch");
  auto shift = [N, y](const double* x, double* buf) {
    for (int a = 0; a < N; ++a) buf[a] = x[a] + y[static_cast<std::size_t>(a)];
  };
  PotentialField::Jacobian jac;
  if (A.has_jacobian())
    jac = [A, shift](const double* x, double* out) {
      double p[kMaxDim];
      shift(x, p);
      A.jacobian(p, out);
    };
  FieldTag tag = A.is_zero() ? FieldTag::zero : FieldTag::custom;
  return PotentialField(
      N,
      [A, shift](const double* x, double* out) {
        double p[kMaxDim];
        shift(x, p);
        A.eval(p, out);
      },
      jac, tag);
}

}  // namespace magnls
