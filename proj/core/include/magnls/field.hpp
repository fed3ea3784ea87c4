#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "magnls/common.hpp"

namespace magnls {

enum class FieldTag { zero, landau, symmetric, gaussian_decay, lattice_periodic, custom };

std::string to_string(FieldTag tag);

/// Magnetic potential A: R^N -> covectors, with optional analytic Jacobian.
/// Immutable after construction; safe to evaluate concurrently.
class PotentialField {
 public:
  /// out[m] = A_m(x).
  using Eval = std::function<void(const double* x, double* out)>;
  /// jac[m * N + n] = d_n A_m(x).
  using Jacobian = std::function<void(const double* x, double* jac)>;

  PotentialField() = default;
  PotentialField(int dim, Eval eval, Jacobian jacobian = {}, FieldTag tag = FieldTag::custom,
                 std::map<std::string, double> params = {});

  int dim() const { return dim_; }
  FieldTag tag() const { return tag_; }
  const std::map<std::string, double>& params() const { return params_; }
  bool has_jacobian() const { return static_cast<bool>(jacobian_); }
  /// True when A vanishes identically (lets callers skip phase work).
  bool is_zero() const { return tag_ == FieldTag::zero; }

  void eval(const double* x, double* out) const { eval_(x, out); }
  std::vector<double> eval(const std::vector<double>& x) const;
  void jacobian(const double* x, double* jac) const;
  std::vector<double> jacobian(const std::vector<double>& x) const;

  /// Human-readable description, e.g. "landau:b=0.2".
  std::string describe() const;

 private:
  int dim_ = 0;
  Eval eval_;
  Jacobian jacobian_;
  FieldTag tag_ = FieldTag::custom;
  std::map<std::string, double> params_;
};

/// Axis-aligned box [lo_a, hi_a].
struct Window {
  std::vector<double> lo;
  std::vector<double> hi;
  static Window cube(int dim, double L);
};

/// Sampled magnetic 2-form B_mn = d_n A_m - d_m A_n, m < n.
struct TwoForm {
  int dim = 0;
  Window window;
  int resolution = 0;
  /// Ordered pairs (m, n) with m < n; samples[k] belongs to pairs[k].
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::vector<double>> samples;
  std::vector<double> sup_norms;
  bool analytic = false;

  std::size_t node_count() const;
  void node(std::size_t idx, double* x) const;
  /// Sup norm of component (m, n), m < n (0 when N < 2).
  double sup(int m, int n) const;
};

/// Samples B on a uniform lattice of the window with `resolution` nodes per
/// axis. Uses the analytic Jacobian when present, otherwise second-order
/// centered differences (one-sided at the window boundary).
TwoForm curl(const PotentialField& A, const Window& window, int resolution);

/// sqrt(sum_{m<n} ||B_mn||_inf^2).
double b_sup_norm(const TwoForm& B);

/// Built-in potentials. Components beyond the first two are zero.
///   zero; landau {b}; symmetric {b}; gaussian_decay {b0, s};
///   lattice_periodic {b, period}.
PotentialField field_library(FieldTag tag, int dim, const std::map<std::string, double>& params);

/// Parses the CLI grammar: zero | landau:b=f | symmetric:b=f |
/// gauss:b0=f,s=f | periodic:b=f,L=f.
PotentialField parse_field(const std::string& spec, int dim);

/// A shifted copy x -> A(x + y).
PotentialField translated(const PotentialField& A, const Point& y);

}  // namespace magnls
