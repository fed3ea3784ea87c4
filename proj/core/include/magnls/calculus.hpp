#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "magnls/field.hpp"
#include "magnls/grid.hpp"
#include "magnls/transport.hpp"

namespace magnls {

/// Exponent p, linear coefficient lambda and an optional potential V.
struct FunctionalParams {
  double p = 4.0;
  double lambda = 1.0;
  std::optional<RealField> V;

  /// Throws ValidationError unless 2 < p < 2* and lambda > 0.
  void validate(int dim) const;
  /// Critical Sobolev exponent (infinity for N <= 2).
  static double critical_exponent(int dim);
};

/// Stencil coefficients of the staggered fourth-order difference
/// (f(x-h) - 27 f(x) + 27 f(x+h) - f(x+2h)) / (24 h) at the midpoint x + h/2.
inline constexpr double kStagger[4] = {1.0, -27.0, 27.0, -1.0};

/// Nodal covariant gradient with link phases: component a at x is
/// (e^{i th+} u(x + h e_a) - e^{-i th-} u(x - h e_a)) / (2h), equal to the
/// centered difference plus i A_a u up to O(h^2). Zero ghost values.
std::vector<ComplexField> covariant_gradient(const ComplexField& u, const ParallelTransport& T);
std::vector<ComplexField> covariant_gradient(const ComplexField& u, const PotentialField& A);

/// E_A(u) = sum over axes and midpoints of |D_a u|^2 h^N, where D_a is the
/// staggered fourth-order covariant difference.
double energy_EA(const ComplexField& u, const ParallelTransport& T);
double energy_EA(const ComplexField& u, const PotentialField& A);

/// Adjoint composition D^* D u = -Laplacian_A u, so <D^*D u, u> = E_A(u).
ComplexField kinetic(const ComplexField& u, const ParallelTransport& T);
/// -kinetic(u).
ComplexField magnetic_laplacian(const ComplexField& u, const ParallelTransport& T);

/// integral of V |u|^2 (V = lambda when absent).
double potential_energy(const ComplexField& u, const FunctionalParams& params);
double functional_J(const ComplexField& u, const ParallelTransport& T, const FunctionalParams& params);
double functional_J(const ComplexField& u, const PotentialField& A, const FunctionalParams& params);
double functional_I(const ComplexField& u, const ParallelTransport& T, const FunctionalParams& params);
double functional_I(const ComplexField& u, const PotentialField& A, const FunctionalParams& params);

/// (sum |u|^p h^N)^{1/p}.
double lp_norm(const ComplexField& u, double p);
double lp_norm_pow(const ComplexField& u, double p);

struct DiamagneticReport {
  double min_margin = 0.0;
  std::size_t violations = 0;
  double slack = 0.0;
  double energy_A = 0.0;
  double energy_modulus = 0.0;
  double integrated_gap = 0.0;
};

/// |D_A u| >= |D |u|| at interior nodes and E_A(u) - E_0(|u|) >= 0.
DiamagneticReport diamagnetic_check(const ComplexField& u, const ParallelTransport& T, double slack_const = 1.0);
DiamagneticReport diamagnetic_check(const ComplexField& u, const PotentialField& A, double slack_const = 1.0);

struct PointwiseBoundsReport {
  /// min over nodes of (|D_A u|^2 - |D u|^2 / 2 + 7 |A|^2 |u|^2 + slack).
  double worst_h1a = 0.0;
  /// min over nodes of (2 |D_A u|^2 + 14 |A|^2 |u|^2 - |D u|^2 + slack).
  double worst_h1 = 0.0;
  std::size_t h1a_violations = 0;
  std::size_t h1_violations = 0;
  double slack_const = 0.0;
  /// min/max of (E_A + lambda M) / (E_0 + M) over random bumps.
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  /// Interval the ratio must lie in: [min(1,lambda)/(2 + 14 a2), 2 max(1,lambda) + 14 a2 + lambda].
  double ratio_lower_bound = 0.0;
  double ratio_upper_bound = 0.0;
  bool ratio_ok = false;
  int bumps = 0;
};

/// Nodewise checks of the two H^1 comparison inequalities with slack
/// slack_const * h^2 * (local scale), plus the local-magnetic sandwich on
/// `bumps` random bumps drawn with `seed`.
PointwiseBoundsReport pointwise_bounds_check(const ComplexField& u, const PotentialField& A, double lambda = 1.0,
                                             int bumps = 16, std::uint64_t seed = 1, double slack_const = 4.0);

/// (int x_i/(1+|x|) |u|^p, ..., int |u|^p).
std::vector<double> eta_map(const ComplexField& u, double p);

struct Residual {
  ComplexField field;
  double norm = 0.0;
};

/// r = -Laplacian_A u + V u - |u|^{p-2} u with its L^2 norm.
Residual el_residual(const ComplexField& u, const ParallelTransport& T, const FunctionalParams& params);
Residual el_residual(const ComplexField& u, const PotentialField& A, const FunctionalParams& params);

/// Warns through diagnostics when boundary mass exceeds this fraction.
inline constexpr double kBoundaryMassWarn = 1e-6;

}  // namespace magnls
