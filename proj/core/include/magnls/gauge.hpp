#pragma once

#include <vector>

#include "magnls/field.hpp"
#include "magnls/grid.hpp"

namespace magnls {

enum class PhaseNormalization { at_base, at_half };
enum class Construction { grad_of_phase, direct_formula };

std::string to_string(PhaseNormalization n);
std::string to_string(Construction c);

inline constexpr double kDefaultQuadTol = 1e-10;

/// Re-phasing scalar phi_y sampled on a grid.
struct GaugePhase {
  Point base_point;
  PhaseNormalization normalization = PhaseNormalization::at_base;
  RealField samples;
  double quad_tol = kDefaultQuadTol;
};

/// Staircase phase at a single point:
///   phi_y(x) = -sum_m int_{y_m}^{x_m} A_m(y_1..y_{m-1}, t, x_{m+1}..x_N) dt
/// plus the normalization constant.
double phase_at(const PotentialField& A, const Point& y, const double* x, double quad_tol = kDefaultQuadTol,
                PhaseNormalization normalization = PhaseNormalization::at_base);

/// phi_y on every node. Each staircase term is accumulated along grid lines
/// from per-edge adaptive Simpson integrals, so every node value carries an
/// absolute quadrature error below quad_tol.
GaugePhase rephase_field(const PotentialField& A, const Point& y, const Grid& grid,
                         double quad_tol = kDefaultQuadTol,
                         PhaseNormalization normalization = PhaseNormalization::at_base);

/// A_y = A + grad phi_y on a grid.
struct CorrectedPotential {
  Point base_point;
  std::vector<RealField> components;
  Construction construction = Construction::grad_of_phase;
};

/// A_y at one point from the differentiated staircase sum (needs the Jacobian).
void corrected_potential_at(const PotentialField& A, const Point& y, const double* x, double* out,
                            double quad_tol = kDefaultQuadTol);

CorrectedPotential corrected_potential(const PotentialField& A, const GaugePhase& phase, const Grid& grid,
                                       Construction construction = Construction::direct_formula);

/// The field x -> A_y(x) (direct formula when A has a Jacobian, otherwise
/// centered differences of phase_at).
PotentialField corrected_potential_field(const PotentialField& A, const Point& y,
                                         double quad_tol = kDefaultQuadTol);

/// The field x -> A_y(x + y), the potential seen from the shifted frame.
PotentialField shifted_corrected_field(const PotentialField& A, const Point& y,
                                       double quad_tol = kDefaultQuadTol);

struct LinearBoundReport {
  double b_sup = 0.0;
  /// max over nodes of |A_y(x)| - ||B|| |x - y|.
  double max_violation = 0.0;
  std::size_t violations = 0;
  /// max over nodes and n of |(A_y)_n| - sum_{m<n} ||B_mn|| |x_m - y_m|.
  double max_component_violation = 0.0;
  std::size_t component_violations = 0;
  double tol = 0.0;
  std::size_t nodes = 0;
};

/// Checks |A_y(x)| <= ||B||_inf |x - y| and the componentwise staircase bound.
LinearBoundReport linear_bound_check(const CorrectedPotential& Ay, const Grid& grid, const TwoForm& B,
                                     double tol = 1e-8);

/// max |(A_y)_n(x)| over nodes with x_m = y_m for all m < n (nodes within
/// 1e-9 h of the slab). Zero when no node lies on any slab beyond n = 1.
double slab_error(const CorrectedPotential& Ay, const Grid& grid);

/// max over interior nodes and pairs m < n of |centered-difference curl of
/// A_y - B_mn| with B from the analytic Jacobian of A (finite differences of
/// A otherwise).
double curl_error(const CorrectedPotential& Ay, const PotentialField& A, const Grid& grid);

/// Magnetic shift g_{y,theta} u = e^{i theta} e^{i phi_y} u(. - y) restricted to a lattice vector y.
struct ShiftOp {
  Point y;
  double theta = 0.0;
  GaugePhase phase;
  std::vector<long> offset;
  /// Largest fraction of mass allowed to leave the window.
  double max_loss = 1e-8;
};

ShiftOp make_shift(const PotentialField& A, const Point& y, const Grid& grid, double theta = 0.0,
                   double quad_tol = kDefaultQuadTol,
                   PhaseNormalization normalization = PhaseNormalization::at_base, double max_loss = 1e-8);

ComplexField shift_apply(const ShiftOp& g, const ComplexField& u);
ComplexField shift_invert(const ShiftOp& g, const ComplexField& v);

struct AtInfinity {
  /// A_{y_k}(. + y_k) on the window for every trajectory point.
  std::vector<std::vector<RealField>> samples;
  /// Sup distance between consecutive samples.
  std::vector<double> consecutive_distance;
  std::vector<RealField> a_inf;
  double a_inf_sup = 0.0;
  bool converged = false;
  double tol = 0.0;
  /// Continuous version of the last sample.
  PotentialField field;
};

AtInfinity potential_at_infinity(const PotentialField& A, const std::vector<Point>& trajectory, const Grid& window,
                                 double tol = 1e-6, double quad_tol = kDefaultQuadTol);

struct CompositionReport {
  double gamma = 0.0;
  double spread = 0.0;
  /// gamma(y1, -y1).
  double gamma_antipodal = 0.0;
  /// max |u - g_{-y,-theta} g_{y,theta} u| on untruncated nodes of a test bump.
  double inverse_roundtrip_error = 0.0;
  double tol = 0.0;
  bool admissible = false;
};

/// gamma(x) = phi_{y1+y2}(x) - phi_{y1}(x - y2) - phi_{y2}(x) under at_half normalization.
CompositionReport composition_constant(const PotentialField& A, const Point& y1, const Point& y2, const Grid& grid,
                                       double theta = 0.0, double tol = 1e-8, double quad_tol = kDefaultQuadTol);

}  // namespace magnls
