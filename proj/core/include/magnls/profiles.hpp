#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magnls/calculus.hpp"
#include "magnls/field.hpp"
#include "magnls/gauge.hpp"
#include "magnls/grid.hpp"

namespace magnls {

/// Square lattice of spacing rho centred at the origin, scanned with balls
/// of radius rho_cover.
class Discretization {
 public:
  Discretization(const Grid& grid, double rho, double rho_cover);

  double rho() const { return rho_; }
  double rho_cover() const { return rho_cover_; }
  const std::vector<Point>& points() const { return points_; }
  /// Largest number of balls containing a single grid node.
  int multiplicity() const { return multiplicity_; }
  const Grid& grid() const { return grid_; }
  /// Grid nodes inside the ball around lattice point k.
  const std::vector<std::size_t>& ball(std::size_t k) const { return balls_[k]; }

 private:
  Grid grid_;
  double rho_, rho_cover_;
  std::vector<Point> points_;
  std::vector<std::vector<std::size_t>> balls_;
  int multiplicity_ = 0;
};

struct LocalMass {
  double value = 0.0;
  Point argmax;
  std::size_t argmax_index = 0;
  /// ||u||_p^p / (||u||_{H_A}^2 sup^{1-2/p}).
  double chain_ratio = 0.0;
  int multiplicity = 0;
};

/// max over lattice points z of int_{B(z)} |u|^p. Ties go to the point of
/// smallest norm, then lexicographically smallest. `exclude` removes
/// lattice points closer than `exclude_radius` to any listed point.
LocalMass local_mass_sup(const ComplexField& u, const Discretization& xi, double p,
                         const std::vector<Point>& exclude = {}, double exclude_radius = 0.0,
                         const ParallelTransport* T = nullptr);

// ---------------------------------------------------------------------------

struct ProfileSpec {
  std::string shape = "gauss";  // gauss | sech
  double amplitude = 1.0;
  double width = 1.0;
  double phase = 0.0;
  std::vector<double> wavevector;
  /// y_k = start + k * step.
  std::vector<double> start;
  std::vector<double> step;
};

struct SyntheticSpec {
  int dim = 2;
  double L = 36.0;
  int n = 289;
  std::string field = "zero";
  int K = 8;
  double p = 4.0;
  double lambda = 1.0;
  std::vector<ProfileSpec> profiles;
  double noise_amplitude = 0.0;
  double noise_decay = 1.0;
  std::uint64_t seed = 1;
  double spreading_amplitude = 0.0;
  double spreading_width = 1.0;
  double quad_tol = kDefaultQuadTol;

  Grid grid() const { return Grid(dim, L, n); }
};

struct SyntheticSequence {
  std::vector<ComplexField> u;
  /// Unshifted profiles and their trajectories (ground truth).
  std::vector<ComplexField> profiles;
  std::vector<std::vector<Point>> trajectories;
};

/// Closed-form profile centred at the origin.
ComplexField profile_field(const ProfileSpec& spec, const Grid& grid);

SyntheticSequence synthesize_sequence(const SyntheticSpec& spec, const PotentialField& A, const Grid& grid);

// ---------------------------------------------------------------------------

struct ExtractOptions {
  double eps_mass = 1e-2;
  int max_profiles = 8;
  int tail_window = 4;
  double agree_tol = 0.05;
  /// Profile window radius (0: six decay lengths 6/sqrt(lambda)).
  double window_radius = 0.0;
  double lambda = 1.0;
  double p = 4.0;
  /// Minimal growth of |y_k| over the tail for a trajectory to count as diverging.
  double min_escape = 0.0;
  double quad_tol = kDefaultQuadTol;
  /// Window half-width and node count for the potential at infinity.
  int inf_window_n = 0;
  double a_inf_tol = 1e-6;
};

struct ProfileTerm {
  int index = 0;
  std::vector<Point> trajectory;
  ComplexField profile;
  bool convergent = true;
  double agreement = 0.0;
  double local_mass = 0.0;
  /// Samples of A_{y_k}(. + y_k) at the last tail point on the profile window.
  std::vector<RealField> a_inf;
  double a_inf_sup = 0.0;
  bool a_inf_vanishes = false;
  bool a_inf_converged = false;
  /// Continuous potential at infinity (zero field when it vanishes).
  std::optional<PotentialField> a_inf_field;
};

struct Decomposition {
  std::vector<ProfileTerm> terms;
  std::vector<ComplexField> remainders;
  std::vector<double> remainder_lp;
  std::vector<double> remainder_local_mass;
  double window_radius = 0.0;
  int tail_start = 0;
  bool success = false;
  std::vector<std::string> warnings;
};

Decomposition extract_profiles(const std::vector<ComplexField>& seq, const PotentialField& A, const Discretization& xi,
                               const ExtractOptions& opts = {});

struct SplittingReport {
  double mass_defect = 0.0;          // relative
  double mass_defect_abs = 0.0;
  double lp_last = 0.0;              // ||u_K||_p^p
  double lp_profiles = 0.0;          // sum ||v||_p^p
  double l2_slack = 0.0;             // relative
  double energy_slack = 0.0;         // relative
  double liminf_l2 = 0.0;
  double liminf_energy = 0.0;
  std::vector<double> profile_energies;
  double min_separation_start = 0.0;
  double min_separation_end = 0.0;
  bool separation_grows = true;
  std::vector<double> remainder_tail_lp;
  double permutation_defect = 0.0;
};

SplittingReport verify_decomposition(const Decomposition& dec, const std::vector<ComplexField>& seq,
                                     const PotentialField& A, const FunctionalParams& params);

/// Restriction of a field on a larger grid to a concentric smaller grid with
/// the same spacing.
ComplexField restrict_to(const ComplexField& u, const Grid& sub);

}  // namespace magnls
