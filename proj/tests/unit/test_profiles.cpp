#include <cmath>
#include <numbers>

#include "doctest.h"
#include "magnls/profiles.hpp"

using namespace magnls;

namespace {

// Brute-force count of lattice balls around each node.
int brute_multiplicity(const Grid& g, double rho, double rc) {
  const int k = static_cast<int>(std::floor(g.L() / rho + 1e-12));
  int best = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point x = g.point(i);
    int c = 0;
    for (int a = -k; a <= k; ++a)
      for (int b = -k; b <= k; ++b) {
        double dx = x[0] - a * rho, dy = x[1] - b * rho;
        if (std::sqrt(dx * dx + dy * dy) <= rc * (1.0 + 1e-12)) ++c;
      }
    best = std::max(best, c);
  }
  return best;
}

}  // namespace

TEST_SUITE("profiles") {
  TEST_CASE("discretization covers the window") {
    Grid g(2, 3.0, 25);
    Discretization xi(g, 1.0, 1.0);
    CHECK(xi.points().size() == 49);
    CHECK(xi.multiplicity() == brute_multiplicity(g, 1.0, 1.0));
    CHECK_THROWS_AS(Discretization(g, 1.0, 0.5), ValidationError);
    CHECK_THROWS_AS(Discretization(g, 0.0, 1.0), ValidationError);
  }

  TEST_CASE("local mass of a gaussian") {
    Grid g(2, 6.0, 97);
    Discretization xi(g, 1.0, 1.0);
    ComplexField u = sample_complex(g, [](const double* x) {
      double dx = x[0] - 3.0;
      return cplx(std::exp(-0.5 * (dx * dx + x[1] * x[1])), 0.0);
    });
    LocalMass lm = local_mass_sup(u, xi, 4.0);
    REQUIRE(lm.argmax.size() == 2);
    CHECK(lm.argmax[0] == doctest::Approx(3.0));
    CHECK(lm.argmax[1] == doctest::Approx(0.0));
    double direct = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Point x = g.point(i);
      double dx = x[0] - 3.0;
      if (dx * dx + x[1] * x[1] <= 1.0 + 1e-12) direct += std::pow(std::abs(u[i]), 4.0) * g.cell_volume();
    }
    CHECK(lm.value == doctest::Approx(direct).epsilon(1e-12));
    // continuum value pi/2 (1 - e^{-2})
    CHECK(lm.value == doctest::Approx(0.5 * std::numbers::pi * (1.0 - std::exp(-2.0))).epsilon(0.05));

    LocalMass ex = local_mass_sup(u, xi, 4.0, {{3.0, 0.0}}, 0.5);
    CHECK(ex.value < lm.value);
    CHECK(std::abs(ex.argmax[0] - 3.0) + std::abs(ex.argmax[1]) == doctest::Approx(1.0));
  }

  TEST_CASE("ties go to the origin") {
    Grid g(2, 3.0, 25);
    Discretization xi(g, 1.0, 1.0);
    LocalMass lm = local_mass_sup(ComplexField(g), xi, 4.0);
    CHECK(lm.value == 0.0);
    CHECK(lm.argmax == Point{0.0, 0.0});
  }

  TEST_CASE("restriction keeps node values") {
    Grid big(2, 4.0, 33), small(2, 2.0, 17);
    ComplexField u = sample_complex(big, [](const double* x) { return cplx(x[0], x[1]); });
    ComplexField r = restrict_to(u, small);
    for (std::size_t i = 0; i < small.size(); ++i) {
      Point x = small.point(i);
      CHECK(r[i] == cplx(x[0], x[1]));
    }
    CHECK_THROWS_AS(restrict_to(u, Grid(2, 2.0, 9)), ValidationError);
  }

  TEST_CASE("a stationary profile is recovered") {
    SyntheticSpec spec;
    spec.dim = 2;
    spec.L = 12.0;
    spec.n = 97;
    spec.K = 8;
    ProfileSpec ps;
    ps.amplitude = 1.0;
    ps.width = 1.0;
    ps.start = {0.0, 0.0};
    ps.step = {0.0, 0.0};
    spec.profiles.push_back(ps);
    Grid g = spec.grid();
    auto A = parse_field("zero", 2);
    SyntheticSequence seq = synthesize_sequence(spec, A, g);
    REQUIRE(seq.u.size() == 8);
    Discretization xi(g, 1.0, 1.0);
    Decomposition dec = extract_profiles(seq.u, A, xi);
    CHECK(dec.success);
    REQUIRE(dec.terms.size() == 1);
    CHECK(dec.terms[0].index == 0);
    CHECK(dec.remainder_lp.back() < 1e-6);
    FunctionalParams fp;
    SplittingReport rep = verify_decomposition(dec, seq.u, A, fp);
    CHECK(rep.mass_defect < 1e-10);
  }

  TEST_CASE("a trajectory leaving the window is rejected") {
    SyntheticSpec spec;
    spec.dim = 2;
    spec.L = 10.0;
    spec.n = 41;
    spec.K = 4;
    ProfileSpec ps;
    ps.start = {0.0, 0.0};
    ps.step = {3.0, 0.0};
    spec.profiles.push_back(ps);
    CHECK_THROWS_AS(synthesize_sequence(spec, parse_field("zero", 2), spec.grid()), ValidationError);
  }
}
