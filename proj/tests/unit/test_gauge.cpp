#include <cmath>
#include <numbers>

#include "doctest.h"
#include "magnls/calculus.hpp"
#include "magnls/gauge.hpp"

using namespace magnls;

namespace {

// Staircase phase of A = (0, b0 exp(-|x|^2/s^2)) written with erf.
double gauss_phase(double b0, double s, const Point& y, const Point& x) {
  double c = b0 * std::exp(-y[0] * y[0] / (s * s)) * s * std::sqrt(std::numbers::pi) / 2.0;
  return -c * (std::erf(x[1] / s) - std::erf(y[1] / s));
}

}  // namespace

TEST_SUITE("gauge") {
  TEST_CASE("landau phase and corrected potential in closed form") {
    const double b = 0.8;
    auto A = parse_field("landau:b=0.8", 2);
    Grid g(2, 3.0, 25);
    Point y = {1.25, -0.5};
    GaugePhase ph = rephase_field(A, y, g);
    CorrectedPotential Ay = corrected_potential(A, ph, g, Construction::direct_formula);
    double e_phi = 0.0, e_a = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Point x = g.point(i);
      e_phi = std::max(e_phi, std::abs(ph.samples[i] + b * y[0] * (x[1] - y[1])));
      e_a = std::max(e_a, std::abs(Ay.components[0][i]) + std::abs(Ay.components[1][i] - b * (x[0] - y[0])));
    }
    CHECK(e_phi < 1e-10);
    CHECK(e_a < 1e-10);
  }

  TEST_CASE("gaussian phase against erf") {
    auto A = parse_field("gauss:b0=1.5,s=0.9", 2);
    Grid g(2, 2.0, 17);
    Point y = {0.5, -1.0};
    GaugePhase ph = rephase_field(A, y, g, 1e-12);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      worst = std::max(worst, std::abs(ph.samples[i] - gauss_phase(1.5, 0.9, y, g.point(i))));
    CHECK(worst < 1e-10);
    double x[2] = {1.0, 0.75};
    CHECK(phase_at(A, y, x, 1e-12) == doctest::Approx(gauss_phase(1.5, 0.9, y, {1.0, 0.75})).epsilon(1e-10));
  }

  TEST_CASE("constructions agree and vanish at the base point") {
    auto A = parse_field("periodic:b=0.6,L=2", 2);
    Grid g(2, 2.0, 41);
    Point y = {0.5, 1.0};
    GaugePhase ph = rephase_field(A, y, g);
    auto d = corrected_potential(A, ph, g, Construction::direct_formula);
    auto f = corrected_potential(A, ph, g, Construction::grad_of_phase);
    double worst = 0.0;
    for (int m = 0; m < 2; ++m)
      for (std::size_t i = 0; i < g.size(); ++i)
        if (!g.on_boundary(i))
          worst = std::max(worst, std::abs(d.components[m][i] - f.components[m][i]));
    CHECK(worst < 5e-3);
    double out[2];
    corrected_potential_at(A, y, y.data(), out);
    CHECK(std::abs(out[0]) + std::abs(out[1]) < 1e-12);
    CHECK(slab_error(d, g) < 1e-12);
  }

  TEST_CASE("linear bound holds for constant fields") {
    auto A = parse_field("symmetric:b=1", 2);
    Grid g(2, 3.0, 31);
    GaugePhase ph = rephase_field(A, {1.0, -1.0}, g);
    auto Ay = corrected_potential(A, ph, g);
    TwoForm B = curl(A, Window::cube(2, 3.0), 31);
    LinearBoundReport r = linear_bound_check(Ay, g, B);
    CHECK(r.violations == 0);
    CHECK(r.component_violations == 0);
    CHECK(r.b_sup == doctest::Approx(1.0));
  }

  TEST_CASE("shifts preserve mass and invert") {
    auto A = parse_field("landau:b=0.5", 2);
    Grid g(2, 6.0, 49);
    ComplexField u = sample_complex(g, [](const double* x) {
      return std::exp(-(x[0] * x[0] + x[1] * x[1])) * cplx(1.0, 0.3 * x[0]);
    });
    ShiftOp s = make_shift(A, {1.0, -0.5}, g, 0.4);
    ComplexField v = shift_apply(s, u);
    CHECK(mass(v) == doctest::Approx(mass(u)).epsilon(1e-12));
    ComplexField w = shift_invert(s, v);
    // compare away from the strip that leaves the window and returns as zeros
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Point x = g.point(i);
      if (std::abs(x[0]) <= 4.5 && std::abs(x[1]) <= 4.5) worst = std::max(worst, std::abs(w[i] - u[i]));
    }
    CHECK(worst < 1e-14);
    // a lattice shift moves the modulus rigidly
    std::size_t src = g.index({24, 24}), dst = g.index({28, 22});
    CHECK(std::abs(v[dst]) == doctest::Approx(std::abs(u[src])).epsilon(1e-15));
  }

  TEST_CASE("shift errors") {
    auto A = parse_field("zero", 2);
    Grid g(2, 2.0, 17);
    CHECK_THROWS_AS(make_shift(A, {0.1, 0.0}, g), ValidationError);
    ComplexField u(g, cplx(1.0, 0.0));
    ShiftOp s = make_shift(A, {1.0, 0.0}, g);
    CHECK_THROWS_AS(shift_apply(s, u), MassLossError);
  }

  TEST_CASE("composition constant of a constant field") {
    const double b = 1.0;
    auto A = parse_field("landau:b=1", 2);
    Grid g(2, 4.0, 33);
    Point y1 = {1.0, 0.5}, y2 = {-0.5, 1.5};
    CompositionReport r = composition_constant(A, y1, y2, g, 0.3);
    CHECK(r.admissible);
    CHECK(r.spread < 1e-8);
    // staircase phase -b y_1 (x_2 - y_2), normalized at y/2
    double cross = y1[0] * y2[1] - y1[1] * y2[0];
    CHECK(r.gamma == doctest::Approx(-0.5 * b * cross).epsilon(1e-9));
    CHECK(r.inverse_roundtrip_error < 1e-13);
  }

  TEST_CASE("potential at infinity of a decaying field vanishes") {
    auto A = parse_field("gauss:b0=1,s=1", 2);
    std::vector<Point> traj = {{10.0, 0.0}, {15.0, 0.0}, {20.0, 0.0}};
    AtInfinity inf = potential_at_infinity(A, traj, Grid(2, 2.0, 9));
    CHECK(inf.converged);
    CHECK(inf.a_inf_sup < 1e-6);
  }
}
