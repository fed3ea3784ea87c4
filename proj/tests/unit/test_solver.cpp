#include <cmath>
#include <numbers>

#include "doctest.h"
#include "magnls/solver.hpp"

using namespace magnls;

// Reference values below come from an independent DOP853 shooting run
// (rtol 1e-13) of w'' + (N-1)/r w' = w - w^3.

TEST_SUITE("solver") {
  TEST_CASE("one-dimensional soliton") {
    GroundState gs = radial_ground_state(1, 4.0, 1.0);
    CHECK(gs.u0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(gs.c_inf == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
    CHECK(gs.value(1.0) == doctest::Approx(std::sqrt(2.0) / std::cosh(1.0)).epsilon(1e-8));
  }

  TEST_CASE("planar and spatial ground states") {
    GroundState g2 = radial_ground_state(2, 4.0, 1.0);
    CHECK(g2.u0 == doctest::Approx(2.206200864650711).epsilon(1e-8));
    CHECK(g2.c_inf == doctest::Approx(5.850448262458444).epsilon(1e-7));
    GroundState g3 = radial_ground_state(3, 4.0, 1.0);
    CHECK(g3.u0 == doctest::Approx(4.3373876799770095).epsilon(1e-8));
    CHECK(g3.c_inf == doctest::Approx(18.89725130265031).epsilon(1e-7));
    CHECK(g3.value(1.0) == doctest::Approx(0.9492896668453986).epsilon(1e-7));
    CHECK(g3.nehari_residual() < 1e-8);
    CHECK(g3.ode_residual() < 1e-5);
  }

  TEST_CASE("lambda scaling") {
    // w_lambda(r) = lambda^{1/(p-2)} w_1(sqrt(lambda) r)
    GroundState a = radial_ground_state(3, 4.0, 1.0);
    GroundState b = radial_ground_state(3, 4.0, 2.0);
    CHECK(b.u0 == doctest::Approx(std::sqrt(2.0) * a.u0).epsilon(1e-8));
    // c scales as lambda^{p/(p-2) - N/2}
    CHECK(b.c_inf == doctest::Approx(std::sqrt(2.0) * a.c_inf).epsilon(1e-7));
  }

  TEST_CASE("sphere areas") {
    CHECK(sphere_area(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  }

  TEST_CASE("nehari scale is homogeneous") {
    Grid g(1, 20.0, 401);
    FunctionalParams fp;
    auto zero = parse_field("zero", 1);
    GroundState gs = radial_ground_state(1, 4.0, 1.0);
    ComplexField w = interpolate_to_grid(gs, g);
    CHECK(nehari_scale(w, zero, fp) == doctest::Approx(1.0).epsilon(1e-5));
    ComplexField v = w;
    scale(v, 3.0);
    CHECK(nehari_scale(v, zero, fp) == doctest::Approx(nehari_scale(w, zero, fp) / 3.0).epsilon(1e-13));
  }

  TEST_CASE("constrained minimization reaches the soliton quotient") {
    Grid g(1, 20.0, 401);
    FunctionalParams fp;
    MinimizeOptions o;
    o.seed_offset = {0.3};
    MinimizeResult r = minimize_constrained(parse_field("zero", 1), fp, g, o);
    // J(w) / ||w||_4^2 = ||w||_4^2 = sqrt(16/3)
    CHECK(r.value == doctest::Approx(4.0 / std::sqrt(3.0)).epsilon(1e-5));
  }

  TEST_CASE("critical point search recovers the soliton") {
    Grid g(1, 20.0, 401);
    FunctionalParams fp;
    ComplexField seed = sample_complex(g, [](const double* x) { return cplx(1.5 / std::cosh(1.1 * (x[0] - 0.2)), 0.0); });
    CriticalOptions o;
    o.c_inf = 4.0 / 3.0;
    CriticalResult r = critical_point_search(parse_field("zero", 1), fp, seed, o);
    CHECK(r.converged);
    CHECK(r.residual < 1e-8);
    CHECK(r.level == doctest::Approx(4.0 / 3.0).epsilon(1e-5));
    CHECK_FALSE(r.trivial);
  }

  TEST_CASE("lowest landau level") {
    Grid g(2, 6.0, 61);
    MinimizeOptions o;
    o.max_iter = 400;
    CHECK(lambda0_estimate(parse_field("landau:b=1", 2), g, o) == doctest::Approx(1.0).epsilon(5e-3));
  }

  TEST_CASE("conditions for the zero field") {
    Grid g(2, 6.0, 49);
    FunctionalParams fp;
    GroundState gs = radial_ground_state(2, 4.0, 1.0);
    ConditionOptions o;
    o.b_resolution = 33;
    ConditionReport r = condition_report(parse_field("zero", 2), gs, fp, g, o);
    CHECK(r.sigma == 0.0);
    CHECK(r.holds_B);
    CHECK(r.holds_A);
    CHECK(r.threshold_sigma == doctest::Approx(std::sqrt(2.0) - 1.0));
    CHECK(r.upper_bound == doctest::Approx(r.c_inf));
  }
}
