#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "magnls/calculus.hpp"

using namespace magnls;

namespace {

constexpr double pi = std::numbers::pi;

ComplexField gaussian(const Grid& g) {
  return sample_complex(g, [&g](const double* x) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += x[a] * x[a];
    return cplx(std::exp(-0.5 * r2), 0.0);
  });
}

ComplexField random_bump(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point x = g.point(i);
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    u[i] = std::exp(-0.5 * r2) * cplx(1.0 + 0.1 * nd(rng), 0.1 * nd(rng));
  }
  return u;
}

}  // namespace

TEST_SUITE("calculus") {
  TEST_CASE("gaussian energies against closed forms") {
    Grid g(2, 8.0, 129);
    ComplexField u = gaussian(g);
    CHECK(mass(u) == doctest::Approx(pi).epsilon(1e-10));
    CHECK(energy_EA(u, parse_field("zero", 2)) == doctest::Approx(pi).epsilon(2e-5));
    // |A|^2 moments: int x_1^2 e^{-r^2} = pi / 2, int r^2 e^{-r^2} = pi
    CHECK(energy_EA(u, parse_field("landau:b=1", 2)) == doctest::Approx(1.5 * pi).epsilon(5e-5));
    CHECK(energy_EA(u, parse_field("symmetric:b=2", 2)) == doctest::Approx(2.0 * pi).epsilon(5e-5));
    Grid g3(3, 6.0, 61);
    CHECK(energy_EA(gaussian(g3), parse_field("zero", 3)) == doctest::Approx(1.5 * std::pow(pi, 1.5)).epsilon(2e-4));
  }

  TEST_CASE("energy error is fourth order") {
    auto A = parse_field("landau:b=1", 2);
    double prev = 0.0;
    for (int n : {65, 129}) {
      Grid g(2, 8.0, n);
      double err = std::abs(energy_EA(gaussian(g), A) - 1.5 * pi);
      if (prev > 0.0) CHECK(prev / err > 12.0);
      prev = err;
    }
  }

  TEST_CASE("lp norms") {
    Grid g(1, 10.0, 2001);
    ComplexField u = sample_complex(g, [](const double* x) { return cplx(std::sqrt(2.0) / std::cosh(x[0]), 0.0); });
    // int 4 sech^4 = 16 / 3
    CHECK(lp_norm_pow(u, 4.0) == doctest::Approx(16.0 / 3.0).epsilon(1e-8));
    CHECK(lp_norm(u, 4.0) == doctest::Approx(std::pow(16.0 / 3.0, 0.25)).epsilon(1e-8));
  }

  TEST_CASE("kinetic operator is the energy form") {
    Grid g(2, 4.0, 41);
    auto A = parse_field("periodic:b=0.7,L=2", 2);
    ParallelTransport T(A, g);
    ComplexField u = random_bump(g, 11);
    double e = energy_EA(u, T);
    CHECK(real_inner(kinetic(u, T), u) == doctest::Approx(e).epsilon(1e-12));
    ComplexField lap = magnetic_laplacian(u, T);
    CHECK(real_inner(lap, u) == doctest::Approx(-e).epsilon(1e-12));
  }

  TEST_CASE("discrete gauge covariance") {
    Grid g(2, 4.0, 41);
    auto A = parse_field("landau:b=0.5", 2);
    auto chi = [](const double* x) { return 0.3 * x[0] * x[1] + 0.1 * x[0] * x[0]; };
    PotentialField B(2, [&A](const double* x, double* out) {
      A.eval(x, out);
      out[0] += 0.3 * x[1] + 0.2 * x[0];
      out[1] += 0.3 * x[0];
    });
    ComplexField u = random_bump(g, 5);
    ComplexField v(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      Point x = g.point(i);
      v[i] = std::exp(cplx(0.0, -chi(x.data()))) * u[i];
    }
    CHECK(energy_EA(v, B) == doctest::Approx(energy_EA(u, A)).epsilon(1e-12));
  }

  TEST_CASE("diamagnetic inequality on random data") {
    Grid g(2, 4.0, 41);
    auto A = parse_field("gauss:b0=2,s=1", 2);
    for (unsigned s = 1; s <= 5; ++s) {
      DiamagneticReport r = diamagnetic_check(random_bump(g, s), A);
      CHECK(r.violations == 0);
      CHECK(r.integrated_gap >= 0.0);
    }
  }

  TEST_CASE("pointwise bounds and ratio sandwich") {
    Grid g(2, 4.0, 41);
    PointwiseBoundsReport r = pointwise_bounds_check(random_bump(g, 3), parse_field("landau:b=0.4", 2), 1.0, 6, 9);
    CHECK(r.h1a_violations == 0);
    CHECK(r.h1_violations == 0);
    CHECK(r.ratio_ok);
    CHECK(r.ratio_min >= r.ratio_lower_bound);
    CHECK(r.ratio_max <= r.ratio_upper_bound);
  }

  TEST_CASE("residual of the 1D soliton converges at fourth order") {
    FunctionalParams fp;
    auto zero = parse_field("zero", 1);
    double prev = 0.0;
    for (int n : {201, 401}) {
      Grid g(1, 20.0, n);
      ComplexField u = sample_complex(g, [](const double* x) { return cplx(std::sqrt(2.0) / std::cosh(x[0]), 0.0); });
      double r = el_residual(u, zero, fp).norm;
      if (prev > 0.0) CHECK(prev / r > 12.0);
      prev = r;
    }
    CHECK(prev < 1e-4);
  }

  TEST_CASE("functional identities") {
    Grid g(1, 20.0, 401);
    FunctionalParams fp;
    auto zero = parse_field("zero", 1);
    ComplexField u = sample_complex(g, [](const double* x) { return cplx(std::sqrt(2.0) / std::cosh(x[0]), 0.0); });
    double J = functional_J(u, zero, fp);
    double I = functional_I(u, zero, fp);
    CHECK(I == doctest::Approx(0.5 * J - 0.25 * lp_norm_pow(u, 4.0)).epsilon(1e-14));
    // soliton level (1/2 - 1/p) ||w||_p^p = 4/3
    CHECK(I == doctest::Approx(4.0 / 3.0).epsilon(1e-5));
    auto eta = eta_map(u, 4.0);
    REQUIRE(eta.size() == 2);
    CHECK(std::abs(eta[0]) < 1e-12);
    CHECK(eta[1] == doctest::Approx(16.0 / 3.0).epsilon(1e-8));
  }

  TEST_CASE("parameter validation") {
    FunctionalParams fp;
    fp.p = 6.0;
    CHECK_THROWS_AS(fp.validate(3), ValidationError);
    CHECK_NOTHROW(fp.validate(2));
    fp.p = 2.0;
    CHECK_THROWS_AS(fp.validate(1), ValidationError);
    fp.p = 4.0;
    fp.lambda = 0.0;
    CHECK_THROWS_AS(fp.validate(1), ValidationError);
    CHECK(FunctionalParams::critical_exponent(3) == 6.0);
    CHECK(FunctionalParams::critical_exponent(5) == doctest::Approx(10.0 / 3.0));
    CHECK(FunctionalParams::critical_exponent(2) == std::numeric_limits<double>::infinity());
  }
}
