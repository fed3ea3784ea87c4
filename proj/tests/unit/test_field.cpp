#include <cmath>

#include "doctest.h"
#include "magnls/field.hpp"

using namespace magnls;

TEST_SUITE("field") {
  TEST_CASE("parsed fields evaluate to their formulas") {
    auto landau = parse_field("landau:b=0.3", 2);
    auto a = landau.eval({1.5, -2.0});
    CHECK(a[0] == 0.0);
    CHECK(a[1] == doctest::Approx(0.45).epsilon(1e-15));

    auto sym = parse_field("symmetric:b=2", 3);
    auto s = sym.eval({1.0, 0.5, 7.0});
    CHECK(s[0] == doctest::Approx(-0.5));
    CHECK(s[1] == doctest::Approx(1.0));
    CHECK(s[2] == 0.0);

    auto g = parse_field("gauss:b0=2,s=1.5", 2);
    auto v = g.eval({1.0, 1.0});
    CHECK(v[1] == doctest::Approx(2.0 * std::exp(-2.0 / 2.25)).epsilon(1e-14));
    CHECK(g.tag() == FieldTag::gaussian_decay);
    CHECK(parse_field("zero", 1).is_zero());
  }

  TEST_CASE("malformed specs are rejected") {
    CHECK_THROWS_AS(parse_field("landau", 2), ValidationError);
    CHECK_THROWS_AS(parse_field("landau:c=1", 2), ValidationError);
    CHECK_THROWS_AS(parse_field("landau:b=1", 1), ValidationError);
    CHECK_THROWS_AS(parse_field("vortex:b=1", 2), ValidationError);
    CHECK_THROWS_AS(parse_field("gauss:b0=1,s=0", 2), ValidationError);
    CHECK_THROWS_AS(parse_field("periodic:b=1,L=-2", 2), ValidationError);
  }

  TEST_CASE("curl of constant fields") {
    Window w = Window::cube(2, 3.0);
    for (const char* spec : {"landau:b=0.7", "symmetric:b=0.7"}) {
      TwoForm B = curl(parse_field(spec, 2), w, 17);
      REQUIRE(B.pairs.size() == 1);
      CHECK(B.analytic);
      CHECK(std::abs(B.sup(0, 1)) == doctest::Approx(0.7).epsilon(1e-14));
      CHECK(b_sup_norm(B) == doctest::Approx(0.7).epsilon(1e-14));
    }
    TwoForm B3 = curl(parse_field("landau:b=0.5", 3), Window::cube(3, 1.0), 5);
    CHECK(B3.pairs.size() == 3);
    CHECK(b_sup_norm(B3) == doctest::Approx(0.5));
  }

  TEST_CASE("finite-difference curl matches the analytic one") {
    auto g = parse_field("gauss:b0=1.3,s=1.2", 2);
    PotentialField fd(2, [&g](const double* x, double* out) { g.eval(x, out); });
    CHECK_FALSE(fd.has_jacobian());
    Window w = Window::cube(2, 2.5);
    auto gap = [&](int res) {
      TwoForm Ba = curl(g, w, res), Bf = curl(fd, w, res);
      CHECK_FALSE(Bf.analytic);
      double worst = 0.0;
      for (std::size_t i = 0; i < Ba.samples[0].size(); ++i)
        worst = std::max(worst, std::abs(Ba.samples[0][i] - Bf.samples[0][i]));
      return worst;
    };
    double coarse = gap(41), fine = gap(81);
    CHECK(coarse < 1e-2);
    CHECK(coarse / fine > 3.5);
    TwoForm Ba = curl(g, w, 41);
    // Peak of |d_0 A_1| = b0 * sqrt(2) / s * exp(-1/2) at |x_0| = s / sqrt(2).
    CHECK(Ba.sup(0, 1) == doctest::Approx(1.3 * std::sqrt(2.0) / 1.2 * std::exp(-0.5)).epsilon(2e-3));
  }

  TEST_CASE("translation") {
    auto A = parse_field("periodic:b=1,L=2", 2);
    auto T = translated(A, {0.25, -1.0});
    auto u = T.eval({1.0, 2.0});
    auto v = A.eval({1.25, 1.0});
    CHECK(u[0] == v[0]);
    CHECK(u[1] == v[1]);
  }
}
