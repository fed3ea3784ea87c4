#pragma once

#include <array>
#include <cmath>

#include "magnls/common.hpp"

namespace magnls {

/// Six-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 6> kGaussNodes = {
    -0.9324695142031520278, -0.6612093864662645136, -0.2386191860831969086,
    0.2386191860831969086,  0.6612093864662645136,  0.9324695142031520278};
inline constexpr std::array<double, 6> kGaussWeights = {
    0.1713244923791703450, 0.3607615730481386076, 0.4679139345726910473,
    0.4679139345726910473, 0.3607615730481386076, 0.1713244923791703450};

template <typename F>
double gauss_legendre(F&& f, double a, double b) {
  double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) s += kGaussWeights[i] * f(c + r * kGaussNodes[i]);
  return s * r;
}

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double fa, double m, double fm, double b, double fb, double whole,
                    double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw QuadratureError(a, b, std::abs(delta) / 15.0);
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
/// Throws QuadratureError naming the worst segment when the depth budget runs out.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b);
  double m = 0.5 * (a + b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, m, fm, b, fb, whole, tol, max_depth);
}

/// Adaptive Simpson on [a, b] split into pieces no longer than max_piece, so
/// that narrow features cannot fall between the initial samples. The total
/// tolerance is shared among the pieces in proportion to their length.
template <typename F>
double piecewise_simpson(F&& f, double a, double b, double tol, double max_piece, int max_depth = 40) {
  if (a == b) return 0.0;
  double len = std::abs(b - a);
  auto pieces = static_cast<long>(std::ceil(len / max_piece));
  if (pieces < 1) pieces = 1;
  double step = (b - a) / static_cast<double>(pieces);
  double piece_tol = tol / static_cast<double>(pieces);
  double s = 0.0;
  for (long k = 0; k < pieces; ++k) {
    double lo = a + step * static_cast<double>(k);
    double hi = (k + 1 == pieces) ? b : lo + step;
    s += adaptive_simpson(f, lo, hi, piece_tol, max_depth);
  }
  return s;
}

}  // namespace magnls
