#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace gsq::poly {

/// Horner evaluation of coeffs[0] x^N + ... + coeffs[N].
template <std::size_t N>
double evaluate(const std::array<double, N>& coeffs, double x) {
  double acc = 0.0;
  for (double c : coeffs) acc = acc * x + c;
  return acc;
}

namespace detail {

inline std::vector<double> real_roots_quadratic(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a)};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0};
  return {q / a, c / q};
}

// Monic depressed-cubic solution of x³ + a x² + b x + c.
inline std::vector<double> real_roots_monic_cubic(double a, double b, double c) {
  const double q = (a * a - 3.0 * b) / 9.0;
  const double r = (a * (2.0 * a * a - 9.0 * b) + 27.0 * c) / 54.0;
  const double q3 = q * q * q;
  if (r * r < q3) {
    const double t = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
    const double m = -2.0 * std::sqrt(q);
    const double shift = a / 3.0;
    return {m * std::cos(t / 3.0) - shift, m * std::cos((t + 2.0 * std::numbers::pi) / 3.0) - shift,
            m * std::cos((t - 2.0 * std::numbers::pi) / 3.0) - shift};
  }
  const double big = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
  const double small = big == 0.0 ? 0.0 : q / big;
  return {big + small - a / 3.0};
}

}  // namespace detail

/// Real roots of a x³ + b x² + c x + d, Newton-polished on the original
/// polynomial, sorted and deduplicated. Leading coefficients that vanish
/// relative to the largest one drop the degree.
inline std::vector<double> real_roots_cubic(double a, double b, double c, double d) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (scale == 0.0) return {};
  a /= scale;
  b /= scale;
  c /= scale;
  d /= scale;
  constexpr double tiny = 1e-14;
  std::vector<double> roots;
  if (std::abs(a) <= tiny) {
    roots = detail::real_roots_quadratic(std::abs(b) <= tiny ? 0.0 : b, c, d);
  } else {
    roots = detail::real_roots_monic_cubic(b / a, c / a, d / a);
  }
  const std::array<double, 4> p{a, b, c, d};
  const std::array<double, 3> dp{3.0 * a, 2.0 * b, c};
  for (double& x : roots) {
    for (int it = 0; it < 8; ++it) {
      const double f = evaluate(p, x), df = evaluate(dp, x);
      if (df == 0.0) break;
      const double step = f / df;
      if (!std::isfinite(step)) break;
      const double next = x - step;
      if (std::abs(evaluate(p, next)) > std::abs(f)) break;
      x = next;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(1.0, std::abs(u)); }),
              roots.end());
  return roots;
}

}  // namespace gsq::poly
