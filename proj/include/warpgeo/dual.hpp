#pragma once

#include <cmath>

namespace warpgeo {

// Forward-mode dual number a + b*eps with eps^2 = 0. Carries one directional
// derivative; gradients take one pass per coordinate.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v, double d = 0.0) : value(v), deriv(d) {}

  static constexpr Dual variable(double v) { return {v, 1.0}; }
  static constexpr Dual constant(double v) { return {v, 0.0}; }
};

constexpr Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.deriv + b.deriv}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.deriv - b.deriv}; }
constexpr Dual operator-(Dual a) { return {-a.value, -a.deriv}; }
constexpr Dual operator*(Dual a, Dual b) {
  return {a.value * b.value, a.value * b.deriv + a.deriv * b.value};
}
constexpr Dual operator/(Dual a, Dual b) {
  return {a.value / b.value, (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)};
}

inline Dual sin(Dual a) { return {std::sin(a.value), a.deriv * std::cos(a.value)}; }
inline Dual cos(Dual a) { return {std::cos(a.value), -a.deriv * std::sin(a.value)}; }
inline Dual tan(Dual a) {
  const double t = std::tan(a.value);
  return {t, a.deriv * (1.0 + t * t)};
}
inline Dual exp(Dual a) {
  const double e = std::exp(a.value);
  return {e, a.deriv * e};
}
inline Dual log(Dual a) { return {std::log(a.value), a.deriv / a.value}; }
inline Dual sqrt(Dual a) {
  const double s = std::sqrt(a.value);
  return {s, a.deriv / (2.0 * s)};
}

// Constant exponent only.
inline Dual pow(Dual a, double p) {
  if (p == 0.0) return {1.0, 0.0};
  return {std::pow(a.value, p), a.deriv * p * std::pow(a.value, p - 1.0)};
}

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value; }

}  // namespace warpgeo
