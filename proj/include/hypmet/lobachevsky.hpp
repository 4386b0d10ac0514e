#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "hypmet/errors.hpp"

namespace hypmet {

namespace detail {

// Coefficients of the small-argument expansion of the Clausen function
//   Cl2(t) = t - t ln t + sum_{k>=1} c_k t^(2k+1),
//   c_k = zeta(2k) / (k (2k+1) (2 pi)^(2k)),
// which converges for |t| < 2 pi. On [0, pi] the ratio of successive terms
// is at most 1/4, so 30 terms reach full double (and long double) precision.
template <typename Scalar>
const std::array<Scalar, 30>& clausen_coefficients() {
  static const std::array<Scalar, 30> coeffs = [] {
    std::array<Scalar, 30> c{};
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar two_pi_sq = 4 * pi * pi;
    Scalar scale = 1;
    for (int k = 1; k <= 30; ++k) {
      scale *= two_pi_sq;
      Scalar zeta;
      const Scalar pi2 = pi * pi;
      if (k == 1) {
        zeta = pi2 / 6;
      } else if (k == 2) {
        zeta = pi2 * pi2 / 90;
      } else if (k == 3) {
        zeta = pi2 * pi2 * pi2 / 945;
      } else {
        zeta = 0;
        for (int n = 400; n >= 1; --n) zeta += std::pow(Scalar(n), Scalar(-2 * k));
      }
      c[k - 1] = zeta / (Scalar(k) * Scalar(2 * k + 1) * scale);
    }
    return c;
  }();
  return coeffs;
}

// Cl2(t) for t in [0, pi].
template <typename Scalar>
Scalar clausen2_reduced(Scalar t) {
  if (t == 0) return 0;
  const auto& c = clausen_coefficients<Scalar>();
  const Scalar t2 = t * t;
  Scalar series = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) series = series * t2 + *it;
  return t * (1 - std::log(t) + t2 * series);
}

}  // namespace detail

/// Lobachevsky function  Λ(x) = -∫_0^x ln|2 sin t| dt.
///
/// Odd and π-periodic. The argument is reduced exactly (std::remainder) to
/// [-π/2, π/2], where Λ(x) = Cl2(2x)/2 is evaluated from the Clausen series.
/// Absolute error is a few ulps of the result on the reduced range.
template <typename Scalar>
Scalar lobachevsky(Scalar x) {
  if (!std::isfinite(x)) throw DomainError("lobachevsky: non-finite argument");
  const Scalar r = std::remainder(x, std::numbers::pi_v<Scalar>);
  const Scalar value = detail::clausen2_reduced(2 * std::abs(r)) / 2;
  return r < 0 ? -value : value;
}

/// Clausen function Cl2(θ) = Σ sin(nθ)/n² = 2Λ(θ/2).
template <typename Scalar>
Scalar clausen2(Scalar theta) {
  return 2 * lobachevsky(theta / 2);
}

}  // namespace hypmet
