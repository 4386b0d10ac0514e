#pragma once

// Single decorated ideal (and generalized decorated) tetrahedron.
//
// Six-slot vectors in this header use the *paired* convention: slots i and
// i+3 (0-based: 0/3, 1/4, 2/5) are opposite edges. Dihedral angles of a
// generalized decorated tetrahedron are constant on opposite pairs, so the
// first three slots determine the quad angles.

#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include "hypmet/errors.hpp"
#include "hypmet/lobachevsky.hpp"

namespace hypmet {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector6 = Eigen::Matrix<Scalar, 6, 1>;

using TetLengths6 = Vector6<double>;
using DihedralAngles6 = Vector6<double>;

template <typename Scalar>
struct ValueAndGradient3 {
  Scalar value;
  Vector3<Scalar> gradient;
};

template <typename Scalar>
struct ValueAndGradient6 {
  Scalar value;
  Vector6<Scalar> gradient;
};

namespace detail {

template <typename Scalar>
Scalar log_add_exp(Scalar a, Scalar b) {
  const Scalar hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Index of the side whose log-length is at least the log of the sum of the
// other two, or -1 when the strict triangle inequalities hold.
template <typename Scalar>
int degenerate_side_log(const Vector3<Scalar>& y) {
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    if (y[i] >= log_add_exp(y[j], y[k])) return i;
  }
  return -1;
}

// Inner angles of a non-degenerate triangle with sides x (scale free).
// Half-angle tangent form; the angle opposite the longest side is taken as
// the complement so the three angles sum to π in floating point.
template <typename Scalar>
Vector3<Scalar> euclidean_angles(const Vector3<Scalar>& x) {
  const Scalar s = (x[0] + x[1] + x[2]) / 2;
  Vector3<Scalar> a;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const Scalar num = (s - x[j]) * (s - x[k]);
    const Scalar den = s * (s - x[i]);
    a[i] = 2 * std::atan2(std::sqrt(std::max(num, Scalar(0))), std::sqrt(std::max(den, Scalar(0))));
  }
  int longest = 0;
  for (int i = 1; i < 3; ++i)
    if (x[i] > x[longest]) longest = i;
  a[longest] = std::numbers::pi_v<Scalar> - (a[(longest + 1) % 3] + a[(longest + 2) % 3]);
  return a;
}

template <typename Scalar>
Vector3<Scalar> flat_angles(int side) {
  Vector3<Scalar> a = Vector3<Scalar>::Zero();
  a[side] = std::numbers::pi_v<Scalar>;
  return a;
}

}  // namespace detail

/// Angles of the generalized Euclidean triangle with log side lengths y.
/// When one side is at least the sum of the other two the result is
/// (π, 0, 0) with π opposite that side.
template <typename Scalar>
Vector3<Scalar> triangle_angles_log(const Vector3<Scalar>& y) {
  const int flat = detail::degenerate_side_log(y);
  if (flat >= 0) return detail::flat_angles<Scalar>(flat);
  const Scalar top = y.maxCoeff();
  return detail::euclidean_angles<Scalar>((y.array() - top).exp().matrix());
}

/// Angles (a1, a2, a3) of the generalized Euclidean triangle with side
/// lengths x, a_i opposite x_i.
template <typename Scalar>
Vector3<Scalar> triangle_angles(const Vector3<Scalar>& x) {
  if (!(x.array() > 0).all() || !x.allFinite())
    throw DomainError("triangle_angles: side lengths must be positive and finite");
  for (int i = 0; i < 3; ++i) {
    if (x[i] >= x[(i + 1) % 3] + x[(i + 2) % 3]) return detail::flat_angles<Scalar>(i);
  }
  return detail::euclidean_angles<Scalar>(x);
}

/// Penner's cosine law: horocyclic angle at v_i of a decorated ideal
/// triangle, e^{(l_jk - l_ij - l_ik)/2}.
template <typename Scalar>
Scalar penner_angle(Scalar l_jk, Scalar l_ij, Scalar l_ik) {
  return std::exp((l_jk - l_ij - l_ik) / 2);
}

/// Log side lengths (l_i + l_{i+3})/2 of the Euclidean triangle attached to
/// a decorated tetrahedron.
template <typename Scalar>
Vector3<Scalar> ideal_log_sides(const Vector6<Scalar>& l) {
  return (l.template head<3>() + l.template tail<3>()) / 2;
}

template <typename Scalar>
Vector6<Scalar> ideal_lengths_to_angles(const Vector6<Scalar>& l) {
  if (!l.allFinite()) throw DomainError("ideal_lengths_to_angles: non-finite length");
  const Vector3<Scalar> a = triangle_angles_log<Scalar>(ideal_log_sides(l));
  Vector6<Scalar> out;
  out << a, a;
  return out;
}

/// True iff the lengths are those of a genuine decorated ideal tetrahedron,
/// i.e. the three sides e^{(l_i+l_{i+3})/2} satisfy strict triangle
/// inequalities.
template <typename Scalar>
bool is_decorated_ideal(const Vector6<Scalar>& l) {
  return detail::degenerate_side_log<Scalar>(ideal_log_sides(l)) < 0;
}

/// Volume Λ(a1)+Λ(a2)+Λ(a3) of the ideal tetrahedron with dihedral angles a.
template <typename Scalar>
Scalar ideal_volume(const Vector6<Scalar>& a) {
  return lobachevsky(a[0]) + lobachevsky(a[1]) + lobachevsky(a[2]);
}

/// Fenchel dual of minus the ideal volume,
///   φ*(y) = Σ Λ(a_i) + a_i y_i,   ∇φ* = a,
/// where a are the angles of the generalized triangle with sides e^{y_i}.
/// On the degenerate region the closed form π·y_i is returned.
template <typename Scalar>
ValueAndGradient3<Scalar> phi_star(const Vector3<Scalar>& y) {
  if (!y.allFinite()) throw DomainError("phi_star: non-finite argument");
  const int flat = detail::degenerate_side_log(y);
  if (flat >= 0) return {std::numbers::pi_v<Scalar> * y[flat], detail::flat_angles<Scalar>(flat)};
  const Vector3<Scalar> a = triangle_angles_log(y);
  Scalar value = 0;
  for (int i = 0; i < 3; ++i) value += lobachevsky(a[i]) + a[i] * y[i];
  return {value, a};
}

/// Convex C¹ covolume of a generalized decorated tetrahedron,
/// cov(l) = 2 φ*((l1+l4)/2, (l2+l5)/2, (l3+l6)/2), with ∂cov/∂l_i equal to
/// the dihedral angle at slot i.
template <typename Scalar>
ValueAndGradient6<Scalar> cov_ideal(const Vector6<Scalar>& l) {
  const auto dual = phi_star<Scalar>(ideal_log_sides(l));
  Vector6<Scalar> g;
  g << dual.gradient, dual.gradient;
  return {2 * dual.value, g};
}

}  // namespace hypmet
