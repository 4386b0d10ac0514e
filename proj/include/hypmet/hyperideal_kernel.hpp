#pragma once

// Single (generalized) hyper-ideal tetrahedron.
//
// Six-slot vectors in this header use the *lexicographic* edge order
// (12, 13, 14, 23, 24, 34) on vertices 1..4, i.e. 0-based vertex pairs
// (0,1) (0,2) (0,3) (1,2) (1,3) (2,3). The opposite of slot s is 5 - s and
// slot pair p in {0,1,2} is {p, 5-p}; pair p degenerates into the flat
// region Ω_{p+1}.

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <numbers>

#include "hypmet/errors.hpp"
#include "hypmet/ideal_kernel.hpp"
#include "hypmet/lobachevsky.hpp"
#include "hypmet/quadrature.hpp"

namespace hypmet {

using HyperLengths6 = Vector6<double>;

namespace hyper {

inline constexpr std::array<std::array<int, 2>, 6> kSlotVertices = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int slot_of(int i, int j) {
  if (i > j) std::swap(i, j);
  return i == 0 ? j - 1 : (i == 1 ? j + 1 : 5);
}
constexpr int opposite_slot(int s) { return 5 - s; }
constexpr int pair_of(int s) { return s < 3 ? s : 5 - s; }

// For slot (i,j): the remaining vertices k < h.
constexpr std::array<int, 2> complement(int s) {
  const auto [i, j] = kSlotVertices[s];
  std::array<int, 2> out{};
  int n = 0;
  for (int v = 0; v < 4; ++v)
    if (v != i && v != j) out[n++] = v;
  return out;
}

// The three slots incident to vertex v.
constexpr std::array<int, 3> slots_at_vertex(int v) {
  std::array<int, 3> out{};
  int n = 0;
  for (int w = 0; w < 4; ++w)
    if (w != v) out[n++] = slot_of(v, w);
  return out;
}

// The three slots of the face opposite vertex v.
constexpr std::array<int, 3> slots_of_face(int v) {
  std::array<int, 3> out{};
  int n = 0;
  for (int s = 0; s < 6; ++s)
    if (kSlotVertices[s][0] != v && kSlotVertices[s][1] != v) out[n++] = s;
  return out;
}

}  // namespace hyper

/// Length x^i_{jk} of the vertex edge Δ_i ∩ H_{ijk}:
///   cosh x = (cosh l_ij cosh l_ik + cosh l_jk) / (sinh l_ij sinh l_ik).
template <typename Scalar>
Scalar vertex_edge_length(Scalar l_ij, Scalar l_ik, Scalar l_jk) {
  if (!(l_ij > 0 && l_ik > 0 && l_jk > 0))
    throw DomainError("vertex_edge_length: lengths must be positive");
  const Scalar arg = 1 / (std::tanh(l_ij) * std::tanh(l_ik)) + std::cosh(l_jk) / (std::sinh(l_ij) * std::sinh(l_ik));
  return std::acosh(arg);
}

/// φ_ij(l) for all six slots from the symmetric closed form. On hyper-ideal
/// lengths φ_ij = cos a_ij. Defined (continuously) for l ≥ 0; φ_ij = 1 when
/// l_ij = 0.
///
/// Every term is homogeneous of degree three in (cosh l, 1), so numerator
/// and denominator are divided by cosh(max l)³ and nothing overflows.
template <typename Scalar>
Vector6<Scalar> phi(const Vector6<Scalar>& l) {
  if (!l.allFinite() || (l.array() < 0).any()) throw DomainError("phi: lengths must be finite and non-negative");
  const Scalar top = l.maxCoeff();
  const Scalar norm = 1 + std::exp(-2 * top);
  const Scalar m = 2 * std::exp(-top) / norm;  // 1 / cosh(top)
  Vector6<Scalar> c, s2;
  for (int s = 0; s < 6; ++s) {
    const Scalar e = std::exp(l[s] - top);
    c[s] = e * (1 + std::exp(-2 * l[s])) / norm;
    const Scalar sh = -e * std::expm1(-2 * l[s]) / norm;
    s2[s] = sh * sh;
  }
  // Scaled Gram quantity b_v² of the face opposite vertex v.
  std::array<Scalar, 4> face_gram{};
  for (int v = 0; v < 4; ++v) {
    const auto f = hyper::slots_of_face(v);
    face_gram[v] = 2 * c[f[0]] * c[f[1]] * c[f[2]] + m * (c[f[0]] * c[f[0]] + c[f[1]] * c[f[1]] + c[f[2]] * c[f[2]]) -
                   m * m * m;
  }
  Vector6<Scalar> out;
  for (int s = 0; s < 6; ++s) {
    const auto [i, j] = hyper::kSlotVertices[s];
    const auto [k, h] = hyper::complement(s);
    using hyper::slot_of;
    const Scalar cik = c[slot_of(i, k)], cih = c[slot_of(i, h)];
    const Scalar cjk = c[slot_of(j, k)], cjh = c[slot_of(j, h)];
    const Scalar cij = c[s], ckh = c[slot_of(k, h)];
    const Scalar num = m * (cik * cih + cjk * cjh) + cij * cik * cjh + cij * cih * cjk - s2[s] * ckh;
    // faces ijk and ijh are opposite h and k respectively
    out[s] = l[s] == 0 ? Scalar(1) : num / std::sqrt(face_gram[h] * face_gram[k]);
  }
  return out;
}

/// φ_ij evaluated in the vertex triangle Δ_i (first endpoint of `slot` when
/// `at_first` is true, otherwise Δ_j) via the vertex-edge lengths:
///   (cosh x^i_jk cosh x^i_jh - cosh x^i_kh) / (sinh x^i_jk sinh x^i_jh).
/// Independent route to the symmetric closed form.
template <typename Scalar>
Scalar phi_in_vertex_triangle(const Vector6<Scalar>& l, int slot, bool at_first) {
  using hyper::slot_of;
  auto [i, j] = hyper::kSlotVertices[slot];
  if (!at_first) std::swap(i, j);
  const auto [k, h] = hyper::complement(slot);
  auto cosh_x = [&](int a, int b) {  // cosh x^i_{ab}
    return (std::cosh(l[slot_of(i, a)]) * std::cosh(l[slot_of(i, b)]) + std::cosh(l[slot_of(a, b)])) /
           (std::sinh(l[slot_of(i, a)]) * std::sinh(l[slot_of(i, b)]));
  };
  const Scalar cjk = cosh_x(j, k), cjh = cosh_x(j, h), ckh = cosh_x(k, h);
  return (cjk * cjh - ckh) / (std::sqrt(cjk * cjk - 1) * std::sqrt(cjh * cjh - 1));
}

/// Position of a length vector relative to the space L of hyper-ideal
/// tetrahedra. Outside L exactly one opposite pair carries φ ≤ -1; `pair`
/// (1..3) names it, matching Ω_1 = Ω⁻_12, Ω_2 = Ω⁻_13, Ω_3 = Ω⁻_14.
struct LengthClass {
  enum Kind { HyperIdeal, FlatBoundary, FlatInterior };
  Kind kind = HyperIdeal;
  int pair = 0;
  bool operator==(const LengthClass&) const = default;
};

/// Classification is tolerance dependent: |φ + 1| ≤ tol counts as the
/// frontier X_pair.
template <typename Scalar>
LengthClass classify_lengths(const Vector6<Scalar>& l, Scalar tol = Scalar(1e-9)) {
  if (!(l.array() > 0).all()) throw DomainError("classify_lengths: lengths must be positive");
  const Vector6<Scalar> p = phi(l);
  LengthClass out;
  int flagged = 0;
  for (int q = 0; q < 3; ++q) {
    const Scalar v = std::min(p[q], p[hyper::opposite_slot(q)]);
    if (v > -1 + tol) continue;
    ++flagged;
    out.pair = q + 1;
    out.kind = v < -1 - tol ? LengthClass::FlatInterior : LengthClass::FlatBoundary;
  }
  if (flagged > 1) throw NumericalError("classify_lengths: two opposite pairs with phi <= -1");
  return out;
}

/// Dihedral angles of the generalized hyper-ideal tetrahedron, extended to
/// all of R⁶ through l⁺ = max(l, 0): a_ij = arccos(φ_ij(l⁺)) with φ clamped
/// to [-1, 1]. Slots are independent (no opposite-pair equality).
template <typename Scalar>
Vector6<Scalar> hyper_angles_from_lengths(const Vector6<Scalar>& l) {
  if (!l.allFinite()) throw DomainError("hyper_angles_from_lengths: non-finite length");
  const Vector6<Scalar> p = phi<Scalar>(l.cwiseMax(Scalar(0)));
  return p.cwiseMax(Scalar(-1)).cwiseMin(Scalar(1)).array().acos().matrix();
}

namespace detail {

template <typename Scalar>
std::array<Scalar, 4> vertex_gram(const Vector6<Scalar>& cosines) {
  std::array<Scalar, 4> g{};
  for (int v = 0; v < 4; ++v) {
    const auto s = hyper::slots_at_vertex(v);
    const Scalar a = cosines[s[0]], b = cosines[s[1]], c = cosines[s[2]];
    g[v] = 2 * a * b * c + a * a + b * b + c * c - 1;
  }
  return g;
}

}  // namespace detail

enum class AngleType { TypeI, TypeII, TypeIII };

inline const char* to_string(AngleType t) {
  switch (t) {
    case AngleType::TypeI: return "TypeI";
    case AngleType::TypeII: return "TypeII";
    case AngleType::TypeIII: return "TypeIII";
  }
  return "?";
}

/// Type of a generalized dihedral angle vector in the closed polytope B̄
/// (entries ≥ 0, the three angles at each vertex sum to at most π).
template <typename Scalar>
AngleType classify_angles(const Vector6<Scalar>& a, Scalar tol = Scalar(1e-10)) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (!a.allFinite() || (a.array() < -tol).any()) throw DomainError("classify_angles: angles must be >= 0");
  std::array<Scalar, 4> sums{};
  for (int v = 0; v < 4; ++v) {
    for (int s : hyper::slots_at_vertex(v)) sums[v] += a[s];
    if (sums[v] > pi + tol) throw DomainError("classify_angles: vertex angle sum exceeds pi");
  }
  for (int q = 0; q < 3; ++q) {
    bool flat = true;
    for (int s = 0; s < 6; ++s) {
      const Scalar target = hyper::pair_of(s) == q ? pi : Scalar(0);
      flat = flat && std::abs(a[s] - target) <= tol;
    }
    if (flat) return AngleType::TypeII;
  }
  for (Scalar s : sums)
    if (!(s < pi - tol)) return AngleType::TypeIII;
  return AngleType::TypeI;
}

/// ψ_ij(a), the hyperbolic cosine of the edge lengths of the hyper-ideal
/// tetrahedron with dihedral angles a; continuous on type-I vectors with
/// ψ_ij = 1 when a_ij = 0.
template <typename Scalar>
Vector6<Scalar> psi(const Vector6<Scalar>& a) {
  using hyper::slot_of;
  const Vector6<Scalar> c = a.array().cos().matrix();
  const Vector6<Scalar> sn = a.array().sin().matrix();
  const auto gram = detail::vertex_gram(c);
  for (Scalar g : gram)
    if (!(g > 0)) throw DomainError("psi: angle vector is not of type I");
  Vector6<Scalar> out;
  for (int s = 0; s < 6; ++s) {
    const auto [i, j] = hyper::kSlotVertices[s];
    const auto [k, h] = hyper::complement(s);
    const Scalar cij = c[s], ckh = c[slot_of(k, h)];
    const Scalar cik = c[slot_of(i, k)], cih = c[slot_of(i, h)];
    const Scalar cjk = c[slot_of(j, k)], cjh = c[slot_of(j, h)];
    const Scalar num = sn[s] * sn[s] * ckh + cik * cjk + cih * cjh + cij * cik * cjh + cij * cih * cjk;
    out[s] = num / std::sqrt(gram[i] * gram[j]);
  }
  return out;
}

/// Associated edge lengths arccosh ψ(a) of a type-I angle vector.
template <typename Scalar>
Vector6<Scalar> lengths_from_angles(const Vector6<Scalar>& a) {
  Vector6<Scalar> p = psi(a);
  constexpr Scalar slack = Scalar(1e-12);
  for (int s = 0; s < 6; ++s) {
    if (p[s] < 1 - slack) throw DomainError("lengths_from_angles: psi below 1");
    p[s] = std::acosh(std::max(p[s], Scalar(1)));
  }
  return p;
}

/// cov(0,...,0) = 2 vol(0,...,0) = 16 Λ(π/4): twice the volume of the
/// regular ideal octahedron.
inline double cov_hyper_base() { return 16 * lobachevsky(std::numbers::pi / 4); }

inline constexpr double kDefaultQuadratureTol = 1e-12;

/// ∫ μ along the straight segment from `from` to `to`, where
/// μ = Σ a_ij(l) dl_ij is the closed 1-form of extended dihedral angles.
/// Knots are placed where some l_ij changes sign or some φ_ij crosses ±1.
inline QuadratureResult cov_hyper_increment(const HyperLengths6& from, const HyperLengths6& to,
                                            double tol = kDefaultQuadratureTol) {
  const HyperLengths6 d = to - from;
  if (d.isZero(0)) return {};
  auto integrand = [&](double t) { return hyper_angles_from_lengths<double>(from + t * d).dot(d); };
  auto indicator = [&](double t) {
    const HyperLengths6 p = from + t * d;
    const HyperLengths6 f = phi<double>(p.cwiseMax(0.0));
    std::array<double, 18> out{};
    for (int s = 0; s < 6; ++s) {
      out[s] = f[s] - 1;
      out[6 + s] = f[s] + 1;
      out[12 + s] = p[s];
    }
    return out;
  };
  auto knots = locate_sign_changes(indicator, 0.0, 1.0, 32);
  return integrate_piecewise(integrand, 0.0, 1.0, std::move(knots), tol);
}

/// Convex C¹ extension of the hyper-ideal covolume to R⁶:
///   cov(l) = 16Λ(π/4) + ∫_0^l μ   (straight segment from the origin).
inline double cov_hyper(const HyperLengths6& l, double tol = kDefaultQuadratureTol) {
  if (!l.allFinite()) throw DomainError("cov_hyper: non-finite length");
  return cov_hyper_base() + cov_hyper_increment(HyperLengths6::Zero(), l, tol).value;
}

/// Volume from the covolume identity cov = 2 vol + Σ a_ij l_ij. Equal to the
/// hyperbolic volume on L and zero on the flat regions. Accepts l ≥ 0.
inline double vol_hyper(const HyperLengths6& l, double tol = kDefaultQuadratureTol) {
  if (!l.allFinite() || (l.array() < 0).any()) throw DomainError("vol_hyper: lengths must be non-negative");
  return (cov_hyper(l, tol) - hyper_angles_from_lengths<double>(l).dot(l)) / 2;
}

/// Volume of a generalized dihedral angle vector of type I or II.
///
/// Type II (flat) is zero. Type I goes through the associated lengths
/// l = arccosh ψ(a); when the recovered angles disagree with `a` by more
/// than 1e-8 (some boundary strata), the volume is extrapolated linearly
/// from two points on a short segment towards the barycentre a = π/6.
/// Type III throws UnsupportedEvaluation.
inline double hyper_volume_from_angles(const DihedralAngles6& a, double tol = kDefaultQuadratureTol) {
  switch (classify_angles<double>(a)) {
    case AngleType::TypeII: return 0.0;
    case AngleType::TypeIII:
      throw UnsupportedEvaluation("hyper-ideal volume at a type-III angle vector is not evaluated");
    case AngleType::TypeI: break;
  }
  auto attempt = [&](const DihedralAngles6& b, double& out) {
    const HyperLengths6 l = lengths_from_angles<double>(b);
    if ((hyper_angles_from_lengths<double>(l) - b).cwiseAbs().maxCoeff() > 1e-8) return false;
    out = vol_hyper(l, tol);
    return true;
  };
  double v = 0;
  if (attempt(a, v)) return v;
  const DihedralAngles6 centre = DihedralAngles6::Constant(std::numbers::pi / 6);
  const double h = 1e-4;
  double v1 = 0, v2 = 0;
  if (!attempt(a + h * (centre - a), v1) || !attempt(a + 2 * h * (centre - a), v2))
    throw NumericalError("hyper_volume_from_angles: length round trip failed near boundary stratum");
  return 2 * v1 - v2;
}

}  // namespace hypmet
