#pragma once

// Quantities assembled over a complex: angle assignments, cone angles,
// curvature, volume and covolume for both the decorated ideal and the
// hyper-ideal flavor.

#include <Eigen/Core>
#include <string>

#include "hypmet/complex.hpp"
#include "hypmet/quadrature.hpp"

namespace hypmet {

enum class Flavor { Ideal, Hyper };

const char* to_string(Flavor f);
Flavor parse_flavor(const std::string& name);

/// Ideal flavor: one angle per quad, index 3·tet + q.
/// Hyper flavor: one angle per edge slot, index 6·tet + slot.
struct AngleAssignment {
  Flavor flavor = Flavor::Ideal;
  Eigen::VectorXd values;

  int size_for(const Complex& c) const { return flavor == Flavor::Ideal ? c.num_quads() : 6 * c.num_tets; }
};

/// Dihedral angles of tet t in slot order (ideal quads duplicated onto
/// opposite slots).
Eigen::Matrix<double, 6, 1> tet_slot_angles(const Complex& c, const AngleAssignment& a, int tet);

/// Throws DomainError when the assignment violates its flavor's linear
/// constraints beyond `tol`.
void check_assignment(const Complex& c, const AngleAssignment& a, double tol = 1e-10);

AngleAssignment angles_of_metric(const Complex& c, const Eigen::VectorXd& l, Flavor flavor);

Eigen::VectorXd cone_angles(const Complex& c, const AngleAssignment& a);

/// 2π - k on interior edges, π - k on boundary edges.
Eigen::VectorXd curvature(const Complex& c, const Eigen::VectorXd& k);
/// Inverse of curvature().
Eigen::VectorXd cone_angles_from_curvature(const Complex& c, const Eigen::VectorXd& K);

double volume(const Complex& c, const AngleAssignment& a);

struct CovolumeResult {
  double value = 0;
  Eigen::VectorXd gradient;  // cone angles of the metric
};

inline constexpr double kCovolumeTol = 1e-12;

/// Σ_σ cov(l_σ) with gradient equal to the cone angles of l. Hyper flavor
/// accepts any real lengths (convex extension); `tol` is the per-tet
/// quadrature tolerance.
CovolumeResult cov_complex(const Complex& c, const Eigen::VectorXd& l, Flavor flavor, double tol = kCovolumeTol);

/// ∫_0^1 ⟨k_{x + t d} - k, d⟩ dt with d = to - from, i.e. the change of the
/// objective cov - ⟨·, k⟩ along the segment, by 1-D quadrature of its
/// directional derivative (knots at degeneration crossings). Pass k = 0 for
/// a pure covolume increment.
QuadratureResult objective_increment(const Complex& c, const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                                     const Eigen::VectorXd& k, Flavor flavor, double tol);

}  // namespace hypmet
