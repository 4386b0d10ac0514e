#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "hypmet/complex.hpp"
#include "hypmet/metrics.hpp"

namespace hypmet {

enum class FeasibilityStatus { PositiveFeasible, NonnegativeOnly, Infeasible };
const char* to_string(FeasibilityStatus s);

struct FeasibilityReport {
  FeasibilityStatus status = FeasibilityStatus::Infeasible;
  AngleAssignment witness;  // empty when infeasible
  double slack = 0;         // largest achievable minimum slack
};

/// Maximizes the minimum slack s over angle assignments with cone angles k:
/// every angle ≥ s and, for the hyper flavor, every vertex sum ≤ π - s.
FeasibilityReport feasibility(const Complex& c, const Eigen::VectorXd& k, Flavor flavor, double tol = 1e-9);

struct SolveOptions {
  double tol = 1e-9;         // on ‖k_l - k‖∞
  int max_iter = 5000;
  int memory = 10;           // L-BFGS pairs
  double quad_tol = 1e-12;   // per-tet quadrature tolerance for full covolumes
  int resync_every = 25;
  std::optional<Eigen::VectorXd> initial;
};

struct SolveResult {
  Flavor flavor = Flavor::Ideal;
  Eigen::VectorXd lengths;   // gauge projected for the ideal flavor
  AngleAssignment angles;
  Eigen::VectorXd achieved;  // cone angles of `lengths`
  double volume = 0;
  double covolume = 0;
  double W = 0;              // ⟨l, k⟩ - cov(l)
  int iterations = 0;
  double grad_norm = 0;
  double feasibility_slack = 0;
  std::vector<double> objective_trace;  // cov - ⟨·, k⟩ after each accepted step
};

/// Minimizes cov(l) - ⟨l, k⟩ over lengths by L-BFGS with a sufficient
/// decrease line search. Throws SolveError (NotClosed, NotPositiveFeasible,
/// MaxIterations, LineSearchFailure).
SolveResult solve_metric(const Complex& c, const Eigen::VectorXd& k, Flavor flavor, const SolveOptions& opts = {});

struct MaxVolumeResult {
  AngleAssignment angles;
  double volume = 0;
};

MaxVolumeResult max_volume_angles(const Complex& c, const Eigen::VectorXd& k, Flavor flavor,
                                  const SolveOptions& opts = {});

/// max_x (⟨x, k⟩ - cov(x)) - W over the sample points; never positive
/// beyond roundoff when `result` is the minimizer.
double duality_gap(const Complex& c, const Eigen::VectorXd& k, const SolveResult& result,
                   const std::vector<Eigen::VectorXd>& samples);

enum class TetVerdictKind { Realized, FlatIdeal, FlatHyper };
const char* to_string(TetVerdictKind k);

struct TetVerdict {
  TetVerdictKind kind = TetVerdictKind::Realized;
  // FlatIdeal: e^{(l_i+l_{i+3})/2} - e^{(l_j+l_{j+3})/2} - e^{(l_k+l_{k+3})/2}
  // for the flat quad i (≥ 0 up to tolerance).
  // FlatHyper: -1 - min φ over the flat pair (≥ 0 up to tolerance).
  double residual = 0;
  int flat_index = -1;  // quad (ideal) or pair (hyper), 0-based
};

/// Ideal tetrahedron with lengths in paired order (slots i, i+3 opposite)
/// and quad angles a.
TetVerdict classify_ideal_tet(const Eigen::Matrix<double, 6, 1>& paired_lengths, const Eigen::Vector3d& quad_angles,
                              double angle_tol = 1e-6);
/// Hyper-ideal tetrahedron with lengths and angles in slot order.
TetVerdict classify_hyper_tet(const Eigen::Matrix<double, 6, 1>& lengths, const Eigen::Matrix<double, 6, 1>& angles,
                              double angle_tol = 1e-6);

std::vector<TetVerdict> classify_maximizer(const Complex& c, const SolveResult& result, double angle_tol = 1e-6);

struct RigidityReport {
  bool agree = false;
  int starts = 0;
  double max_angle_deviation = 0;
  double max_length_deviation = 0;  // gauge projected (ideal) or raw (hyper)
  double tolerance = 1e-7;
  std::vector<SolveResult> runs;
};

Eigen::VectorXd random_start(const Complex& c, Flavor flavor, std::uint64_t seed);

RigidityReport rigidity_check(const Complex& c, const Eigen::VectorXd& k, Flavor flavor, int starts,
                              std::uint64_t seed, const SolveOptions& opts = {});

}  // namespace hypmet
