#include "hypmet/solver.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <sstream>

#include "hypmet/errors.hpp"
#include "hypmet/hyperideal_kernel.hpp"
#include "hypmet/ideal_kernel.hpp"
#include "hypmet/linear_program.hpp"

namespace hypmet {

using Vec6 = Eigen::Matrix<double, 6, 1>;

const char* to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::PositiveFeasible: return "PositiveFeasible";
    case FeasibilityStatus::NonnegativeOnly: return "NonnegativeOnly";
    case FeasibilityStatus::Infeasible: return "Infeasible";
  }
  return "?";
}

const char* to_string(TetVerdictKind k) {
  switch (k) {
    case TetVerdictKind::Realized: return "Realized";
    case TetVerdictKind::FlatIdeal: return "FlatIdeal";
    case TetVerdictKind::FlatHyper: return "FlatHyper";
  }
  return "?";
}

FeasibilityReport feasibility(const Complex& c, const Eigen::VectorXd& k, Flavor flavor, double tol) {
  if (k.size() != c.num_edges) throw InputError("cone angle vector has the wrong number of entries");
  if (!k.allFinite()) throw InputError("cone angles must be finite");
  const double pi = std::numbers::pi;
  const int T = c.num_tets, E = c.num_edges;
  const bool ideal = flavor == Flavor::Ideal;
  const int na = ideal ? 3 * T : 6 * T;
  const int n = na + 1;  // angles, then the slack s
  auto var = [&](const EdgeInstance& i) { return ideal ? 3 * i.tet + quad_of_slot(i.slot) : 6 * i.tet + i.slot; };

  const int me = E + (ideal ? T : 0);
  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(me, n);
  Eigen::VectorXd beq(me);
  for (int e = 0; e < E; ++e) {
    for (const auto& inst : c.incidence[e]) Aeq(e, var(inst)) += 1;
    beq[e] = k[e];
  }
  if (ideal) {
    for (int t = 0; t < T; ++t) {
      Aeq.block(E + t, 3 * t, 1, 3).setOnes();
      beq[E + t] = pi;
    }
  }

  const int mu = na + 1 + (ideal ? 0 : 4 * T);
  Eigen::MatrixXd Aub = Eigen::MatrixXd::Zero(mu, n);
  Eigen::VectorXd bub = Eigen::VectorXd::Zero(mu);
  for (int j = 0; j < na; ++j) {  // s - angle ≤ 0
    Aub(j, na) = 1;
    Aub(j, j) = -1;
  }
  Aub(na, na) = 1;  // s ≤ π keeps the program bounded
  bub[na] = pi;
  if (!ideal) {
    for (int t = 0; t < T; ++t) {
      for (int v = 0; v < 4; ++v) {
        const int row = na + 1 + 4 * t + v;
        for (int s : hyper::slots_at_vertex(v)) Aub(row, 6 * t + s) = 1;
        Aub(row, na) = 1;
        bub[row] = pi;
      }
    }
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n);
  cost[na] = 1;
  const LpSolution lp = solve_lp(Aeq, beq, Aub, bub, cost);
  FeasibilityReport report;
  if (lp.status == LpSolution::Unbounded) throw NumericalError("feasibility program reported unbounded");
  if (lp.status == LpSolution::Infeasible) return report;
  report.slack = lp.x[na];
  report.witness = {flavor, lp.x.head(na).cwiseMax(0.0)};
  report.status = report.slack > tol ? FeasibilityStatus::PositiveFeasible : FeasibilityStatus::NonnegativeOnly;
  return report;
}

namespace {

Eigen::MatrixXd gauge_basis(const Complex& c) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gauge_matrix(c));
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.leftCols(qr.rank());
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Objective cov - ⟨·, k⟩ and its gradient k_x - k; for the ideal flavor the
// gradient used for steps is projected orthogonal to the gauge directions.
class Objective {
 public:
  Objective(const Complex& c, const Eigen::VectorXd& k, Flavor flavor, double quad_tol)
      : c_(c), k_(k), flavor_(flavor), quad_tol_(quad_tol) {
    if (flavor == Flavor::Ideal) gauge_ = gauge_basis(c);
  }

  double value(const Eigen::VectorXd& x) const { return cov_complex(c_, x, flavor_, quad_tol_).value - k_.dot(x); }

  Eigen::VectorXd raw_gradient(const Eigen::VectorXd& x) const {
    const Eigen::Index tets = c_.num_tets;
    Eigen::VectorXd g = -k_;
    for (Eigen::Index t = 0; t < tets; ++t) {
      const Vec6 lt = restrict_to_tet(c_, x, static_cast<int>(t));
      Vec6 a;
      if (flavor_ == Flavor::Hyper) {
        a = hyper_angles_from_lengths<double>(lt);
      } else {
        Vec6 p;
        for (int i = 0; i < 6; ++i) p[i] = lt[kPairedFromLex[i]];
        const Vec6 ap = ideal_lengths_to_angles<double>(p);
        for (int i = 0; i < 6; ++i) a[i] = ap[kPairedFromLex[i]];
      }
      for (int s = 0; s < 6; ++s) g[c_.edge_of[t][s]] += a[s];
    }
    return g;
  }

  Eigen::VectorXd project(const Eigen::VectorXd& v) const {
    if (flavor_ == Flavor::Hyper) return v;
    return v - gauge_ * (gauge_.transpose() * v);
  }

  // Change of the objective from x to y and its error estimate.
  QuadratureResult increment(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double scale) const {
    const double tol = std::max(1e-9 * scale, 1e-13 * (y - x).lpNorm<1>() * (1 + k_.lpNorm<Eigen::Infinity>()));
    return objective_increment(c_, x, y, k_, flavor_, tol);
  }

 private:
  const Complex& c_;
  const Eigen::VectorXd& k_;
  Flavor flavor_;
  double quad_tol_;
  Eigen::MatrixXd gauge_;
};

struct LineSearchOutcome {
  bool ok = false;
  double step = 0;
  double decrease = 0;
  Eigen::VectorXd x, raw_grad, grad;
};

constexpr double kArmijo = 1e-4;
constexpr double kWolfeDelta = 0.1;
constexpr double kWolfeSigma = 0.9;

// Backtracking on sufficient decrease, with the approximate Wolfe test as a
// fallback once the function change is below the quadrature noise.
LineSearchOutcome line_search(const Objective& obj, const Eigen::VectorXd& x, const Eigen::VectorXd& grad,
                              const Eigen::VectorXd& d, double f) {
  const double slope = grad.dot(d);
  double alpha = 1;
  LineSearchOutcome out;
  for (int trial = 0; trial < 60; ++trial, alpha *= 0.5) {
    const Eigen::VectorXd y = x + alpha * d;
    const auto inc = obj.increment(x, y, alpha * std::abs(slope));
    const Eigen::VectorXd raw = obj.raw_gradient(y);
    const Eigen::VectorXd g = obj.project(raw);
    const bool armijo = inc.value <= kArmijo * alpha * slope;
    const double noise = inc.error + 1e-15 * (1 + std::abs(f));
    const double new_slope = g.dot(d);
    const bool approx_wolfe = inc.value <= noise && new_slope <= (2 * kWolfeDelta - 1) * slope &&
                              new_slope >= kWolfeSigma * slope;
    if (armijo || approx_wolfe) {
      out = {true, alpha, inc.value, y, raw, g};
      return out;
    }
  }
  return out;
}

}  // namespace

SolveResult solve_metric(const Complex& c, const Eigen::VectorXd& k, Flavor flavor, const SolveOptions& opts) {
  if (!c.closed) throw SolveError(SolveFailure::NotClosed, "solvers require a closed triangulation");
  const auto feas = feasibility(c, k, flavor);
  if (feas.status != FeasibilityStatus::PositiveFeasible) {
    std::ostringstream msg;
    msg << "target cone angles are " << to_string(feas.status) << " (max slack " << feas.slack << ")";
    throw SolveError(SolveFailure::NotPositiveFeasible, msg.str());
  }

  const Objective obj(c, k, flavor, opts.quad_tol);
  Eigen::VectorXd x;
  if (opts.initial) {
    if (opts.initial->size() != c.num_edges) throw InputError("initial lengths have the wrong number of entries");
    x = *opts.initial;
  } else {
    x = flavor == Flavor::Ideal ? Eigen::VectorXd::Zero(c.num_edges) : Eigen::VectorXd::Ones(c.num_edges);
  }
  x = obj.project(x);

  double f = obj.value(x);
  Eigen::VectorXd raw = obj.raw_gradient(x);
  Eigen::VectorXd g = obj.project(raw);
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;

  SolveResult result;
  result.flavor = flavor;
  result.feasibility_slack = feas.slack;
  result.objective_trace.push_back(f);

  int iter = 0;
  for (;; ++iter) {
    if (inf_norm(raw) <= opts.tol) break;
    if (iter >= opts.max_iter) {
      std::ostringstream msg;
      msg << "no convergence after " << iter << " iterations, |k_l - k|_inf = " << inf_norm(raw);
      throw SolveError(SolveFailure::MaxIterations, msg.str());
    }

    // Two-loop recursion.
    Eigen::VectorXd q = g;
    std::vector<double> rho(memory.size()), coef(memory.size());
    for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = memory[i];
      rho[i] = 1 / y.dot(s);
      coef[i] = rho[i] * s.dot(q);
      q -= coef[i] * y;
    }
    if (!memory.empty()) q *= memory.back().first.dot(memory.back().second) / memory.back().second.squaredNorm();
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      q += (coef[i] - rho[i] * y.dot(q)) * s;
    }
    Eigen::VectorXd d = obj.project(-q);
    if (!(g.dot(d) < 0)) {
      memory.clear();
      d = -g;
    }

    auto ls = line_search(obj, x, g, d, f);
    if (!ls.ok && !memory.empty()) {
      memory.clear();
      d = -g;
      ls = line_search(obj, x, g, d, f);
    }
    if (!ls.ok) {
      std::ostringstream msg;
      msg << "no acceptable step at iteration " << iter << ", |k_l - k|_inf = " << inf_norm(raw);
      throw SolveError(SolveFailure::LineSearchFailure, msg.str());
    }

    const Eigen::VectorXd s = ls.x - x, y = ls.grad - g;
    if (s.dot(y) > 1e-16 * s.norm() * y.norm()) {
      memory.emplace_back(s, y);
      if (static_cast<int>(memory.size()) > opts.memory) memory.pop_front();
    }
    x = std::move(ls.x);
    raw = std::move(ls.raw_grad);
    g = std::move(ls.grad);
    f += ls.decrease;
    if (opts.resync_every > 0 && (iter + 1) % opts.resync_every == 0) f = obj.value(x);
    result.objective_trace.push_back(f);
  }

  if (flavor == Flavor::Hyper && (x.array() <= 0).any())
    throw NumericalError("hyper-ideal critical point has a nonpositive edge length");
  if (flavor == Flavor::Ideal) x = gauge_project(c, x);

  result.lengths = x;
  result.iterations = iter;
  result.grad_norm = inf_norm(raw);
  result.angles = angles_of_metric(c, x, flavor);
  result.achieved = cone_angles(c, result.angles);
  result.covolume = cov_complex(c, x, flavor, opts.quad_tol).value;
  result.W = k.dot(x) - result.covolume;
  result.volume = volume(c, result.angles);
  return result;
}

MaxVolumeResult max_volume_angles(const Complex& c, const Eigen::VectorXd& k, Flavor flavor,
                                  const SolveOptions& opts) {
  auto r = solve_metric(c, k, flavor, opts);
  return {std::move(r.angles), r.volume};
}

double duality_gap(const Complex& c, const Eigen::VectorXd& k, const SolveResult& result,
                   const std::vector<Eigen::VectorXd>& samples) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : samples) best = std::max(best, k.dot(x) - cov_complex(c, x, result.flavor).value);
  return best - result.W;
}

TetVerdict classify_ideal_tet(const Vec6& l, const Eigen::Vector3d& a, double angle_tol) {
  if ((a.array() > angle_tol).all()) return {};
  const double pi = std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, h = (i + 2) % 3;
    if (std::abs(a[i] - pi) > angle_tol || std::abs(a[j]) > angle_tol || std::abs(a[h]) > angle_tol) continue;
    auto side = [&](int q) { return std::exp((l[q] + l[q + 3]) / 2); };
    return {TetVerdictKind::FlatIdeal, side(i) - side(j) - side(h), i};
  }
  throw NumericalError("ideal tetrahedron has a zero angle without the flat pattern");
}

TetVerdict classify_hyper_tet(const Vec6& l, const Vec6& a, double angle_tol) {
  const auto cls = classify_lengths<double>(l);
  if (cls.kind != LengthClass::HyperIdeal) {
    const Vec6 p = phi<double>(l);
    const int q = cls.pair - 1;
    return {TetVerdictKind::FlatHyper, -1 - std::min(p[q], p[5 - q]), q};
  }
  if ((a.array() > angle_tol).all()) return {};
  throw NumericalError("hyper-ideal tetrahedron has a zero angle inside the hyper-ideal region");
}

std::vector<TetVerdict> classify_maximizer(const Complex& c, const SolveResult& result, double angle_tol) {
  std::vector<TetVerdict> out;
  for (int t = 0; t < c.num_tets; ++t) {
    const Vec6 l = restrict_to_tet(c, result.lengths, t);
    if (result.flavor == Flavor::Ideal) {
      Vec6 p;
      for (int i = 0; i < 6; ++i) p[i] = l[kPairedFromLex[i]];
      out.push_back(classify_ideal_tet(p, result.angles.values.segment<3>(3 * t), angle_tol));
    } else {
      out.push_back(classify_hyper_tet(l, result.angles.values.segment<6>(6 * t), angle_tol));
    }
  }
  return out;
}

Eigen::VectorXd random_start(const Complex& c, Flavor flavor, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const bool ideal = flavor == Flavor::Ideal;
  std::uniform_real_distribution<double> dist(ideal ? -1.0 : 0.2, ideal ? 1.0 : 3.0);
  Eigen::VectorXd x(c.num_edges);
  for (int e = 0; e < c.num_edges; ++e) x[e] = dist(rng);
  return x;
}

RigidityReport rigidity_check(const Complex& c, const Eigen::VectorXd& k, Flavor flavor, int starts,
                              std::uint64_t seed, const SolveOptions& opts) {
  if (starts < 1) throw InputError("rigidity check needs at least one start");
  RigidityReport report;
  report.starts = starts;
  std::mt19937_64 seeder(seed);
  for (int i = 0; i < starts; ++i) {
    SolveOptions o = opts;
    o.initial = random_start(c, flavor, seeder());
    report.runs.push_back(solve_metric(c, k, flavor, o));
  }
  const auto& ref = report.runs.front();
  for (const auto& run : report.runs) {
    report.max_angle_deviation =
        std::max(report.max_angle_deviation, inf_norm(run.angles.values - ref.angles.values));
    report.max_length_deviation = std::max(report.max_length_deviation, inf_norm(run.lengths - ref.lengths));
  }
  report.agree = report.max_length_deviation <= report.tolerance &&
                 (flavor == Flavor::Hyper || report.max_angle_deviation <= report.tolerance);
  return report;
}

}  // namespace hypmet
