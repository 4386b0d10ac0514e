#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/LU>
#include <cmath>
#include <numbers>

#include "hypmet/errors.hpp"
#include "hypmet/hyperideal_kernel.hpp"
#include "hypmet/linear_program.hpp"
#include "hypmet/solver.hpp"
#include "hypmet/triangulation_io.hpp"
#include "oracles.hpp"

using namespace hypmet;
using std::numbers::pi;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Complex fixture(const char* name) { return build_complex(read_triangulation(oracle::fixture(name))); }

double inf(const VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

// Interior assignment: ideal angles from a random point of the open simplex,
// hyper angles uniform in (0.05, π/3) so that every vertex sum stays below π.
AngleAssignment random_interior(const Complex& c, Flavor flavor, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  AngleAssignment a{flavor, VectorXd(a.size_for(c))};
  for (int t = 0; t < c.num_tets; ++t) {
    if (flavor == Flavor::Ideal) {
      const Eigen::Vector3d w(u(rng), u(rng), u(rng));
      a.values.segment<3>(3 * t) = pi * w / w.sum();
    } else {
      for (int s = 0; s < 6; ++s) a.values[6 * t + s] = u(rng) * pi / 3;
    }
  }
  return a;
}

// Linear equalities cutting out the assignments with prescribed cone angles.
MatrixXd constraint_matrix(const Complex& c, Flavor flavor) {
  const int n = flavor == Flavor::Ideal ? 3 * c.num_tets : 6 * c.num_tets;
  MatrixXd m = MatrixXd::Zero(c.num_edges + (flavor == Flavor::Ideal ? c.num_tets : 0), n);
  for (int e = 0; e < c.num_edges; ++e)
    for (const auto& inst : c.incidence[e])
      m(e, flavor == Flavor::Ideal ? 3 * inst.tet + quad_of_slot(inst.slot) : 6 * inst.tet + inst.slot) += 1;
  if (flavor == Flavor::Ideal)
    for (int t = 0; t < c.num_tets; ++t) m.block(c.num_edges + t, 3 * t, 1, 3).setOnes();
  return m;
}

// Largest step along d keeping the assignment in the closed polytope.
double max_step(const Complex& c, const AngleAssignment& a, const VectorXd& d) {
  double step = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d.size(); ++i)
    if (d[i] < 0) step = std::min(step, -a.values[i] / d[i]);
  if (a.flavor == Flavor::Hyper)
    for (int t = 0; t < c.num_tets; ++t)
      for (int v = 0; v < 4; ++v) {
        double sum = 0, rate = 0;
        for (int s : hyper::slots_at_vertex(v)) {
          sum += a.values[6 * t + s];
          rate += d[6 * t + s];
        }
        if (rate > 0) step = std::min(step, (pi - sum) / rate);
      }
  return step;
}

}  // namespace

TEST_CASE("linear programs") {
  SUBCASE("optimum at a vertex") {
    MatrixXd A(2, 2);
    A << 1, 1, 1, 3;
    const auto s = solve_lp(MatrixXd(0, 2), VectorXd(0), A, Eigen::Vector2d(4, 6), Eigen::Vector2d(3, 2));
    REQUIRE(s.status == LpSolution::Optimal);
    CHECK(s.objective == doctest::Approx(12));
    CHECK(inf(s.x - Eigen::Vector2d(4, 0)) < 1e-12);
  }
  SUBCASE("equalities with a redundant row") {
    MatrixXd E(3, 3);
    E << 1, 1, 1, 2, 2, 2, 1, 0, -1;
    const auto s = solve_lp(E, Eigen::Vector3d(1, 2, 0), MatrixXd(0, 3), VectorXd(0), Eigen::Vector3d(0, 1, 0));
    REQUIRE(s.status == LpSolution::Optimal);
    CHECK(s.objective == doctest::Approx(1));
  }
  SUBCASE("infeasible and unbounded") {
    MatrixXd E(1, 2);
    E << 1, 1;
    CHECK(solve_lp(E, VectorXd::Constant(1, -1), MatrixXd(0, 2), VectorXd(0), Eigen::Vector2d(1, 0)).status ==
          LpSolution::Infeasible);
    CHECK(solve_lp(MatrixXd(0, 2), VectorXd(0), MatrixXd(0, 2), VectorXd(0), Eigen::Vector2d(1, 0)).status ==
          LpSolution::Unbounded);
  }
}

TEST_CASE("feasibility") {
  const Complex dbl = fixture("double_tet.json"), fig8 = fixture("fig8.json");
  const auto a = feasibility(fig8, VectorXd::Constant(2, 2 * pi), Flavor::Ideal);
  CHECK(a.status == FeasibilityStatus::PositiveFeasible);
  CHECK(inf(cone_angles(fig8, a.witness) - VectorXd::Constant(2, 2 * pi)) < 1e-9);
  CHECK_NOTHROW(check_assignment(fig8, a.witness));

  const auto b = feasibility(dbl, VectorXd::Constant(6, 2 * oracle::kAcos23), Flavor::Hyper);
  CHECK(b.status == FeasibilityStatus::PositiveFeasible);
  CHECK(b.witness.values.minCoeff() > 0);
  CHECK(inf(cone_angles(dbl, b.witness) - VectorXd::Constant(6, 2 * oracle::kAcos23)) < 1e-9);

  CHECK(feasibility(fig8, VectorXd::Constant(2, 6 * pi), Flavor::Ideal).status == FeasibilityStatus::Infeasible);
  // A degenerate target: every tetrahedron forced to the angles (π, 0, 0).
  const auto flat = cone_angles(dbl, AngleAssignment{Flavor::Ideal, (VectorXd(6) << pi, 0, 0, pi, 0, 0).finished()});
  CHECK(feasibility(dbl, flat, Flavor::Ideal).status == FeasibilityStatus::NonnegativeOnly);
}

TEST_CASE("solve examples") {
  const Complex dbl = fixture("double_tet.json"), fig8 = fixture("fig8.json");
  const auto r = solve_metric(fig8, VectorXd::Constant(2, 2 * pi), Flavor::Ideal);
  CHECK(inf(r.angles.values - VectorXd::Constant(6, pi / 3)) < 1e-7);
  CHECK(r.volume == doctest::Approx(oracle::kFig8Volume).epsilon(1e-12));
  CHECK(inf(r.lengths) < 1e-9);
  CHECK(inf(r.achieved - VectorXd::Constant(2, 2 * pi)) <= 1e-9);

  const auto h = solve_metric(dbl, VectorXd::Constant(6, 2 * oracle::kAcos23), Flavor::Hyper);
  CHECK(inf(h.lengths - VectorXd::Constant(6, oracle::kAcosh2)) < 1e-8);
  CHECK(h.volume == doctest::Approx(2 * oracle::kHyperVolAcos23).epsilon(1e-9));
  CHECK(h.W == doctest::Approx(-2 * h.volume).epsilon(1e-9));

  const auto m = max_volume_angles(fig8, VectorXd::Constant(2, 2 * pi), Flavor::Ideal);
  CHECK(m.volume == doctest::Approx(6 * oracle::kLobPi3).epsilon(1e-12));
}

TEST_CASE("ideal solutions from two starts differ by the gauge action") {
  std::mt19937_64 rng(101);
  const Complex c = fixture("double_tet.json");
  const VectorXd k = cone_angles(c, random_interior(c, Flavor::Ideal, rng));
  SolveOptions o1, o2;
  o1.initial = random_start(c, Flavor::Ideal, 1);
  o2.initial = random_start(c, Flavor::Ideal, 2);
  const auto r1 = solve_metric(c, k, Flavor::Ideal, o1), r2 = solve_metric(c, k, Flavor::Ideal, o2);
  CHECK(inf(r1.angles.values - r2.angles.values) < 1e-7);
  CHECK(inf(r1.lengths - r2.lengths) < 1e-7);
}

TEST_CASE("solver failures") {
  const Complex single = build_complex({1, {}});
  try {
    solve_metric(single, VectorXd::Constant(6, pi), Flavor::Ideal);
    FAIL("expected a solve error");
  } catch (const SolveError& e) {
    CHECK(e.kind() == SolveFailure::NotClosed);
  }
  const Complex fig8 = fixture("fig8.json");
  try {
    solve_metric(fig8, VectorXd::Constant(2, 6 * pi), Flavor::Ideal);
    FAIL("expected a solve error");
  } catch (const SolveError& e) {
    CHECK(e.kind() == SolveFailure::NotPositiveFeasible);
  }
  SolveOptions o;
  o.max_iter = 1;
  o.initial = VectorXd::Constant(2, 3.0);
  try {
    solve_metric(fig8, VectorXd::Constant(2, 2.0), Flavor::Hyper, o);
    FAIL("expected a solve error");
  } catch (const SolveError& e) {
    CHECK(e.kind() == SolveFailure::MaxIterations);
  }
}

TEST_CASE("maximum volume dominates sampled assignments") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> frac(0.0, 0.95);
  for (const char* name : {"double_tet.json", "fig8.json"}) {
    const Complex c = fixture(name);
    for (Flavor flavor : {Flavor::Ideal, Flavor::Hyper}) {
      const VectorXd k = cone_angles(c, random_interior(c, flavor, rng));
      const auto best = max_volume_angles(c, k, flavor);
      const MatrixXd null = Eigen::FullPivLU<MatrixXd>(constraint_matrix(c, flavor)).kernel();
      REQUIRE(null.cols() > 0);
      int checked = 0;
      for (int n = 0; n < 100; ++n) {
        VectorXd d = null * oracle::uniform(rng, static_cast<int>(null.cols()), -1, 1);
        d /= inf(d);
        const double step = frac(rng) * max_step(c, best.angles, d);
        AngleAssignment theta{flavor, best.angles.values + step * d};
        theta.values = theta.values.cwiseMax(0.0);
        CHECK(volume(c, theta) <= best.volume + 1e-9);
        ++checked;
      }
      CHECK(checked == 100);
    }
  }
}

TEST_CASE("duality gap") {
  std::mt19937_64 rng(107);
  for (const char* name : {"fig8.json", "double_tet.json"}) {
    const Complex c = fixture(name);
    for (Flavor flavor : {Flavor::Ideal, Flavor::Hyper}) {
      const VectorXd k = cone_angles(c, random_interior(c, flavor, rng));
      const auto r = solve_metric(c, k, flavor);
      CHECK(std::abs(duality_gap(c, k, r, {r.lengths})) < 1e-12);
      std::vector<VectorXd> near, far;
      for (int n = 0; n < 1000; ++n) near.push_back(r.lengths + oracle::uniform(rng, c.num_edges, -0.1, 0.1));
      CHECK(duality_gap(c, k, r, near) <= 1e-9);
      for (int n = 0; n < 20; ++n) {
        VectorXd x = oracle::uniform(rng, c.num_edges, -1, 1);
        if (flavor == Flavor::Ideal) x = gauge_project(c, x);
        x *= 10 / inf(x);
        CHECK(duality_gap(c, k, r, {x}) < 0);
      }
    }
  }
}

TEST_CASE("classification of maximizers") {
  const Complex fig8 = fixture("fig8.json");
  const auto r = solve_metric(fig8, VectorXd::Constant(2, 2 * pi), Flavor::Ideal);
  for (const auto& v : classify_maximizer(fig8, r)) CHECK(v.kind == TetVerdictKind::Realized);

  Eigen::Matrix<double, 6, 1> l;
  l << 2 * std::log(2.0), 0, 0, 2 * std::log(2.0), 0, 0;
  const auto v = classify_ideal_tet(l, Eigen::Vector3d(pi, 0, 0));
  CHECK(v.kind == TetVerdictKind::FlatIdeal);
  CHECK(v.flat_index == 0);
  CHECK(v.residual == doctest::Approx(2));
  CHECK_THROWS_AS(classify_ideal_tet(l, Eigen::Vector3d(pi / 2, pi / 2, 0)), NumericalError);

  Eigen::Matrix<double, 6, 1> omega;
  omega << 3, 0.1, 0.1, 0.1, 0.1, 3;
  REQUIRE(classify_lengths<double>(omega).kind == LengthClass::FlatInterior);
  const auto h = classify_hyper_tet(omega, hyper_angles_from_lengths<double>(omega));
  CHECK(h.kind == TetVerdictKind::FlatHyper);
  CHECK(h.flat_index == 0);
  CHECK(h.residual > 0);
  const Eigen::Matrix<double, 6, 1> reg = Eigen::Matrix<double, 6, 1>::Constant(oracle::kAcosh2);
  CHECK(classify_hyper_tet(reg, hyper_angles_from_lengths<double>(reg)).kind == TetVerdictKind::Realized);
}

TEST_CASE("rigidity across random starts") {
  std::mt19937_64 rng(109);
  const Complex dbl = fixture("double_tet.json"), fig8 = fixture("fig8.json");
  const auto ideal = rigidity_check(fig8, VectorXd::Constant(2, 2 * pi), Flavor::Ideal, 10, 7);
  CHECK(ideal.agree);
  CHECK(ideal.starts == 10);
  const auto hyper = rigidity_check(dbl, VectorXd::Constant(6, 2 * oracle::kAcos23), Flavor::Hyper, 10, 7);
  CHECK(hyper.agree);
  for (const auto& run : hyper.runs) CHECK(inf(run.lengths - VectorXd::Constant(6, oracle::kAcosh2)) < 1e-8);

  const AngleAssignment base = random_interior(fig8, Flavor::Ideal, rng);
  VectorXd k = cone_angles(fig8, base) + oracle::uniform(rng, 2, -0.01, 0.01);
  k *= 4 * pi / k.sum();  // keep the angle budget of two ideal tetrahedra
  REQUIRE(feasibility(fig8, k, Flavor::Ideal).status == FeasibilityStatus::PositiveFeasible);
  CHECK(rigidity_check(fig8, k, Flavor::Ideal, 10, 11).agree);
}

TEST_CASE("descent is monotone and the tracked objective does not drift") {
  std::mt19937_64 rng(113);
  for (const char* name : {"fig8.json", "double_tet.json"}) {
    const Complex c = fixture(name);
    for (Flavor flavor : {Flavor::Ideal, Flavor::Hyper}) {
      const VectorXd k = cone_angles(c, random_interior(c, flavor, rng));
      SolveOptions o;
      o.initial = random_start(c, flavor, 3);
      const auto r = solve_metric(c, k, flavor, o);
      for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-12);
      CHECK(std::abs(r.objective_trace.back() + r.W) < 1e-9);
      CHECK(inf(cone_angles(c, angles_of_metric(c, r.lengths, flavor)) - k) <= 1e-9);
    }
  }
}

TEST_CASE("W is midpoint convex in the cone angles") {
  std::mt19937_64 rng(127);
  for (const char* name : {"fig8.json", "double_tet.json"}) {
    const Complex c = fixture(name);
    for (Flavor flavor : {Flavor::Ideal, Flavor::Hyper}) {
      for (int n = 0; n < 5; ++n) {
        const VectorXd k1 = cone_angles(c, random_interior(c, flavor, rng));
        const VectorXd k2 = cone_angles(c, random_interior(c, flavor, rng));
        const double w1 = solve_metric(c, k1, flavor).W, w2 = solve_metric(c, k2, flavor).W;
        const double wm = solve_metric(c, (k1 + k2) / 2, flavor).W;
        CHECK(wm <= (w1 + w2) / 2 + 1e-8);
      }
    }
  }
}
