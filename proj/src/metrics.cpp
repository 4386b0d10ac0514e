#include "hypmet/metrics.hpp"

#include <cmath>
#include <numbers>

#include "hypmet/errors.hpp"
#include "hypmet/hyperideal_kernel.hpp"
#include "hypmet/ideal_kernel.hpp"

namespace hypmet {

using Vec6 = Eigen::Matrix<double, 6, 1>;

const char* to_string(Flavor f) { return f == Flavor::Ideal ? "ideal" : "hyper"; }

Flavor parse_flavor(const std::string& name) {
  if (name == "ideal") return Flavor::Ideal;
  if (name == "hyper") return Flavor::Hyper;
  throw InputError("unknown flavor '" + name + "' (expected ideal or hyper)");
}

namespace {

Vec6 paired(const Vec6& lex) {
  Vec6 out;
  for (int i = 0; i < 6; ++i) out[i] = lex[kPairedFromLex[i]];
  return out;
}

// Dihedral angles, slot order, of the (generalized) tetrahedron with edge
// lengths l_σ. The hyper flavor uses the extension through max(l, 0).
Vec6 slot_angles_of_lengths(const Vec6& l, Flavor flavor) {
  if (flavor == Flavor::Hyper) return hyper_angles_from_lengths<double>(l);
  return paired(ideal_lengths_to_angles<double>(paired(l)));
}

void check_length_shape(const Complex& c, const Eigen::VectorXd& l) {
  if (l.size() != c.num_edges) throw InputError("length vector has the wrong number of entries");
  if (!l.allFinite()) throw DomainError("length vector has non-finite entries");
}

}  // namespace

Vec6 tet_slot_angles(const Complex& c, const AngleAssignment& a, int tet) {
  Vec6 out;
  for (int s = 0; s < 6; ++s)
    out[s] = a.flavor == Flavor::Ideal ? a.values[3 * tet + quad_of_slot(s)] : a.values[6 * tet + s];
  (void)c;
  return out;
}

void check_assignment(const Complex& c, const AngleAssignment& a, double tol) {
  const double pi = std::numbers::pi;
  if (a.values.size() != a.size_for(c)) throw InputError("angle assignment has the wrong number of entries");
  if (!a.values.allFinite() || (a.values.array() < -tol).any())
    throw DomainError("angle assignment must be finite and nonnegative");
  for (int t = 0; t < c.num_tets; ++t) {
    if (a.flavor == Flavor::Ideal) {
      if (std::abs(a.values.segment<3>(3 * t).sum() - pi) > tol)
        throw DomainError("ideal angles of tetrahedron " + std::to_string(t) + " do not sum to pi");
      continue;
    }
    for (int v = 0; v < 4; ++v) {
      double sum = 0;
      for (int s : hyper::slots_at_vertex(v)) sum += a.values[6 * t + s];
      if (sum > pi + tol)
        throw DomainError("hyper-ideal angles at a vertex of tetrahedron " + std::to_string(t) + " exceed pi");
    }
  }
}

AngleAssignment angles_of_metric(const Complex& c, const Eigen::VectorXd& l, Flavor flavor) {
  check_length_shape(c, l);
  if (flavor == Flavor::Hyper && (l.array() <= 0).any())
    throw DomainError("hyper-ideal edge lengths must be positive");
  AngleAssignment out{flavor, Eigen::VectorXd(flavor == Flavor::Ideal ? c.num_quads() : 6 * c.num_tets)};
  for (int t = 0; t < c.num_tets; ++t) {
    const Vec6 a = slot_angles_of_lengths(restrict_to_tet(c, l, t), flavor);
    if (flavor == Flavor::Ideal) out.values.segment<3>(3 * t) = a.head<3>();
    else out.values.segment<6>(6 * t) = a;
  }
  return out;
}

Eigen::VectorXd cone_angles(const Complex& c, const AngleAssignment& a) {
  if (a.values.size() != a.size_for(c)) throw InputError("angle assignment has the wrong number of entries");
  Eigen::VectorXd k = Eigen::VectorXd::Zero(c.num_edges);
  for (int e = 0; e < c.num_edges; ++e)
    for (const auto& inst : c.incidence[e])
      k[e] += a.flavor == Flavor::Ideal ? a.values[3 * inst.tet + quad_of_slot(inst.slot)]
                                        : a.values[6 * inst.tet + inst.slot];
  return k;
}

Eigen::VectorXd curvature(const Complex& c, const Eigen::VectorXd& k) {
  if (k.size() != c.num_edges) throw InputError("cone angle vector has the wrong number of entries");
  Eigen::VectorXd K(c.num_edges);
  for (int e = 0; e < c.num_edges; ++e) K[e] = (c.boundary_edge[e] ? 1 : 2) * std::numbers::pi - k[e];
  return K;
}

Eigen::VectorXd cone_angles_from_curvature(const Complex& c, const Eigen::VectorXd& K) {
  if (K.size() != c.num_edges) throw InputError("curvature vector has the wrong number of entries");
  Eigen::VectorXd k(c.num_edges);
  for (int e = 0; e < c.num_edges; ++e) k[e] = (c.boundary_edge[e] ? 1 : 2) * std::numbers::pi - K[e];
  return k;
}

double volume(const Complex& c, const AngleAssignment& a) {
  check_assignment(c, a, 1e-9);
  double v = 0;
  if (a.flavor == Flavor::Ideal) {
    for (int q = 0; q < a.values.size(); ++q) v += lobachevsky(a.values[q]);
    return v;
  }
  for (int t = 0; t < c.num_tets; ++t) v += hyper_volume_from_angles(tet_slot_angles(c, a, t));
  return v;
}

CovolumeResult cov_complex(const Complex& c, const Eigen::VectorXd& l, Flavor flavor, double tol) {
  check_length_shape(c, l);
  CovolumeResult out{0.0, Eigen::VectorXd::Zero(c.num_edges)};
  for (int t = 0; t < c.num_tets; ++t) {
    const Vec6 lt = restrict_to_tet(c, l, t);
    Vec6 grad;
    if (flavor == Flavor::Ideal) {
      const auto kernel = cov_ideal<double>(paired(lt));
      out.value += kernel.value;
      grad = paired(kernel.gradient);
    } else {
      out.value += cov_hyper(lt, tol);
      grad = hyper_angles_from_lengths<double>(lt);
    }
    for (int s = 0; s < 6; ++s) out.gradient[c.edge_of[t][s]] += grad[s];
  }
  return out;
}

QuadratureResult objective_increment(const Complex& c, const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                                     const Eigen::VectorXd& k, Flavor flavor, double tol) {
  check_length_shape(c, from);
  check_length_shape(c, to);
  const Eigen::VectorXd d = to - from;
  if (d.isZero(0)) return {};
  const double k_dot_d = k.dot(d);

  auto integrand = [&](double t) {
    const Eigen::VectorXd x = from + t * d;
    double sum = 0;
    for (int s = 0; s < c.num_tets; ++s) {
      const Vec6 a = slot_angles_of_lengths(restrict_to_tet(c, x, s), flavor);
      sum += a.dot(restrict_to_tet(c, d, s));
    }
    return sum - k_dot_d;
  };

  const int per_tet = flavor == Flavor::Ideal ? 3 : 18;
  auto indicator = [&](double t) {
    const Eigen::VectorXd x = from + t * d;
    std::vector<double> out(static_cast<std::size_t>(per_tet * c.num_tets));
    for (int s = 0; s < c.num_tets; ++s) {
      const Vec6 lt = restrict_to_tet(c, x, s);
      double* o = out.data() + per_tet * s;
      if (flavor == Flavor::Ideal) {
        const auto y = ideal_log_sides<double>(paired(lt));
        for (int i = 0; i < 3; ++i) o[i] = y[i] - detail::log_add_exp(y[(i + 1) % 3], y[(i + 2) % 3]);
      } else {
        const Vec6 f = phi<double>(lt.cwiseMax(0.0));
        for (int j = 0; j < 6; ++j) {
          o[j] = f[j] - 1;
          o[6 + j] = f[j] + 1;
          o[12 + j] = lt[j];
        }
      }
    }
    return out;
  };
  auto knots = locate_sign_changes(indicator, 0.0, 1.0, 32);
  return integrate_piecewise(integrand, 0.0, 1.0, std::move(knots), tol);
}

}  // namespace hypmet
