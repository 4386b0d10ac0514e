#include "hypmet/complex.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

#include "hypmet/errors.hpp"
#include "hypmet/hyperideal_kernel.hpp"

namespace hypmet {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // Keeps the smaller index as root so roots are canonical.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<int> parent_;
};

std::array<int, 3> face_vertices(int face) {
  std::array<int, 3> v{};
  int n = 0;
  for (int i = 0; i < 4; ++i)
    if (i != face) v[n++] = i;
  return v;
}

[[noreturn]] void reject(std::size_t index, const std::string& why) {
  std::ostringstream msg;
  msg << "gluing " << index << ": " << why;
  throw InputError(msg.str());
}

void check_gluing(const GluingSpec& spec, std::size_t index) {
  const auto& g = spec.gluings[index];
  auto in_range = [&](int t) { return t >= 0 && t < spec.tets; };
  if (!in_range(g.tet) || !in_range(g.to_tet)) reject(index, "tetrahedron index out of range");
  if (g.face < 0 || g.face > 3 || g.to_face < 0 || g.to_face > 3) reject(index, "face index out of range");
  if (g.tet == g.to_tet && g.face == g.to_face) reject(index, "face glued to itself");
  std::array<bool, 4> used{};
  for (int image : g.perm) {
    if (image < 0 || image > 3) reject(index, "vertex image out of range");
    if (image == g.to_face) reject(index, "vertex image not on the target face");
    if (used[image]) reject(index, "vertex map is not a bijection");
    used[image] = true;
  }
}

// Assigns consecutive ids to the union-find roots in increasing order of
// their smallest member.
std::vector<int> label_classes(DisjointSets& sets, int n, int& count) {
  std::vector<int> root_label(n, -1), label(n);
  count = 0;
  for (int i = 0; i < n; ++i) {
    const int r = sets.find(i);
    if (root_label[r] < 0) root_label[r] = count++;
    label[i] = root_label[r];
  }
  return label;
}

}  // namespace

Complex build_complex(const GluingSpec& spec) {
  if (spec.tets <= 0) throw InputError("triangulation must contain at least one tetrahedron");
  const int T = spec.tets;
  Complex c;
  c.num_tets = T;
  c.face_glued.assign(T, {false, false, false, false});

  DisjointSets vertex_sets(4 * T), edge_sets(6 * T);
  for (std::size_t n = 0; n < spec.gluings.size(); ++n) {
    check_gluing(spec, n);
    const auto& g = spec.gluings[n];
    if (c.face_glued[g.tet][g.face]) reject(n, "face already glued");
    c.face_glued[g.tet][g.face] = true;
    if (c.face_glued[g.to_tet][g.to_face]) reject(n, "target face already glued");
    c.face_glued[g.to_tet][g.to_face] = true;

    const auto src = face_vertices(g.face);
    for (int i = 0; i < 3; ++i) vertex_sets.unite(4 * g.tet + src[i], 4 * g.to_tet + g.perm[i]);
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const int from = hyper::slot_of(src[i], src[j]);
        const int to = hyper::slot_of(g.perm[i], g.perm[j]);
        edge_sets.unite(6 * g.tet + from, 6 * g.to_tet + to);
      }
    }
  }

  const auto vlabel = label_classes(vertex_sets, 4 * T, c.num_vertices);
  const auto elabel = label_classes(edge_sets, 6 * T, c.num_edges);

  c.vertex_of.resize(T);
  c.edge_of.resize(T);
  c.incidence.assign(c.num_edges, {});
  c.endpoints.assign(c.num_edges, {-1, -1});
  c.boundary_edge.assign(c.num_edges, false);
  for (int t = 0; t < T; ++t) {
    for (int v = 0; v < 4; ++v) c.vertex_of[t][v] = vlabel[4 * t + v];
    for (int s = 0; s < 6; ++s) {
      const int e = elabel[6 * t + s];
      c.edge_of[t][s] = e;
      c.incidence[e].push_back({t, s});
      const auto [a, b] = hyper::kSlotVertices[s];
      std::array<int, 2> ends = {vlabel[4 * t + a], vlabel[4 * t + b]};
      std::sort(ends.begin(), ends.end());
      if (c.endpoints[e][0] < 0) c.endpoints[e] = ends;
      else if (c.endpoints[e] != ends) throw InputError("inconsistent edge identification");
      // the edge lies on faces opposite the two vertices not on it
      for (int f : hyper::complement(s))
        if (!c.face_glued[t][f]) c.boundary_edge[e] = true;
    }
  }
  for (const auto& faces : c.face_glued)
    for (bool glued : faces) c.closed = c.closed && glued;
  return c;
}

Eigen::Matrix<double, 6, 1> restrict_to_tet(const Complex& c, const Eigen::VectorXd& x, int tet) {
  Eigen::Matrix<double, 6, 1> out;
  for (int s = 0; s < 6; ++s) out[s] = x[c.edge_of[tet][s]];
  return out;
}

Eigen::VectorXd gauge_apply(const Complex& c, const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
  if (w.size() != c.num_vertices || x.size() != c.num_edges) throw InputError("gauge_apply: shape mismatch");
  Eigen::VectorXd out = x;
  for (int e = 0; e < c.num_edges; ++e) out[e] += w[c.endpoints[e][0]] + w[c.endpoints[e][1]];
  return out;
}

Eigen::MatrixXd gauge_matrix(const Complex& c) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(c.num_edges, c.num_vertices);
  for (int e = 0; e < c.num_edges; ++e) {
    B(e, c.endpoints[e][0]) += 1;
    B(e, c.endpoints[e][1]) += 1;
  }
  return B;
}

namespace {

Eigen::MatrixXd column_space_basis(const Eigen::MatrixXd& A) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::Index r = qr.rank();
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.leftCols(r);
}

}  // namespace

Eigen::VectorXd gauge_project(const Complex& c, const Eigen::VectorXd& x) {
  if (x.size() != c.num_edges) throw InputError("gauge_project: shape mismatch");
  const Eigen::MatrixXd Q = column_space_basis(gauge_matrix(c));
  return x - Q * (Q.transpose() * x);
}

int gauge_rank(const Complex& c) {
  return static_cast<int>(Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(gauge_matrix(c)).rank());
}

int restriction_kernel_dimension(const Complex& c) {
  Eigen::MatrixXd k4 = Eigen::MatrixXd::Zero(6, 4);
  for (int s = 0; s < 6; ++s) {
    k4(s, hyper::kSlotVertices[s][0]) = 1;
    k4(s, hyper::kSlotVertices[s][1]) = 1;
  }
  const Eigen::MatrixXd Q = column_space_basis(k4);
  const Eigen::MatrixXd quotient = Eigen::MatrixXd::Identity(6, 6) - Q * Q.transpose();

  Eigen::MatrixXd stacked = Eigen::MatrixXd::Zero(6 * c.num_tets, c.num_edges);
  for (int t = 0; t < c.num_tets; ++t) {
    Eigen::MatrixXd restriction = Eigen::MatrixXd::Zero(6, c.num_edges);
    for (int s = 0; s < 6; ++s) restriction(s, c.edge_of[t][s]) = 1;
    stacked.middleRows(6 * t, 6) = quotient * restriction;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
  qr.setThreshold(1e-10);
  return c.num_edges - static_cast<int>(qr.rank());
}

}  // namespace hypmet
