#pragma once

// Triangulated compact pseudo 3-manifolds.
//
// Tetrahedron vertices are 0..3. Edge slots inside a tetrahedron follow the
// lexicographic order (01, 02, 03, 12, 13, 23); slot s and 5 - s are
// opposite, and quad q in {0,1,2} is the pair {q, 5 - q}. Face f is the face
// opposite vertex f.

#include <Eigen/Core>
#include <array>
#include <vector>

namespace hypmet {

struct FaceGluing {
  int tet = 0;
  int face = 0;
  int to_tet = 0;
  int to_face = 0;
  // Images (vertices of to_tet) of the vertices of `face`, listed in
  // increasing order of the source vertex.
  std::array<int, 3> perm{};
};

struct GluingSpec {
  int tets = 0;
  std::vector<FaceGluing> gluings;
};

struct EdgeInstance {
  int tet;
  int slot;
  bool operator==(const EdgeInstance&) const = default;
};

/// Immutable combinatorial data of a glued complex. Class identifiers are
/// stable: classes are numbered in order of their smallest instance
/// (tet-major, then slot or vertex).
struct Complex {
  int num_tets = 0;
  int num_edges = 0;
  int num_vertices = 0;
  bool closed = true;

  std::vector<std::array<int, 6>> edge_of;    // [tet][slot] -> edge class
  std::vector<std::array<int, 4>> vertex_of;  // [tet][vertex] -> vertex class
  std::vector<std::vector<EdgeInstance>> incidence;  // per edge class
  std::vector<std::array<int, 2>> endpoints;         // per edge class, sorted
  std::vector<bool> boundary_edge;
  std::vector<std::array<bool, 4>> face_glued;  // [tet][face]

  int num_quads() const { return 3 * num_tets; }
};

Complex build_complex(const GluingSpec& spec);

/// Lengths of tet t in slot order.
Eigen::Matrix<double, 6, 1> restrict_to_tet(const Complex& c, const Eigen::VectorXd& x, int tet);

/// (w + x)(e) = w(v) + w(v') + x(e) for e with endpoints v, v'.
Eigen::VectorXd gauge_apply(const Complex& c, const Eigen::VectorXd& w, const Eigen::VectorXd& x);

/// B[e][v] = number of endpoints of e in vertex class v.
Eigen::MatrixXd gauge_matrix(const Complex& c);

/// x minus its least-squares projection onto col(B).
Eigen::VectorXd gauge_project(const Complex& c, const Eigen::VectorXd& x);

int gauge_rank(const Complex& c);

/// Dimension of the kernel of x -> (x|σ mod K4 vertex gauge)_σ. Equals
/// gauge_rank(c) when the kernel is exactly col(B).
int restriction_kernel_dimension(const Complex& c);

// Slot helpers shared with the ideal kernel's paired slot order
// (slots i and i + 3 opposite): lex slot -> paired slot and back.
inline constexpr std::array<int, 6> kPairedFromLex = {0, 1, 2, 5, 4, 3};

inline constexpr int quad_of_slot(int slot) { return slot < 3 ? slot : 5 - slot; }

}  // namespace hypmet
