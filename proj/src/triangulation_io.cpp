#include "hypmet/triangulation_io.hpp"

#include <fstream>

#include "hypmet/errors.hpp"

namespace hypmet {

namespace {

int integer_field(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer())
    throw InputError(std::string("triangulation: missing or non-integer field '") + key + "'");
  return obj[key].get<int>();
}

}  // namespace

GluingSpec gluing_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("triangulation: top level must be an object");
  GluingSpec spec;
  spec.tets = integer_field(doc, "tets");
  if (doc.contains("gluings")) {
    if (!doc["gluings"].is_array()) throw InputError("triangulation: 'gluings' must be an array");
    for (const auto& g : doc["gluings"]) {
      if (!g.is_object()) throw InputError("triangulation: each gluing must be an object");
      FaceGluing fg;
      fg.tet = integer_field(g, "tet");
      fg.face = integer_field(g, "face");
      fg.to_tet = integer_field(g, "to_tet");
      fg.to_face = integer_field(g, "to_face");
      if (!g.contains("perm") || !g["perm"].is_array() || g["perm"].size() != 3)
        throw InputError("triangulation: 'perm' must be an array of three vertices");
      for (int i = 0; i < 3; ++i) {
        if (!g["perm"][i].is_number_integer()) throw InputError("triangulation: 'perm' entries must be integers");
        fg.perm[i] = g["perm"][i].get<int>();
      }
      spec.gluings.push_back(fg);
    }
  }
  return spec;
}

nlohmann::json to_json(const GluingSpec& spec) {
  nlohmann::json gl = nlohmann::json::array();
  for (const auto& g : spec.gluings)
    gl.push_back({{"tet", g.tet}, {"face", g.face}, {"to_tet", g.to_tet}, {"to_face", g.to_face}, {"perm", g.perm}});
  return {{"tets", spec.tets}, {"gluings", gl}};
}

GluingSpec read_triangulation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open triangulation file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("triangulation file '" + path + "' is not valid JSON: " + e.what());
  }
  return gluing_spec_from_json(doc);
}

nlohmann::json describe_complex(const Complex& c) {
  nlohmann::json edges = nlohmann::json::array();
  for (int e = 0; e < c.num_edges; ++e) {
    nlohmann::json inst = nlohmann::json::array();
    for (const auto& i : c.incidence[e]) inst.push_back({i.tet, i.slot});
    edges.push_back({{"id", e},
                     {"endpoints", c.endpoints[e]},
                     {"boundary", static_cast<bool>(c.boundary_edge[e])},
                     {"instances", inst}});
  }
  nlohmann::json tets = nlohmann::json::array();
  for (int t = 0; t < c.num_tets; ++t) tets.push_back({{"edges", c.edge_of[t]}, {"vertices", c.vertex_of[t]}});
  return {{"edges", c.num_edges},
          {"vertices", c.num_vertices},
          {"tets", c.num_tets},
          {"closed", c.closed},
          {"edge_classes", edges},
          {"tetrahedra", tets}};
}

}  // namespace hypmet
