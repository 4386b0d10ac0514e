#pragma once

#include "json.hpp"
#include <string>

#include "hypmet/complex.hpp"

namespace hypmet {

/// Parses {"tets": n, "gluings": [{"tet", "face", "to_tet", "to_face", "perm"}]}.
/// Throws InputError on malformed documents.
GluingSpec gluing_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const GluingSpec& spec);

GluingSpec read_triangulation(const std::string& path);

/// Edge classes, vertex classes and incidences, keyed by stable ids.
nlohmann::json describe_complex(const Complex& c);

}  // namespace hypmet
