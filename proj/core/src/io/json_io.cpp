#include "specstab/io/json_io.hpp"

#include <ostream>

#include <nlohmann/json.hpp>

#include "specstab/error.hpp"

namespace specstab {

using nlohmann::json;

namespace {

json ring_json(const Ring& r) {
  json a = json::array();
  for (Point p : r) a.push_back({p.x, p.y});
  return a;
}

Ring ring_from(const json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError("domain json: field '" + field + "' must be an array of points");
  Ring r;
  for (size_t i = 0; i < j.size(); ++i) {
    const json& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ValidationError("domain json: field '" + field + "[" + std::to_string(i) + "]' must be [x, y]");
    r.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return r;
}

}  // namespace

std::string domain_to_json(const PolygonalDomain& d) {
  json j;
  j["name"] = d.name();
  j["outer"] = ring_json(d.outer());
  j["holes"] = json::array();
  for (const auto& h : d.holes()) j["holes"].push_back(ring_json(h));
  return j.dump();
}

PolygonalDomain domain_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("domain json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("outer")) throw ValidationError("domain json: missing field 'outer'");
  std::vector<Ring> holes;
  if (j.contains("holes")) {
    if (!j["holes"].is_array()) throw ValidationError("domain json: field 'holes' must be an array");
    for (size_t i = 0; i < j["holes"].size(); ++i)
      holes.push_back(ring_from(j["holes"][i], "holes[" + std::to_string(i) + "]"));
  }
  const std::string name = j.value("name", std::string("custom"));
  return PolygonalDomain(name, ring_from(j["outer"], "outer"), std::move(holes));
}

void write_mesh_json(std::ostream& os, const TriMesh& m) {
  json j;
  j["domain"] = m.domain_ref();
  j["h"] = m.h_target();
  j["vertices"] = json::array();
  for (Point p : m.vertices()) j["vertices"].push_back({p.x, p.y});
  j["triangles"] = m.triangles();
  json b = json::array();
  for (bool f : m.boundary_flags()) b.push_back(f ? 1 : 0);
  j["boundary"] = std::move(b);
  os << j.dump() << '\n';
}

TriMesh mesh_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("mesh json: ") + e.what());
  }
  for (const char* f : {"vertices", "triangles", "boundary"})
    if (!j.is_object() || !j.contains(f) || !j[f].is_array())
      throw ValidationError(std::string("mesh json: missing array field '") + f + "'");
  std::vector<Point> v;
  for (const auto& p : j["vertices"]) {
    if (!p.is_array() || p.size() != 2) throw ValidationError("mesh json: vertices must be [x, y] pairs");
    v.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  std::vector<Triangle> t;
  for (const auto& tri : j["triangles"]) {
    if (!tri.is_array() || tri.size() != 3) throw ValidationError("mesh json: triangles must be index triples");
    t.push_back({tri[0].get<int>(), tri[1].get<int>(), tri[2].get<int>()});
  }
  std::vector<bool> b;
  for (const auto& f : j["boundary"]) b.push_back(f.is_boolean() ? f.get<bool>() : f.get<int>() != 0);
  return TriMesh(std::move(v), std::move(t), std::move(b), j.value("h", 0.0), j.value("domain", std::string()));
}

void write_eigenset_json(std::ostream& os, const EigenSet& e, bool include_vectors) {
  json j;
  j["kind"] = to_string(e.kind);
  j["eigenvalues"] = e.eigenvalues;
  j["residuals"] = e.residuals;
  j["iterations"] = e.iterations;
  if (e.mesh) j["n_vertices"] = e.mesh->n_vertices();
  if (include_vectors) {
    j["vectors"] = json::array();
    for (const auto& v : e.eigenvectors)
      j["vectors"].push_back(std::vector<double>(v.values().data(), v.values().data() + v.values().size()));
  }
  os << j.dump(2) << '\n';
}

}  // namespace specstab
