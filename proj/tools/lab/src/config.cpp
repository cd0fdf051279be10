#include "specstab/lab/config.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specstab/io/json_io.hpp"
#include "specstab/lab/scenarios.hpp"

namespace specstab::lab {

using nlohmann::json;

namespace {

int line_of(const std::string& text, size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "line " << line_of(text, e.byte > 0 ? e.byte - 1 : 0) << ": malformed JSON (" << e.what() << ")";
    throw ConfigError(os.str());
  }
  if (!j.is_object()) throw ConfigError("line 1: config must be a JSON object");

  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") {
      if (!v.is_string()) field_error(key, "expected a string");
      c.scenario = v.get<std::string>();
    } else if (key == "kind") {
      if (!v.is_string()) field_error(key, "expected \"dirichlet\" or \"neumann\"");
      std::string s = v.get<std::string>();
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      if (s == "dirichlet") c.kind = BoundaryKind::Dirichlet;
      else if (s == "neumann") c.kind = BoundaryKind::Neumann;
      else field_error(key, "expected \"dirichlet\" or \"neumann\", got \"" + s + "\"");
    } else if (key == "n") {
      if (!v.is_number_integer()) field_error(key, "expected an integer");
      c.n = v.get<int>();
    } else if (key == "h") {
      c.h = number(v, key);
    } else if (key == "deltas") {
      if (!v.is_array()) field_error(key, "expected an array of numbers");
      c.deltas.clear();
      for (size_t i = 0; i < v.size(); ++i) c.deltas.push_back(number(v[i], key + "[" + std::to_string(i) + "]"));
    } else if (key == "tolerances") {
      if (!v.is_object()) field_error(key, "expected an object of numbers");
      for (const auto& [tk, tv] : v.items()) c.tolerances[tk] = number(tv, key + "." + tk);
    } else if (key == "output_dir") {
      if (!v.is_string()) field_error(key, "expected a string");
      c.output_dir = v.get<std::string>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) field_error(key, "expected a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "omega") {
      c.omega = number(v, key);
    } else if (key == "covering_radius") {
      c.covering_radius = number(v, key);
    } else if (key == "domain") {
      if (!v.is_object()) field_error(key, "expected a domain object");
      c.domain = v.dump();
    } else {
      field_error(key, "unknown field");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  if (!find_scenario(c.scenario)) field_error("scenario", "unknown scenario \"" + c.scenario + "\"");
  if (c.n < 1) field_error("n", "must be at least 1");
  if (!(c.h > 0.0) || c.h > 1.0) field_error("h", "must lie in (0, 1]");
  for (size_t i = 0; i < c.deltas.size(); ++i) {
    if (!(c.deltas[i] > 0.0)) field_error("deltas[" + std::to_string(i) + "]", "must be positive");
    if (i > 0 && !(c.deltas[i] > c.deltas[i - 1]))
      field_error("deltas[" + std::to_string(i) + "]", "deltas must be strictly increasing");
  }
  const auto* info = find_scenario(c.scenario);
  if (info->family && c.deltas.empty()) field_error("deltas", "must not be empty");
  if (!(c.omega > 0.0) || c.omega > 2.0 * std::numbers::pi) field_error("omega", "must lie in (0, 2 pi]");
  if (!(c.covering_radius > 0.0)) field_error("covering_radius", "must be positive");
  if (c.output_dir.empty()) field_error("output_dir", "must not be empty");
  for (const auto& [k, v] : c.tolerances)
    if (!(v >= 0.0)) field_error("tolerances." + k, "must be nonnegative");
  if (!c.domain.empty()) {
    try {
      (void)domain_from_json(c.domain);
    } catch (const ValidationError& e) {
      field_error("domain", e.what());
    }
  }
  if (c.scenario == "custom" && c.domain.empty()) field_error("domain", "required by the custom scenario");
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["kind"] = to_string(c.kind);
  j["n"] = c.n;
  j["h"] = c.h;
  j["deltas"] = c.deltas;
  j["tolerances"] = c.tolerances;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["omega"] = c.omega;
  j["covering_radius"] = c.covering_radius;
  if (!c.domain.empty()) j["domain"] = json::parse(c.domain);
  return j.dump(2);
}

double tolerance(const RunConfig& c, const std::string& key, double fallback) {
  const auto it = c.tolerances.find(key);
  return it == c.tolerances.end() ? fallback : it->second;
}

}  // namespace specstab::lab
