#include <json.hpp>

#include "ischema/dsl.hpp"

namespace ischema {

using json = nlohmann::json;

std::string serialize_trace(const Trace& trace, const std::vector<EntityDecl>& entities) {
  json doc;
  json ents = json::array();
  for (const auto& e : entities) {
    json params = json::array();
    for (const auto& p : e.params) params.push_back({{"name", p.name}, {"value", format_rational(p.value)}});
    ents.push_back({{"id", e.id}, {"sort", e.sort}, {"shape", std::string(to_string(e.shape))}, {"params", params}});
  }
  doc["entities"] = ents;
  doc["length"] = trace.length();
  json states = json::array();
  for (const auto& s : trace.states) {
    json values = json::object();
    for (const auto& [key, value] : s.values) values[key.first + "." + key.second] = format_rational(value);
    json forces = json::array();
    for (const auto& f : s.forces) {
      forces.push_back({{"label", f.label},
                        {"target", f.target},
                        {"dx", format_rational(f.dx)},
                        {"dy", format_rational(f.dy)},
                        {"mode", std::string(to_string(f.mode))}});
    }
    states.push_back({{"t", s.time}, {"values", values}, {"forces", forces}});
  }
  doc["states"] = states;
  return doc.dump(2) + "\n";
}

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::InvalidTrace, "malformed trace document: " + what);
}

Rational rational_field(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a rational string");
  auto v = parse_rational(j.get<std::string>());
  if (!v) bad(what + " is not a rational: " + j.get<std::string>());
  return *v;
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) bad(std::string("missing \"") + key + "\"");
  return obj.at(key);
}

std::string string_field(const json& obj, const char* key) {
  const json& j = field(obj, key);
  if (!j.is_string()) bad(std::string("\"") + key + "\" must be a string");
  return j.get<std::string>();
}

}  // namespace

TraceDocument parse_trace_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(e.what());
  }
  TraceDocument out;
  const json& ents = field(doc, "entities");
  if (!ents.is_array()) bad("\"entities\" must be an array");
  for (const auto& e : ents) {
    EntityDecl decl;
    decl.id = string_field(e, "id");
    decl.sort = string_field(e, "sort");
    auto shape = shape_from_string(string_field(e, "shape"));
    if (!shape) bad("unknown shape for " + decl.id);
    decl.shape = *shape;
    const json& params = field(e, "params");
    if (!params.is_array()) bad("\"params\" must be an array");
    for (const auto& p : params) {
      decl.params.push_back(Param{string_field(p, "name"), rational_field(field(p, "value"), "param value")});
    }
    out.entities.push_back(std::move(decl));
  }
  const json& states = field(doc, "states");
  if (!states.is_array()) bad("\"states\" must be an array");
  for (const auto& s : states) {
    State st;
    const json& t = field(s, "t");
    if (!t.is_number_unsigned()) bad("\"t\" must be a natural number");
    st.time = t.get<std::size_t>();
    const json& values = field(s, "values");
    if (!values.is_object()) bad("\"values\" must be an object");
    for (const auto& [key, value] : values.items()) {
      auto dot = key.find('.');
      if (dot == std::string::npos) bad("value key without '.': " + key);
      st.values[{key.substr(0, dot), key.substr(dot + 1)}] = rational_field(value, key);
    }
    const json& forces = field(s, "forces");
    if (!forces.is_array()) bad("\"forces\" must be an array");
    for (const auto& f : forces) {
      ForceFluent ff;
      ff.label = string_field(f, "label");
      ff.target = string_field(f, "target");
      ff.dx = rational_field(field(f, "dx"), "dx");
      ff.dy = rational_field(field(f, "dy"), "dy");
      std::string mode = string_field(f, "mode");
      if (mode != "active" && mode != "passive") bad("unknown force mode " + mode);
      ff.mode = mode == "active" ? ForceMode::Active : ForceMode::Passive;
      st.forces.insert(ff);
    }
    out.trace.states.push_back(std::move(st));
  }
  const json& length = field(doc, "length");
  if (!length.is_number_unsigned() || length.get<std::size_t>() != out.trace.length()) {
    bad("\"length\" does not match the number of states");
  }
  validate_trace(out.trace, out.entities);
  return out;
}

}  // namespace ischema
