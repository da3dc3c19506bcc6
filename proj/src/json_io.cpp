#include "mforge/json_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace mforge {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::Schema, path + ": " + message);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_of(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

std::size_t point_of(const FinitePoset& p, const Json& j, const std::string& path) {
  const std::string name = string_of(j, path);
  auto idx = p.find(name);
  if (!idx) throw Error(ErrorCode::UnknownPoint, path + ": '" + name + "'");
  return *idx;
}

PointSet names_to_set(const FinitePoset& p, const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of point names");
  PointSet s = p.empty_set();
  for (std::size_t i = 0; i < j.size(); ++i) s.insert(point_of(p, j[i], path + "[" + std::to_string(i) + "]"));
  return s;
}

Json set_to_names(const FinitePoset& p, const PointSet& s) {
  Json out = Json::array();
  for (const auto& name : p.names_of(s)) out.push_back(name);
  return out;
}

Json weights_object(const FinitePoset& p, const std::vector<Rational>& weights) {
  Json out = Json::object();
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] != 0) out[p.name(i)] = rational_to_json(weights[i]);
  return out;
}

std::vector<Rational> weights_from_object(const Json& j, const FinitePoset& p, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object from point names to rationals");
  std::vector<Rational> w(p.size(), Rational(0));
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto idx = p.find(it.key());
    if (!idx) throw Error(ErrorCode::UnknownPoint, path + ": '" + it.key() + "'");
    w[*idx] = rational_from_json(it.value(), path + "." + it.key());
  }
  return w;
}

ValuationKind kind_field(const Json& j, const std::string& path, ValuationKind fallback) {
  auto it = j.find("kind");
  if (it == j.end()) return fallback;
  try {
    return parse_kind(string_of(*it, path + ".kind"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    schema_error(path + ".kind", e.what());
  }
}

// Re-raises library errors with the JSON path in front.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema || e.code() == ErrorCode::Parse) throw;
    std::string what = e.what();
    const std::string prefix = std::string(error_code_name(e.code())) + ": ";
    if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
    throw Error(e.code(), path + ": " + what);
  }
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::Parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
  }
}

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  buf << in.rdbuf();
  return buf.str();
}

Json load_json(const std::string& path) { return parse_json_text(read_input(path), path == "-" ? "<stdin>" : path); }

void check_schema_tag(const Json& j, const std::string& path) {
  if (!j.is_object()) return;
  auto it = j.find("schema");
  if (it == j.end()) return;
  if (!it->is_string() || it->get<std::string>() != kSchemaTag)
    schema_error(path + ".schema", std::string("expected \"") + kSchemaTag + "\"");
}

Json rational_to_json(const Rational& r) { return format_rational(r); }

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) schema_error(path, "expected a rational string such as \"1/2\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

Json poset_to_json(const FinitePoset& p) {
  Json leq = Json::array();
  for (const auto& [a, b] : p.strict_pairs()) leq.push_back(Json::array({a, b}));
  return Json{{"elements", p.elements()}, {"leq", leq}};
}

PosetRef poset_from_json(const Json& j, const std::string& path) {
  check_schema_tag(j, path);
  const Json& elements = field(j, "elements", path);
  if (!elements.is_array()) schema_error(path + ".elements", "expected an array of names");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < elements.size(); ++i)
    names.push_back(string_of(elements[i], path + ".elements[" + std::to_string(i) + "]"));
  std::vector<std::pair<std::string, std::string>> pairs;
  if (auto it = j.find("leq"); it != j.end()) {
    if (!it->is_array()) schema_error(path + ".leq", "expected an array of pairs");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& pr = (*it)[i];
      const std::string at = path + ".leq[" + std::to_string(i) + "]";
      if (!pr.is_array() || pr.size() != 2) schema_error(at, "expected a pair [lower, upper]");
      pairs.emplace_back(string_of(pr[0], at + "[0]"), string_of(pr[1], at + "[1]"));
    }
  }
  return at_path(path, [&] { return make_poset(names, pairs); });
}

Json valuation_to_json(const Valuation& nu) {
  return Json{{"kind", kind_name(nu.kind())}, {"weights", weights_object(nu.carrier(), nu.weights())}};
}

Valuation valuation_from_json(const Json& j, const PosetRef& carrier, const std::string& path) {
  const ValuationKind kind = kind_field(j, path, ValuationKind::Prob);
  auto w = weights_from_object(field(j, "weights", path), *carrier, path + ".weights");
  return at_path(path, [&] { return Valuation(carrier, w, kind); });
}

Json monotone_map_to_json(const MonotoneMap& h) {
  Json values = Json::object();
  for (std::size_t i = 0; i < h.values().size(); ++i) values[h.carrier().name(i)] = rational_to_json(h(i));
  return Json{{"values", values}};
}

MonotoneMap monotone_map_from_json(const Json& j, const PosetRef& carrier, const std::string& path) {
  check_schema_tag(j, path);
  const bool wrapped = j.is_object() && j.contains("values");
  const Json& values = wrapped ? j.at("values") : j;
  const std::string at = wrapped ? path + ".values" : path;
  Json plain = values;
  if (plain.is_object()) plain.erase("schema");
  auto v = weights_from_object(plain, *carrier, at);
  return at_path(at, [&] { return MonotoneMap(carrier, v); });
}

Json point_map_to_json(const FinitePoset& source, const FinitePoset& target, const PointMap& f) {
  Json out = Json::object();
  for (std::size_t x = 0; x < source.size(); ++x) out[source.name(x)] = target.name(f.image[x]);
  return out;
}

PointMap point_map_from_json(const Json& j, const FinitePoset& source, const FinitePoset& target,
                             const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object from point names to point names");
  PointMap f{std::vector<std::size_t>(source.size(), 0)};
  std::vector<bool> seen(source.size(), false);
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto x = source.find(it.key());
    if (!x) throw Error(ErrorCode::UnknownPoint, path + ": '" + it.key() + "'");
    f.image[*x] = point_of(target, it.value(), path + "." + it.key());
    seen[*x] = true;
  }
  for (std::size_t x = 0; x < source.size(); ++x)
    if (!seen[x]) schema_error(path, "no image for '" + source.name(x) + "'");
  for (std::size_t x = 0; x < source.size(); ++x)
    for (std::size_t y = 0; y < source.size(); ++y)
      if (source.leq(x, y) && !target.leq(f.image[x], f.image[y]))
        throw Error(ErrorCode::NotMonotone, path + ": " + source.name(x) + " <= " + source.name(y) + " but " +
                                                target.name(f.image[x]) + " is not below " + target.name(f.image[y]));
  return f;
}

Json element_to_json(const FinitePoset& p, const HyperElement& e) {
  switch (e.kind) {
    case HyperKind::Smyth: return Json{{"upper", set_to_names(p, e.upper)}};
    case HyperKind::Hoare: return Json{{"lower", set_to_names(p, e.lower)}};
    case HyperKind::QuasiLens: return Json{{"Q", set_to_names(p, e.upper)}, {"C", set_to_names(p, e.lower)}};
    case HyperKind::Lens: return Json{{"lens", set_to_names(p, lens_members(e))}};
  }
  return Json();
}

HyperElement element_from_json(const Json& j, const FinitePoset& p, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected a hyperspace element");
  return at_path(path, [&]() -> HyperElement {
    if (j.contains("upper")) return smyth_element(p, p.up_closure(names_to_set(p, j.at("upper"), path + ".upper")));
    if (j.contains("lower")) return hoare_element(p, p.down_closure(names_to_set(p, j.at("lower"), path + ".lower")));
    if (j.contains("Q") || j.contains("C")) {
      auto q = p.up_closure(names_to_set(p, field(j, "Q", path), path + ".Q"));
      auto c = p.down_closure(names_to_set(p, field(j, "C", path), path + ".C"));
      return quasi_lens_element(p, q, c);
    }
    if (j.contains("lens")) return lens_element(p, names_to_set(p, j.at("lens"), path + ".lens"));
    schema_error(path, "expected one of 'upper', 'lower', 'Q'/'C' or 'lens'");
  });
}

Json hyper_valuation_to_json(const FinitePoset& p, const HyperValuation& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) {
    Json atom{{"weight", rational_to_json(a.weight)}};
    const Json element = element_to_json(p, a.carrier);
    for (auto it = element.begin(); it != element.end(); ++it) atom[it.key()] = it.value();
    atoms.push_back(atom);
  }
  return Json{{"kind", kind_name(mu.kind())}, {"atoms", atoms}};
}

HyperValuation hyper_valuation_from_json(const Json& j, const FinitePoset& p, const std::string& path) {
  const ValuationKind kind = kind_field(j, path, ValuationKind::Prob);
  const Json& atoms = field(j, "atoms", path);
  if (!atoms.is_array()) schema_error(path + ".atoms", "expected an array");
  std::vector<Atom<HyperElement>> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string at = path + ".atoms[" + std::to_string(i) + "]";
    out.push_back({rational_from_json(field(atoms[i], "weight", at), at + ".weight"),
                   element_from_json(atoms[i], p, at)});
  }
  if (!out.empty())
    for (const auto& a : out)
      if (a.carrier.kind != out.front().carrier.kind) schema_error(path + ".atoms", "atoms of different hyperspaces");
  return at_path(path, [&] { return HyperValuation(out, kind); });
}

Json convex_set_to_json(const ConvexSet& set) {
  Json gens = Json::array();
  for (const auto& g : set.generators()) gens.push_back(weights_object(g.carrier(), g.weights()));
  return Json{{"orientation", set.orientation() == Orientation::Up ? "up" : "down"},
              {"kind", kind_name(set.kind())},
              {"generators", gens}};
}

ConvexSet convex_set_from_json(const Json& j, const PosetRef& carrier, const std::string& path) {
  const std::string orientation = string_of(field(j, "orientation", path), path + ".orientation");
  if (orientation != "up" && orientation != "down") schema_error(path + ".orientation", "expected \"up\" or \"down\"");
  const ValuationKind kind = kind_field(j, path, ValuationKind::Prob);
  const Json& gens = field(j, "generators", path);
  if (!gens.is_array() || gens.empty()) schema_error(path + ".generators", "expected a nonempty array");
  std::vector<Valuation> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string at = path + ".generators[" + std::to_string(i) + "]";
    // Either a bare weight object or a full valuation.
    const bool full = gens[i].contains("weights");
    auto w = weights_from_object(full ? gens[i].at("weights") : gens[i], *carrier, full ? at + ".weights" : at);
    out.push_back(at_path(at, [&] { return Valuation(carrier, w, kind); }));
  }
  return ConvexSet(orientation == "up" ? Orientation::Up : Orientation::Down, out);
}

Json law_image_to_json(const LawImage& image) {
  Json out = Json::object();
  if (image.up) out["up"] = convex_set_to_json(*image.up);
  if (image.down) out["down"] = convex_set_to_json(*image.down);
  return out;
}

Json prevision_to_json(const Prevision& f) {
  Json gens = Json::array();
  for (const auto& g : f.generators()) gens.push_back(valuation_to_json(g));
  return Json{{"role", role_name(f.role())}, {"generators", gens}};
}

Prevision prevision_from_json(const Json& j, const PosetRef& carrier, const std::string& path) {
  const std::string role = string_of(field(j, "role", path), path + ".role");
  const Json& gens = field(j, "generators", path);
  if (!gens.is_array() || gens.empty()) schema_error(path + ".generators", "expected a nonempty array");
  std::vector<Valuation> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    out.push_back(valuation_from_json(gens[i], carrier, path + ".generators[" + std::to_string(i) + "]"));
  return at_path(path, [&] { return Prevision(parse_role(role), out); });
}

Json fork_to_json(const Fork& f) {
  return Json{{"lower", prevision_to_json(f.lower)}, {"upper", prevision_to_json(f.upper)}};
}

Fork fork_from_json(const Json& j, const PosetRef& carrier, const std::string& path) {
  auto lower = prevision_from_json(field(j, "lower", path), carrier, path + ".lower");
  auto upper = prevision_from_json(field(j, "upper", path), carrier, path + ".upper");
  return at_path(path, [&] { return make_fork(lower, upper); });
}

}  // namespace mforge
