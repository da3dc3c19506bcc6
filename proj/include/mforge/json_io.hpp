#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "mforge/convex.hpp"
#include "mforge/hyperspace.hpp"
#include "mforge/prevision.hpp"
#include "mforge/weak_laws.hpp"

namespace mforge {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "monad-forge/1";

/// Parses JSON text; syntax errors become Parse errors naming line and column.
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
/// Reads a file, or standard input for "-".
std::string read_input(const std::string& path);
Json load_json(const std::string& path);

/// Throws Schema unless a present "schema" field equals kSchemaTag.
void check_schema_tag(const Json& j, const std::string& path = "$");

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& path);

Json poset_to_json(const FinitePoset& p);
PosetRef poset_from_json(const Json& j, const std::string& path = "$");

/// {"kind":"prob","weights":{"t":"1/2"}}; zero weights are omitted.
Json valuation_to_json(const Valuation& nu);
Valuation valuation_from_json(const Json& j, const PosetRef& carrier, const std::string& path = "$");

/// {"values":{"b":"0","t":"1"}}; a bare object of values is accepted too.
/// Missing points read as 0.
Json monotone_map_to_json(const MonotoneMap& h);
MonotoneMap monotone_map_from_json(const Json& j, const PosetRef& carrier, const std::string& path = "$");

/// {"b":"t", ...}: image of every source point.
Json point_map_to_json(const FinitePoset& source, const FinitePoset& target, const PointMap& f);
PointMap point_map_from_json(const Json& j, const FinitePoset& source, const FinitePoset& target,
                             const std::string& path = "$");

/// Smyth {"upper":[...]}, Hoare {"lower":[...]}, quasi-lens {"Q":[...],"C":[...]},
/// lens {"lens":[...]}. Names need not be closed; closures are taken, then
/// the element is validated.
Json element_to_json(const FinitePoset& p, const HyperElement& e);
HyperElement element_from_json(const Json& j, const FinitePoset& p, const std::string& path = "$");

/// {"kind":"prob","atoms":[{"weight":"1/2","upper":["t"]}, ...]}.
Json hyper_valuation_to_json(const FinitePoset& p, const HyperValuation& mu);
HyperValuation hyper_valuation_from_json(const Json& j, const FinitePoset& p, const std::string& path = "$");

Json convex_set_to_json(const ConvexSet& set);
ConvexSet convex_set_from_json(const Json& j, const PosetRef& carrier, const std::string& path = "$");
Json law_image_to_json(const LawImage& image);

Json prevision_to_json(const Prevision& f);
Prevision prevision_from_json(const Json& j, const PosetRef& carrier, const std::string& path = "$");
Json fork_to_json(const Fork& f);
Fork fork_from_json(const Json& j, const PosetRef& carrier, const std::string& path = "$");

}  // namespace mforge
