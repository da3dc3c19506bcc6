#pragma once

#include "mforge/poset.hpp"
#include "mforge/valuation.hpp"

namespace fixtures {

// Flat booleans: b below t and f.
inline mforge::PosetRef flat_bool() { return mforge::make_poset({"b", "t", "f"}, {{"b", "t"}, {"b", "f"}}); }
inline mforge::PosetRef discrete2() { return mforge::make_poset({"x", "y"}, {}); }
inline mforge::PosetRef chain2() { return mforge::make_poset({"0", "1"}, {{"0", "1"}}); }

inline mforge::Rational q(const char* text) { return mforge::parse_rational(text); }

// Valuation from (name, weight) pairs.
inline mforge::Valuation val(const mforge::PosetRef& p, std::initializer_list<std::pair<const char*, const char*>> w,
                             mforge::ValuationKind kind = mforge::ValuationKind::Prob) {
  std::vector<mforge::Rational> weights(p->size());
  for (const auto& [name, value] : w) weights[p->index_of(name)] = mforge::parse_rational(value);
  return mforge::Valuation(p, weights, kind);
}

inline mforge::MonotoneMap fn(const mforge::PosetRef& p, std::initializer_list<std::pair<const char*, const char*>> v) {
  std::vector<mforge::Rational> values(p->size());
  for (const auto& [name, value] : v) values[p->index_of(name)] = mforge::parse_rational(value);
  return mforge::MonotoneMap(p, values);
}

inline mforge::PointSet set(const mforge::PosetRef& p, std::vector<std::string> names) { return p->set_of(names); }

}  // namespace fixtures
