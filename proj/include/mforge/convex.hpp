#pragma once

#include <optional>
#include <vector>

#include "mforge/lp.hpp"
#include "mforge/valuation.hpp"

namespace mforge {

enum class Orientation { Up, Down };

/// Closed convex set of valuations given by generators: the upward closure of
/// their convex hull (Up) or its downward closure (Down), taken inside the
/// valuations of the generators' kind.
class ConvexSet {
 public:
  ConvexSet() = default;
  ConvexSet(Orientation orientation, std::vector<Valuation> generators);

  Orientation orientation() const { return orientation_; }
  const std::vector<Valuation>& generators() const { return generators_; }
  const FinitePoset& carrier() const { return generators_.front().carrier(); }
  const PosetRef& carrier_ref() const { return generators_.front().carrier_ref(); }
  ValuationKind kind() const { return generators_.front().kind(); }

 private:
  Orientation orientation_ = Orientation::Up;
  std::vector<Valuation> generators_;
};

inline ConvexSet upset_of(std::vector<Valuation> generators) { return ConvexSet(Orientation::Up, std::move(generators)); }
inline ConvexSet downset_of(std::vector<Valuation> generators) {
  return ConvexSet(Orientation::Down, std::move(generators));
}

/// Pair of an upward-closed and a downward-closed generated set.
struct GenQuasiLens {
  ConvexSet up;
  ConvexSet down;
};

struct Membership {
  bool member = false;
  // Convex weights on the generators when member.
  std::vector<Rational> weights;
  // When not a member: a monotone map whose integral strictly separates the
  // candidate from every generator (below all of them for Up, above for Down).
  std::optional<MonotoneMap> separator;
};

Membership member_convex_set(const Valuation& candidate, const ConvexSet& set);

/// Stochastic-order LP that decides membership, one row per nonempty upper
/// set plus the simplex row. Exposed for tests.
LinearProgram membership_program(const Valuation& candidate, const ConvexSet& set);

struct EqualityVerdict {
  bool equal = true;
  // First generator (of either side) outside the other set, with its separator.
  std::optional<Valuation> witness;
  bool witness_from_first = true;
  std::optional<MonotoneMap> separator;
};

EqualityVerdict genset_equal(const ConvexSet& a, const ConvexSet& b);
bool genset_equal(const GenQuasiLens& a, const GenQuasiLens& b);

/// Irredundant generators in canonical order: duplicates, dominated points and
/// generators inside the set spanned by the others are removed.
ConvexSet canonicalize_generators(const ConvexSet& set);
GenQuasiLens canonicalize(const GenQuasiLens& ql);

bool is_canonical(const ConvexSet& set);

struct MaximinResult {
  Rational value;
  // A point of the simplex attaining the value.
  std::vector<Rational> weights;
  bool exceeds = false;
};

/// Exact value of max over the simplex of min_j forms[j]·a, and whether it is
/// strictly above the threshold. All forms must have the same length n >= 1.
MaximinResult maximin_over_simplex(const std::vector<std::vector<Rational>>& forms, const Rational& threshold);

/// Generators that are extreme points of the plain convex hull (no order
/// closure), in canonical order.
std::vector<Valuation> convex_hull_vertices(const std::vector<Valuation>& points);

}  // namespace mforge
