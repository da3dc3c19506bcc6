#include "mforge/valuation.hpp"

#include <set>

#include "mforge/mutation.hpp"

namespace mforge {

const char* kind_name(ValuationKind kind) {
  switch (kind) {
    case ValuationKind::General: return "general";
    case ValuationKind::Sub: return "sub";
    case ValuationKind::Prob: return "prob";
  }
  return "general";
}

ValuationKind parse_kind(const std::string& name) {
  if (name == "general") return ValuationKind::General;
  if (name == "sub") return ValuationKind::Sub;
  if (name == "prob") return ValuationKind::Prob;
  throw Error(ErrorCode::Schema, "unknown valuation kind '" + name + "'");
}

ValuationKind combine_kinds(ValuationKind outer, ValuationKind inner) {
  if (mutated(Mutation::WrongKindTable)) return outer;
  if (outer == ValuationKind::Prob && inner == ValuationKind::Prob) return ValuationKind::Prob;
  if (outer != ValuationKind::General && inner != ValuationKind::General) return ValuationKind::Sub;
  return ValuationKind::General;
}

ValuationKind weakest_kind(ValuationKind a, ValuationKind b) {
  if (a == ValuationKind::General || b == ValuationKind::General) return ValuationKind::General;
  if (a == ValuationKind::Sub || b == ValuationKind::Sub) return ValuationKind::Sub;
  return ValuationKind::Prob;
}

bool total_admissible(ValuationKind kind, const Rational& total) {
  if (kind == ValuationKind::Prob) return total == 1;
  if (kind == ValuationKind::Sub) return total <= 1;
  return true;
}

void check_total(ValuationKind kind, const Rational& total) {
  if (kind == ValuationKind::Prob && total != 1)
    throw Error(ErrorCode::KindViolation, "probability valuation has total " + format_rational(total));
  if (kind == ValuationKind::Sub && total > 1)
    throw Error(ErrorCode::KindViolation, "subprobability valuation has total " + format_rational(total));
}

void require_same_carrier(const FinitePoset& a, const FinitePoset& b) {
  if (!same_carrier(a, b)) throw Error(ErrorCode::CarrierMismatch, "operands live on different posets");
}

// --------------------------------------------------------------- Valuation

Valuation::Valuation(PosetRef carrier, std::vector<Rational> weights, ValuationKind kind)
    : carrier_(std::move(carrier)), weights_(std::move(weights)), kind_(kind) {
  if (!carrier_) throw Error(ErrorCode::InvalidArgument, "valuation without carrier");
  if (weights_.size() != carrier_->size())
    throw Error(ErrorCode::CarrierMismatch, "weight vector does not match the carrier size");
  for (auto& w : weights_) {
    w.canonicalize();
    if (w < 0) throw Error(ErrorCode::NegativeWeight, "weight " + format_rational(w));
  }
  check_total(kind_, total());
}

Valuation Valuation::zero(PosetRef carrier, ValuationKind kind) {
  std::size_t n = carrier->size();
  return Valuation(std::move(carrier), std::vector<Rational>(n), kind);
}

Valuation Valuation::dirac(PosetRef carrier, std::size_t point, ValuationKind kind) {
  if (point >= carrier->size()) throw Error(ErrorCode::UnknownPoint, "point index out of range");
  std::vector<Rational> w(carrier->size());
  w[point] = 1;
  return Valuation(std::move(carrier), std::move(w), kind);
}

PointSet Valuation::support() const {
  PointSet s(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] != 0) s.insert(i);
  return s;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.weights_.size() <=> b.weights_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.weights_.size(); ++i) {
    int c = cmp(a.weights_[i], b.weights_[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

// ------------------------------------------------------------- MonotoneMap

MonotoneMap::MonotoneMap(PosetRef carrier, std::vector<Rational> values)
    : carrier_(std::move(carrier)), values_(std::move(values)) {
  if (!carrier_) throw Error(ErrorCode::InvalidArgument, "map without carrier");
  if (values_.size() != carrier_->size())
    throw Error(ErrorCode::CarrierMismatch, "value vector does not match the carrier size");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i].canonicalize();
    values_[i].canonicalize();
    if (values_[i] < 0) throw Error(ErrorCode::NegativeWeight, "map value at '" + carrier_->name(i) + "'");
    carrier_->up_of(i).for_each([&](std::size_t j) {
      if (values_[j] < values_[i])
        throw Error(ErrorCode::NotMonotone,
                    "value drops from '" + carrier_->name(i) + "' to '" + carrier_->name(j) + "'");
    });
  }
}

MonotoneMap MonotoneMap::indicator(PosetRef carrier, const PointSet& upper) {
  std::vector<Rational> v(carrier->size());
  upper.for_each([&](std::size_t i) { v[i] = 1; });
  return MonotoneMap(std::move(carrier), std::move(v));
}

MonotoneMap MonotoneMap::operator+(const MonotoneMap& other) const {
  require_same_carrier(*carrier_, *other.carrier_);
  std::vector<Rational> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + other.values_[i];
  return MonotoneMap(carrier_, std::move(v));
}

MonotoneMap MonotoneMap::scaled(const Rational& factor) const {
  std::vector<Rational> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * factor;
  return MonotoneMap(carrier_, std::move(v));
}

namespace {

void collect_grid(const FinitePoset& p, unsigned max_value, std::size_t k, std::vector<unsigned>& current,
                  std::vector<std::vector<unsigned>>& out) {
  const auto& order = p.linear_extension();
  if (k == order.size()) {
    out.push_back(current);
    return;
  }
  std::size_t x = order[k];
  unsigned low = 0;
  p.down_of(x).for_each([&](std::size_t z) {
    if (z != x) low = std::max(low, current[z]);
  });
  for (unsigned v = low; v <= max_value; ++v) {
    current[x] = v;
    collect_grid(p, max_value, k + 1, current, out);
  }
}

}  // namespace

std::vector<MonotoneMap> enumerate_monotone_grid(const PosetRef& carrier, unsigned max_value) {
  std::vector<std::vector<unsigned>> raw;
  std::vector<unsigned> current(carrier->size(), 0);
  collect_grid(*carrier, max_value, 0, current, raw);
  std::vector<MonotoneMap> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    std::vector<Rational> v(r.begin(), r.end());
    out.emplace_back(carrier, std::move(v));
  }
  return out;
}

// -------------------------------------------------------------- operations

Valuation unit_valuation(const PosetRef& carrier, std::size_t point) { return Valuation::dirac(carrier, point); }

Rational eval_open(const Valuation& nu, const PointSet& upper) {
  if (upper.universe() != nu.carrier().size()) throw Error(ErrorCode::CarrierMismatch, "set sized for another carrier");
  if (!nu.carrier().is_upper(upper)) throw Error(ErrorCode::RoleViolation, "valuations are evaluated on upper sets");
  Rational total = 0;
  upper.for_each([&](std::size_t i) { total += nu.weight(i); });
  return total;
}

Rational integrate(const Valuation& nu, const MonotoneMap& h) {
  require_same_carrier(nu.carrier(), h.carrier());
  Rational total = 0;
  for (std::size_t i = 0; i < nu.weights().size(); ++i)
    if (nu.weight(i) != 0) total += nu.weight(i) * h(i);
  return total;
}

Rational integrate_layers(const Valuation& nu, const MonotoneMap& h) {
  require_same_carrier(nu.carrier(), h.carrier());
  std::set<Rational> levels(h.values().begin(), h.values().end());
  levels.insert(Rational(0));
  Rational total = 0;
  Rational previous = 0;
  for (const auto& t : levels) {
    if (t == 0) continue;
    PointSet above(h.values().size());
    for (std::size_t i = 0; i < h.values().size(); ++i)
      if (h(i) > previous) above.insert(i);
    total += (t - previous) * eval_open(nu, above);
    previous = t;
  }
  return total;
}

bool stochastic_leq(const Valuation& nu, const Valuation& other) {
  require_same_carrier(nu.carrier(), other.carrier());
  for (const auto& u : nu.carrier().upper_sets()) {
    Rational a = 0, b = 0;
    u.for_each([&](std::size_t i) {
      a += nu.weight(i);
      b += other.weight(i);
    });
    if (a > b) return false;
  }
  return true;
}

Valuation pushforward(const PointMap& f, const Valuation& nu, const PosetRef& target) {
  if (!is_monotone(nu.carrier(), *target, f)) throw Error(ErrorCode::NotMonotone, "pushforward along a non-monotone map");
  std::vector<Rational> w(target->size());
  for (std::size_t i = 0; i < nu.weights().size(); ++i) w[f.image[i]] += nu.weight(i);
  return Valuation(target, std::move(w), nu.kind());
}

Valuation valuation_from_open_table(const PosetRef& carrier, const std::map<PointSet, Rational>& table,
                                    ValuationKind kind) {
  const auto& opens = carrier->upper_sets();
  auto value = [&](const PointSet& u) -> const Rational& {
    auto it = table.find(u);
    if (it == table.end())
      throw Error(ErrorCode::InvalidArgument, "table has no entry for an upper set of size " + std::to_string(u.count()));
    return it->second;
  };
  for (const auto& [u, v] : table)
    if (u.universe() != carrier->size() || !carrier->is_upper(u))
      throw Error(ErrorCode::RoleViolation, "table key is not an upper set of the carrier");
  if (value(carrier->empty_set()) != 0) throw Error(ErrorCode::NotStrict, "value on the empty set is not zero");
  for (std::size_t a = 0; a < opens.size(); ++a)
    for (std::size_t b = a + 1; b < opens.size(); ++b)
      if (value(opens[a]) + value(opens[b]) != value(opens[a] | opens[b]) + value(opens[a] & opens[b]))
        throw Error(ErrorCode::NotModular, "modularity fails on a pair of upper sets");
  std::vector<Rational> w(carrier->size());
  for (std::size_t x = 0; x < carrier->size(); ++x) {
    PointSet up = carrier->up_of(x);
    PointSet rest = up;
    rest.erase(x);
    w[x] = value(up) - value(rest);
    if (w[x] < 0) throw Error(ErrorCode::NegativeWeight, "table decreases at '" + carrier->name(x) + "'");
  }
  Valuation nu(carrier, std::move(w), kind);
  for (const auto& u : opens)
    if (eval_open(nu, u) != value(u)) throw Error(ErrorCode::NotModular, "table is not reproduced by point weights");
  return nu;
}

Valuation flatten(const SimpleValuation<Valuation>& nested, const PosetRef& carrier) {
  std::vector<Rational> w(carrier->size());
  ValuationKind inner_kind = ValuationKind::Prob;
  for (const auto& a : nested.atoms()) {
    require_same_carrier(*carrier, a.carrier.carrier());
    inner_kind = weakest_kind(inner_kind, a.carrier.kind());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += a.weight * a.carrier.weight(i);
  }
  return Valuation(carrier, std::move(w), combine_kinds(nested.kind(), inner_kind));
}

SimpleValuation<std::size_t> to_simple(const Valuation& nu) {
  std::vector<Atom<std::size_t>> atoms;
  for (std::size_t i = 0; i < nu.weights().size(); ++i)
    if (nu.weight(i) != 0) atoms.push_back({nu.weight(i), i});
  return SimpleValuation<std::size_t>(std::move(atoms), nu.kind());
}

Valuation from_simple(const PosetRef& carrier, const SimpleValuation<std::size_t>& nu) {
  std::vector<Rational> w(carrier->size());
  for (const auto& a : nu.atoms()) {
    if (a.carrier >= w.size()) throw Error(ErrorCode::UnknownPoint, "atom outside the carrier");
    w[a.carrier] += a.weight;
  }
  return Valuation(carrier, std::move(w), nu.kind());
}

}  // namespace mforge
