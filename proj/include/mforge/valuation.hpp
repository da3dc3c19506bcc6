#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <utility>
#include <vector>

#include "mforge/error.hpp"
#include "mforge/poset.hpp"
#include "mforge/rational.hpp"

namespace mforge {

enum class ValuationKind { General, Sub, Prob };

const char* kind_name(ValuationKind kind);
ValuationKind parse_kind(const std::string& name);

/// Kind of the flattening of a valuation of `outer` kind whose atoms are of
/// `inner` kind.
ValuationKind combine_kinds(ValuationKind outer, ValuationKind inner);

bool total_admissible(ValuationKind kind, const Rational& total);

/// Throws unless a total mass is admissible for the kind.
void check_total(ValuationKind kind, const Rational& total);

/// Finite weighted sum of point masses on a poset, one weight per point.
class Valuation {
 public:
  Valuation() = default;
  Valuation(PosetRef carrier, std::vector<Rational> weights, ValuationKind kind);

  static Valuation zero(PosetRef carrier, ValuationKind kind);
  static Valuation dirac(PosetRef carrier, std::size_t point, ValuationKind kind = ValuationKind::Prob);

  const FinitePoset& carrier() const { return *carrier_; }
  const PosetRef& carrier_ref() const { return carrier_; }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(std::size_t i) const { return weights_[i]; }
  ValuationKind kind() const { return kind_; }
  Rational total() const { return sum(weights_); }
  PointSet support() const;

  Valuation with_kind(ValuationKind kind) const { return Valuation(carrier_, weights_, kind); }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.kind_ == b.kind_ && a.weights_ == b.weights_;
  }
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);

 private:
  PosetRef carrier_;
  std::vector<Rational> weights_;
  ValuationKind kind_ = ValuationKind::General;
};

void require_same_carrier(const FinitePoset& a, const FinitePoset& b);

/// Monotone map into the nonnegative rationals.
class MonotoneMap {
 public:
  MonotoneMap() = default;
  MonotoneMap(PosetRef carrier, std::vector<Rational> values);

  static MonotoneMap indicator(PosetRef carrier, const PointSet& upper);

  const FinitePoset& carrier() const { return *carrier_; }
  const PosetRef& carrier_ref() const { return carrier_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& operator()(std::size_t i) const { return values_[i]; }

  MonotoneMap operator+(const MonotoneMap& other) const;
  MonotoneMap scaled(const Rational& factor) const;

  friend bool operator==(const MonotoneMap& a, const MonotoneMap& b) { return a.values_ == b.values_; }

 private:
  PosetRef carrier_;
  std::vector<Rational> values_;
};

/// All monotone maps with values in {0, ..., max_value}.
std::vector<MonotoneMap> enumerate_monotone_grid(const PosetRef& carrier, unsigned max_value);

Valuation unit_valuation(const PosetRef& carrier, std::size_t point);
Rational eval_open(const Valuation& nu, const PointSet& upper);
Rational integrate(const Valuation& nu, const MonotoneMap& h);
/// Layer-cake form of the integral: sum over thresholds of step height times
/// the mass of the strict superlevel set.
Rational integrate_layers(const Valuation& nu, const MonotoneMap& h);
bool stochastic_leq(const Valuation& nu, const Valuation& other);
Valuation pushforward(const PointMap& f, const Valuation& nu, const PosetRef& target);

/// Reconstructs point weights from the values on every upper set by the
/// difference table(↑x) - table(↑x minus x). The table must be strict,
/// modular and monotone.
Valuation valuation_from_open_table(const PosetRef& carrier, const std::map<PointSet, Rational>& table,
                                    ValuationKind kind);

/// Finitely supported valuation over an arbitrary ordered carrier type.
template <class T>
struct Atom {
  Rational weight;
  T carrier;
  friend bool operator==(const Atom&, const Atom&) = default;
};

template <class T>
class SimpleValuation {
 public:
  SimpleValuation() = default;
  SimpleValuation(std::vector<Atom<T>> atoms, ValuationKind kind) : kind_(kind) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom<T>& a, const Atom<T>& b) { return a.carrier < b.carrier; });
    for (auto& a : atoms) {
      a.weight.canonicalize();
      if (a.weight < 0) throw Error(ErrorCode::NegativeWeight, "atom weight " + format_rational(a.weight));
      if (a.weight == 0) continue;
      if (!atoms_.empty() && atoms_.back().carrier == a.carrier)
        atoms_.back().weight += a.weight;
      else
        atoms_.push_back(std::move(a));
    }
    check_total(kind_, total());
  }

  static SimpleValuation dirac(T carrier, ValuationKind kind = ValuationKind::Prob) {
    return SimpleValuation({Atom<T>{Rational(1), std::move(carrier)}}, kind);
  }

  const std::vector<Atom<T>>& atoms() const { return atoms_; }
  ValuationKind kind() const { return kind_; }
  Rational total() const {
    Rational t = 0;
    for (const auto& a : atoms_) t += a.weight;
    return t;
  }

  template <class F>
  auto map(F&& f) const -> SimpleValuation<std::decay_t<decltype(f(std::declval<const T&>()))>> {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    std::vector<Atom<U>> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_) out.push_back(Atom<U>{a.weight, f(a.carrier)});
    return SimpleValuation<U>(std::move(out), kind_);
  }

  friend bool operator==(const SimpleValuation& a, const SimpleValuation& b) {
    return a.kind_ == b.kind_ && a.atoms_ == b.atoms_;
  }
  friend bool operator<(const SimpleValuation& a, const SimpleValuation& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    return std::lexicographical_compare(
        a.atoms_.begin(), a.atoms_.end(), b.atoms_.begin(), b.atoms_.end(), [](const Atom<T>& x, const Atom<T>& y) {
          if (x.carrier < y.carrier) return true;
          if (y.carrier < x.carrier) return false;
          return x.weight < y.weight;
        });
  }

 private:
  std::vector<Atom<T>> atoms_;
  ValuationKind kind_ = ValuationKind::General;
};

/// Most general of two kinds: general > sub > prob.
ValuationKind weakest_kind(ValuationKind a, ValuationKind b);

template <class T>
SimpleValuation<T> flatten(const SimpleValuation<SimpleValuation<T>>& nested) {
  std::vector<Atom<T>> out;
  ValuationKind inner_kind = ValuationKind::Prob;
  for (const auto& outer : nested.atoms()) {
    inner_kind = weakest_kind(inner_kind, outer.carrier.kind());
    for (const auto& inner : outer.carrier.atoms()) out.push_back(Atom<T>{outer.weight * inner.weight, inner.carrier});
  }
  return SimpleValuation<T>(std::move(out), combine_kinds(nested.kind(), inner_kind));
}

Valuation flatten(const SimpleValuation<Valuation>& nested, const PosetRef& carrier);

SimpleValuation<std::size_t> to_simple(const Valuation& nu);
Valuation from_simple(const PosetRef& carrier, const SimpleValuation<std::size_t>& nu);

}  // namespace mforge
