#include "mforge/prevision.hpp"

#include <algorithm>
#include <limits>

#include "mforge/mutation.hpp"

namespace mforge {

const char* role_name(PrevisionRole role) {
  return role == PrevisionRole::Superlinear ? "superlinear" : "sublinear";
}

PrevisionRole parse_role(const std::string& name) {
  if (name == "superlinear") return PrevisionRole::Superlinear;
  if (name == "sublinear") return PrevisionRole::Sublinear;
  throw Error(ErrorCode::Schema, "unknown prevision role '" + name + "'");
}

namespace {

// Choice functions per expansion; beyond this canonicalization is hopeless.
constexpr std::size_t kMaxChoiceFunctions = std::size_t{1} << 16;

void require_expansion(std::size_t combos) {
  if (combos > kMaxChoiceFunctions)
    throw Error(ErrorCode::Unsupported, "more than " + std::to_string(kMaxChoiceFunctions) + " choice functions");
}

Orientation orientation_of(PrevisionRole role) {
  return role == PrevisionRole::Superlinear ? Orientation::Up : Orientation::Down;
}

PrevisionRole role_of(Orientation o) {
  return o == Orientation::Up ? PrevisionRole::Superlinear : PrevisionRole::Sublinear;
}

void dedupe(std::vector<Valuation>& gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
}

Prevision canonical(PrevisionRole role, std::vector<Valuation> gens) {
  dedupe(gens);
  return retract_r(canonicalize_generators(ConvexSet(orientation_of(role), std::move(gens))));
}

}  // namespace

Prevision::Prevision(PrevisionRole role, std::vector<Valuation> generators)
    : role_(role), generators_(std::move(generators)) {
  if (generators_.empty()) throw Error(ErrorCode::EmptyInput, "prevision needs at least one generator");
  for (const auto& g : generators_) {
    require_same_carrier(generators_.front().carrier(), g.carrier());
    if (g.kind() != generators_.front().kind()) throw Error(ErrorCode::KindViolation, "generators of different kinds");
  }
}

Prevision Prevision::unit(PrevisionRole role, const PosetRef& carrier, std::size_t point, ValuationKind kind) {
  return Prevision(role, {Valuation::dirac(carrier, point, kind)});
}

Rational Prevision::operator()(const MonotoneMap& h) const {
  Rational best = integrate(generators_.front(), h);
  for (std::size_t j = 1; j < generators_.size(); ++j) {
    Rational v = integrate(generators_[j], h);
    const bool take_max = role_ == PrevisionRole::Sublinear || mutated(Mutation::SwapMinMax);
    if (take_max ? v > best : v < best) best = std::move(v);
  }
  return best;
}

Rational eval_prevision(const Prevision& f, const MonotoneMap& h) { return f(h); }

Fork make_fork(Prevision lower, Prevision upper) {
  if (lower.role() != PrevisionRole::Superlinear || upper.role() != PrevisionRole::Sublinear)
    throw Error(ErrorCode::RoleViolation, "a fork pairs a superlinear with a sublinear prevision");
  require_same_carrier(lower.carrier(), upper.carrier());
  if (lower.kind() != upper.kind()) throw Error(ErrorCode::KindViolation, "fork components of different kinds");
  return Fork{std::move(lower), std::move(upper)};
}

Fork fork_unit(const PosetRef& carrier, std::size_t point, ValuationKind kind) {
  return Fork{Prevision::unit(PrevisionRole::Superlinear, carrier, point, kind),
              Prevision::unit(PrevisionRole::Sublinear, carrier, point, kind)};
}

Prevision retract_r(const ConvexSet& set) { return Prevision(role_of(set.orientation()), set.generators()); }

Fork retract_r(const GenQuasiLens& ql) {
  if (ql.up.orientation() != Orientation::Up || ql.down.orientation() != Orientation::Down)
    throw Error(ErrorCode::TypeMismatch, "quasi-lens components have the wrong orientation");
  return make_fork(retract_r(ql.up), retract_r(ql.down));
}

ConvexSet section_s(const Prevision& f) {
  ConvexSet raw(orientation_of(f.role()), f.generators());
  if (mutated(Mutation::ForgetCanonicalization)) return raw;
  return canonicalize_generators(raw);
}

GenQuasiLens section_s(const Fork& f) { return {section_s(f.lower), section_s(f.upper)}; }

bool prevision_equal(const Prevision& a, const Prevision& b) {
  if (a.role() != b.role()) throw Error(ErrorCode::TypeMismatch, "comparing previsions of different roles");
  return genset_equal(ConvexSet(orientation_of(a.role()), a.generators()),
                      ConvexSet(orientation_of(b.role()), b.generators()))
      .equal;
}

bool fork_equal(const Fork& a, const Fork& b) {
  return prevision_equal(a.lower, b.lower) && prevision_equal(a.upper, b.upper);
}

std::optional<MonotoneMap> leq_counterexample(const Prevision& a, const Prevision& b) {
  if (a.role() != b.role()) throw Error(ErrorCode::TypeMismatch, "comparing previsions of different roles");
  require_same_carrier(a.carrier(), b.carrier());
  // The separator of a generator outside the other set is a map on which
  // b falls below a.
  if (a.role() == PrevisionRole::Superlinear) {
    ConvexSet up(Orientation::Up, a.generators());
    for (const auto& g : b.generators()) {
      auto m = member_convex_set(g, up);
      if (!m.member) return m.separator;
    }
  } else {
    ConvexSet down(Orientation::Down, b.generators());
    for (const auto& g : a.generators()) {
      auto m = member_convex_set(g, down);
      if (!m.member) return m.separator;
    }
  }
  return std::nullopt;
}

bool prevision_leq(const Prevision& a, const Prevision& b) { return !leq_counterexample(a, b); }

std::string describe_map(const MonotoneMap& h) {
  std::string out = "(";
  for (std::size_t x = 0; x < h.carrier().size(); ++x) {
    if (x) out += ", ";
    out += h.carrier().name(x) + ":" + format_rational(h(x));
  }
  return out + ")";
}

void require_monotone_family(const FinitePoset& source, const std::vector<Prevision>& family) {
  for (std::size_t x = 0; x < source.size(); ++x)
    source.up_of(x).for_each([&](std::size_t y) {
      if (y == x) return;
      if (auto h = leq_counterexample(family[x], family[y]))
        throw Error(ErrorCode::NotMonotone, "family value at '" + source.name(x) + "' exceeds the value at '" +
                                                source.name(y) + "' on " + describe_map(*h));
    });
}

Prevision kleisli_extend(const std::vector<Prevision>& family, const Prevision& f) {
  const FinitePoset& source = f.carrier();
  if (family.size() != source.size()) throw Error(ErrorCode::CarrierMismatch, "family size differs from the carrier");
  const PosetRef& target = family.front().carrier_ref();
  ValuationKind inner = ValuationKind::Prob;
  for (const auto& p : family) {
    if (p.role() != f.role()) throw Error(ErrorCode::TypeMismatch, "family of a different role");
    require_same_carrier(*target, p.carrier());
    inner = weakest_kind(inner, p.kind());
  }
  require_monotone_family(source, family);
  const ValuationKind kind = combine_kinds(f.kind(), inner);
  std::vector<Valuation> gens;
  for (const auto& nu : f.generators()) {
    const std::vector<std::size_t> support = nu.support().indices();
    std::size_t combos = 1;
    for (std::size_t x : support) require_expansion(combos *= family[x].generators().size());
    std::vector<std::size_t> choice(support.size(), 0);
    while (true) {
      std::vector<Rational> w(target->size());
      for (std::size_t k = 0; k < support.size(); ++k) {
        const Valuation& rho = family[support[k]].generators()[choice[k]];
        for (std::size_t y = 0; y < w.size(); ++y) w[y] += nu.weight(support[k]) * rho.weight(y);
      }
      gens.emplace_back(target, std::move(w), kind);
      std::size_t k = 0;
      while (k < support.size() && ++choice[k] == family[support[k]].generators().size()) choice[k++] = 0;
      if (k == support.size()) break;
    }
  }
  return canonical(f.role(), std::move(gens));
}

Fork kleisli_extend(const std::vector<Fork>& family, const Fork& f) {
  std::vector<Prevision> lows, highs;
  for (const auto& fk : family) {
    lows.push_back(fk.lower);
    highs.push_back(fk.upper);
  }
  return make_fork(kleisli_extend(lows, f.lower), kleisli_extend(highs, f.upper));
}

Prevision algebra_prevision(const SimpleValuation<Prevision>& xi) {
  if (xi.atoms().empty()) throw Error(ErrorCode::EmptyInput, "mixing an empty family of previsions");
  const Prevision& first = xi.atoms().front().carrier;
  ValuationKind inner = ValuationKind::Prob;
  for (const auto& a : xi.atoms()) {
    if (a.carrier.role() != first.role()) throw Error(ErrorCode::TypeMismatch, "mixing previsions of different roles");
    require_same_carrier(first.carrier(), a.carrier.carrier());
    inner = weakest_kind(inner, a.carrier.kind());
  }
  const ValuationKind kind = combine_kinds(xi.kind(), inner);
  const PosetRef& target = first.carrier_ref();
  std::size_t combos = 1;
  for (const auto& a : xi.atoms()) require_expansion(combos *= a.carrier.generators().size());
  std::vector<std::size_t> choice(xi.atoms().size(), 0);
  std::vector<Valuation> gens;
  while (true) {
    std::vector<Rational> w(target->size());
    for (std::size_t i = 0; i < choice.size(); ++i) {
      const auto& atom = xi.atoms()[i];
      const Valuation& g = atom.carrier.generators()[choice[i]];
      for (std::size_t y = 0; y < w.size(); ++y) w[y] += atom.weight * g.weight(y);
    }
    gens.emplace_back(target, std::move(w), kind);
    std::size_t i = 0;
    while (i < choice.size() && ++choice[i] == xi.atoms()[i].carrier.generators().size()) choice[i++] = 0;
    if (i == choice.size()) break;
  }
  return canonical(first.role(), std::move(gens));
}

Fork algebra_fork(const SimpleValuation<Fork>& xi) {
  std::vector<Atom<Prevision>> lows, highs;
  for (const auto& a : xi.atoms()) {
    lows.push_back({a.weight, a.carrier.lower});
    highs.push_back({a.weight, a.carrier.upper});
  }
  return make_fork(algebra_prevision(SimpleValuation<Prevision>(lows, xi.kind())),
                   algebra_prevision(SimpleValuation<Prevision>(highs, xi.kind())));
}

Rational algebra_eval(const SimpleValuation<Prevision>& xi, const MonotoneMap& h) {
  Rational total = 0;
  for (const auto& a : xi.atoms()) total += a.weight * a.carrier(h);
  return total;
}

std::vector<MonotoneMap> test_maps(const PosetRef& carrier, std::mt19937_64& rng, std::size_t samples,
                                   std::size_t exhaustive_limit) {
  if (carrier->size() <= exhaustive_limit) return enumerate_monotone_grid(carrier, 3);
  std::uniform_int_distribution<int> value(0, 3);
  std::vector<MonotoneMap> out;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<int> raw(carrier->size());
    for (auto& r : raw) r = value(rng);
    std::vector<Rational> v(carrier->size());
    // Largest raw value below each point gives a monotone map.
    for (std::size_t x = 0; x < carrier->size(); ++x) {
      int m = 0;
      carrier->down_of(x).for_each([&](std::size_t y) { m = std::max(m, raw[y]); });
      v[x] = m;
    }
    out.emplace_back(carrier, std::move(v));
  }
  return out;
}

namespace {

// Integrals of every generator against every map, scaled to a common
// denominator so that the pairwise checks run on machine integers.
struct IntegralTable {
  std::vector<std::vector<long long>> value;  // [generator][map]
  bool exact_int = false;
  std::vector<std::vector<Rational>> rational;

  IntegralTable(const std::vector<Valuation>& gens, const std::vector<MonotoneMap>& maps) {
    rational.assign(gens.size(), std::vector<Rational>(maps.size()));
    mpz_class denom = 1;
    for (std::size_t j = 0; j < gens.size(); ++j)
      for (std::size_t m = 0; m < maps.size(); ++m) {
        rational[j][m] = integrate(gens[j], maps[m]);
        mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), rational[j][m].get_den_mpz_t());
      }
    const mpz_class limit = mpz_class(1) << 60;
    value.assign(gens.size(), std::vector<long long>(maps.size()));
    exact_int = true;
    for (std::size_t j = 0; j < gens.size() && exact_int; ++j)
      for (std::size_t m = 0; m < maps.size(); ++m) {
        mpz_class scaled = rational[j][m].get_num() * (denom / rational[j][m].get_den());
        if (abs(scaled) >= limit) {
          exact_int = false;
          break;
        }
        value[j][m] = scaled.get_si();
      }
  }
};

}  // namespace

WalleyResult walley_check(const Fork& fork, const std::vector<MonotoneMap>& maps) {
  require_same_carrier(fork.lower.carrier(), fork.upper.carrier());
  WalleyResult out;
  if (maps.empty()) return out;
  // Both sides need a common scale, so tabulate them together.
  std::vector<Valuation> all = fork.lower.generators();
  const std::size_t nl = all.size();
  all.insert(all.end(), fork.upper.generators().begin(), fork.upper.generators().end());
  IntegralTable table(all, maps);
  const std::size_t nm = maps.size();
  const bool swap = mutated(Mutation::SwapMinMax);
  auto fail = [&](std::size_t a, std::size_t b, const char* side) {
    out.pass = false;
    out.h = maps[a];
    out.h2 = maps[b];
    out.side = side;
  };
  if (table.exact_int) {
    const auto& v = table.value;
    auto lower_of = [&](auto&& get) {
      long long best = get(0);
      for (std::size_t j = 1; j < nl; ++j) best = swap ? std::max(best, get(j)) : std::min(best, get(j));
      return best;
    };
    auto upper_of = [&](auto&& get) {
      long long best = get(nl);
      for (std::size_t j = nl + 1; j < all.size(); ++j) best = std::max(best, get(j));
      return best;
    };
    std::vector<long long> lo(nm), hi(nm);
    for (std::size_t m = 0; m < nm; ++m) {
      lo[m] = lower_of([&](std::size_t j) { return v[j][m]; });
      hi[m] = upper_of([&](std::size_t j) { return v[j][m]; });
    }
    for (std::size_t a = 0; a < nm; ++a)
      for (std::size_t b = 0; b < nm; ++b) {
        ++out.pairs_checked;
        const long long lo_sum = lower_of([&](std::size_t j) { return v[j][a] + v[j][b]; });
        const long long hi_sum = upper_of([&](std::size_t j) { return v[j][a] + v[j][b]; });
        if (lo_sum > lo[a] + hi[b]) {
          fail(a, b, "left");
          return out;
        }
        if (lo[a] + hi[b] > hi_sum) {
          fail(a, b, "right");
          return out;
        }
      }
    return out;
  }
  const auto& r = table.rational;
  auto lower_of = [&](auto&& get) {
    Rational best = get(0);
    for (std::size_t j = 1; j < nl; ++j) {
      Rational x = get(j);
      if (swap ? x > best : x < best) best = x;
    }
    return best;
  };
  auto upper_of = [&](auto&& get) {
    Rational best = get(nl);
    for (std::size_t j = nl + 1; j < all.size(); ++j) {
      Rational x = get(j);
      if (x > best) best = x;
    }
    return best;
  };
  std::vector<Rational> lo(nm), hi(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    lo[m] = lower_of([&](std::size_t j) { return r[j][m]; });
    hi[m] = upper_of([&](std::size_t j) { return r[j][m]; });
  }
  for (std::size_t a = 0; a < nm; ++a)
    for (std::size_t b = 0; b < nm; ++b) {
      ++out.pairs_checked;
      const Rational lo_sum = lower_of([&](std::size_t j) { return Rational(r[j][a] + r[j][b]); });
      const Rational hi_sum = upper_of([&](std::size_t j) { return Rational(r[j][a] + r[j][b]); });
      if (lo_sum > lo[a] + hi[b]) {
        fail(a, b, "left");
        return out;
      }
      if (lo[a] + hi[b] > hi_sum) {
        fail(a, b, "right");
        return out;
      }
    }
  return out;
}

bool check_prevision_shape(const Prevision& f, const std::vector<MonotoneMap>& maps) {
  if (maps.empty()) return true;
  const bool super = f.role() == PrevisionRole::Superlinear;
  for (const auto& h : maps) {
    for (const Rational& a : {Rational(1, 2), Rational(3)})
      if (f(h.scaled(a)) != a * f(h)) return false;
  }
  IntegralTable table(f.generators(), maps);
  const std::size_t ng = f.generators().size(), nm = maps.size();
  const bool swap = mutated(Mutation::SwapMinMax) && super;
  auto eval = [&](auto&& get) {
    auto best = get(0);
    for (std::size_t j = 1; j < ng; ++j) {
      auto x = get(j);
      const bool take_max = !super || swap;
      if (take_max ? x > best : x < best) best = x;
    }
    return best;
  };
  for (std::size_t a = 0; a < nm; ++a)
    for (std::size_t b = 0; b < nm; ++b) {
      if (table.exact_int) {
        const auto& v = table.value;
        long long sum = eval([&](std::size_t j) { return v[j][a] + v[j][b]; });
        long long parts = eval([&](std::size_t j) { return v[j][a]; }) + eval([&](std::size_t j) { return v[j][b]; });
        if (super ? sum < parts : sum > parts) return false;
      } else {
        const auto& r = table.rational;
        Rational sum = eval([&](std::size_t j) { return Rational(r[j][a] + r[j][b]); });
        Rational parts = eval([&](std::size_t j) { return r[j][a]; }) + eval([&](std::size_t j) { return r[j][b]; });
        if (super ? sum < parts : sum > parts) return false;
      }
    }
  return true;
}

namespace {

Rational mass(const Valuation& nu, const PointSet& u) {
  Rational t = 0;
  u.for_each([&](std::size_t i) { t += nu.weight(i); });
  return t;
}

// Is there ν with Σλ·up ≤ ν ≤ Σμ·down and, optionally, ν ≤ above or ν ≥ below?
bool intersection_point(const GenQuasiLens& ql, const Valuation* above, const Valuation* below) {
  const auto& ups = ql.up.generators();
  const auto& downs = ql.down.generators();
  const FinitePoset& p = ql.up.carrier();
  const std::size_t m = ups.size(), k = downs.size(), n = p.size();
  LinearProgram lp(m + k + n);
  std::vector<Rational> simplex_up(m + k + n), simplex_down(m + k + n);
  for (std::size_t j = 0; j < m; ++j) simplex_up[j] = 1;
  for (std::size_t j = 0; j < k; ++j) simplex_down[m + j] = 1;
  lp.add_constraint(simplex_up, Relation::Equal, Rational(1));
  lp.add_constraint(simplex_down, Relation::Equal, Rational(1));
  for (const auto& u : p.upper_sets()) {
    if (u.empty()) continue;
    std::vector<Rational> nu_row(m + k + n);
    u.for_each([&](std::size_t i) { nu_row[m + k + i] = 1; });
    std::vector<Rational> row = nu_row;
    for (std::size_t j = 0; j < m; ++j) row[j] = mass(ups[j], u);
    for (std::size_t i = 0; i < n; ++i) row[m + k + i] = -nu_row[m + k + i];
    lp.add_constraint(row, Relation::LessEqual, Rational(0));
    row = nu_row;
    for (std::size_t j = 0; j < k; ++j) row[m + j] = -mass(downs[j], u);
    lp.add_constraint(row, Relation::LessEqual, Rational(0));
    if (above) lp.add_constraint(nu_row, Relation::LessEqual, mass(*above, u));
    if (below) lp.add_constraint(nu_row, Relation::GreaterEqual, mass(*below, u));
  }
  if (ql.up.kind() == ValuationKind::Prob) {
    std::vector<Rational> total(m + k + n);
    for (std::size_t i = 0; i < n; ++i) total[m + k + i] = 1;
    lp.add_constraint(total, Relation::Equal, Rational(1));
  }
  return lp_feasible(lp).feasible;
}

}  // namespace

bool is_quasi_lens_pair(const GenQuasiLens& ql) {
  require_same_carrier(ql.up.carrier(), ql.down.carrier());
  if (!intersection_point(ql, nullptr, nullptr)) return false;
  for (const auto& q : ql.up.generators())
    if (!intersection_point(ql, &q, nullptr)) return false;
  for (const auto& c : ql.down.generators())
    if (!intersection_point(ql, nullptr, &c)) return false;
  return true;
}

}  // namespace mforge
