#include "mforge/random.hpp"

#include <algorithm>

namespace mforge {

PosetRef random_poset(Rng& rng, std::size_t n, double density) {
  std::bernoulli_distribution edge(density);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  // Relate along a random permutation so that any shape can occur.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) pairs.emplace_back(names[perm[i]], names[perm[j]]);
  return make_poset(names, pairs);
}

std::vector<Rational> random_weights(Rng& rng, std::size_t count, ValuationKind kind, unsigned max_den) {
  std::uniform_int_distribution<unsigned> den_dist(1, std::max(1U, max_den));
  const unsigned d = den_dist(rng);
  std::vector<unsigned> k(count, 0);
  if (count == 0) return {};
  unsigned budget = d;
  if (kind == ValuationKind::Sub) budget = std::uniform_int_distribution<unsigned>(0, d)(rng);
  if (kind == ValuationKind::General) budget = std::uniform_int_distribution<unsigned>(0, 2 * d)(rng);
  // Drop `budget` units into random slots.
  std::uniform_int_distribution<std::size_t> slot(0, count - 1);
  for (unsigned u = 0; u < budget; ++u) ++k[slot(rng)];
  std::vector<Rational> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = Rational(k[i], d);
    out[i].canonicalize();
  }
  return out;
}

Valuation random_valuation(Rng& rng, const PosetRef& carrier, ValuationKind kind, unsigned max_den) {
  return Valuation(carrier, random_weights(rng, carrier->size(), kind, max_den), kind);
}

MonotoneMap random_monotone_map(Rng& rng, const PosetRef& carrier, unsigned max_value) {
  std::uniform_int_distribution<unsigned> value(0, max_value);
  std::vector<unsigned> raw(carrier->size());
  for (auto& r : raw) r = value(rng);
  std::vector<Rational> v(carrier->size());
  for (std::size_t x = 0; x < carrier->size(); ++x) {
    unsigned m = 0;
    carrier->down_of(x).for_each([&](std::size_t y) { m = std::max(m, raw[y]); });
    v[x] = m;
  }
  return MonotoneMap(carrier, std::move(v));
}

PointSet random_nonempty_subset(Rng& rng, std::size_t universe, double density) {
  std::bernoulli_distribution coin(density);
  PointSet s(universe);
  for (std::size_t i = 0; i < universe; ++i)
    if (coin(rng)) s.insert(i);
  if (s.empty()) s.insert(std::uniform_int_distribution<std::size_t>(0, universe - 1)(rng));
  return s;
}

HyperElement random_element(Rng& rng, HyperKind kind, const FinitePoset& poset, double density) {
  return hyper_closure(kind, poset, random_nonempty_subset(rng, poset.size(), density));
}

std::vector<Valuation> random_generators(Rng& rng, const PosetRef& carrier, ValuationKind kind, std::size_t max_count,
                                         unsigned max_den) {
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, max_count));
  std::vector<Valuation> gens;
  const std::size_t c = count(rng);
  for (std::size_t i = 0; i < c; ++i) gens.push_back(random_valuation(rng, carrier, kind, max_den));
  return gens;
}

Prevision random_prevision(Rng& rng, PrevisionRole role, const PosetRef& carrier, ValuationKind kind,
                           std::size_t max_generators, unsigned max_den) {
  return Prevision(role, random_generators(rng, carrier, kind, max_generators, max_den));
}

GenQuasiLens random_gen_quasi_lens(Rng& rng, const PosetRef& carrier, ValuationKind kind, std::size_t max_generators,
                                   unsigned max_den) {
  auto gens = random_generators(rng, carrier, kind, max_generators, max_den);
  return {ConvexSet(Orientation::Up, gens), ConvexSet(Orientation::Down, gens)};
}

Fork random_fork(Rng& rng, const PosetRef& carrier, ValuationKind kind, std::size_t max_generators, unsigned max_den) {
  return retract_r(random_gen_quasi_lens(rng, carrier, kind, max_generators, max_den));
}

SimpleValuation<HyperElement> random_hyper_valuation(Rng& rng, HyperKind kind, const FinitePoset& poset,
                                                     ValuationKind vkind, std::size_t max_atoms, unsigned max_den,
                                                     double density) {
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, max_atoms));
  const std::size_t n = count(rng);
  auto weights = random_weights(rng, n, vkind, max_den);
  std::vector<Atom<HyperElement>> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back({weights[i], random_element(rng, kind, poset, density)});
  return SimpleValuation<HyperElement>(std::move(atoms), vkind);
}

PointMap random_point_map(Rng& rng, const FinitePoset& source, const FinitePoset& target) {
  std::uniform_int_distribution<std::size_t> any(0, target.size() - 1);
  for (int attempt = 0; attempt < 16; ++attempt) {
    PointMap f{std::vector<std::size_t>(source.size(), 0)};
    bool ok = true;
    for (std::size_t x : source.linear_extension()) {
      // Candidates lie above the images of everything below x.
      PointSet allowed = target.full_set();
      source.down_of(x).for_each([&](std::size_t z) {
        if (z != x) allowed &= target.up_of(f.image[z]);
      });
      if (allowed.empty()) {
        ok = false;
        break;
      }
      auto options = allowed.indices();
      f.image[x] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    }
    if (ok) return f;
  }
  return PointMap{std::vector<std::size_t>(source.size(), any(rng))};
}

}  // namespace mforge
