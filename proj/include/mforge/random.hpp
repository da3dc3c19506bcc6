#pragma once

#include <cstdint>
#include <random>

#include "mforge/convex.hpp"
#include "mforge/hyperspace.hpp"
#include "mforge/prevision.hpp"

namespace mforge {

/// Seeded instance generators. Every draw is a deterministic function of the
/// engine state, and every result is valid by construction.
using Rng = std::mt19937_64;

/// Random poset on n points named a, b, ...: each pair i < j is related with
/// the given probability, then transitively closed.
PosetRef random_poset(Rng& rng, std::size_t n, double density = 0.35);

/// Weights with denominators up to max_den. Prob sums to 1, Sub to at most 1,
/// General to at most 2.
Valuation random_valuation(Rng& rng, const PosetRef& carrier, ValuationKind kind, unsigned max_den = 4);

MonotoneMap random_monotone_map(Rng& rng, const PosetRef& carrier, unsigned max_value = 3);

PointSet random_nonempty_subset(Rng& rng, std::size_t universe, double density = 0.4);

/// Closure of a random nonempty generator set.
HyperElement random_element(Rng& rng, HyperKind kind, const FinitePoset& poset, double density = 0.4);

std::vector<Valuation> random_generators(Rng& rng, const PosetRef& carrier, ValuationKind kind, std::size_t max_count,
                                         unsigned max_den = 4);

Prevision random_prevision(Rng& rng, PrevisionRole role, const PosetRef& carrier, ValuationKind kind,
                           std::size_t max_generators = 3, unsigned max_den = 4);

/// (↑conv E, cl conv E) for random generators E: the image of a lens, hence a
/// quasi-lens.
GenQuasiLens random_gen_quasi_lens(Rng& rng, const PosetRef& carrier, ValuationKind kind,
                                   std::size_t max_generators = 3, unsigned max_den = 4);

Fork random_fork(Rng& rng, const PosetRef& carrier, ValuationKind kind, std::size_t max_generators = 3,
                 unsigned max_den = 4);

/// Simple valuation over hyperspace elements of `poset` with up to
/// max_atoms atoms.
SimpleValuation<HyperElement> random_hyper_valuation(Rng& rng, HyperKind kind, const FinitePoset& poset,
                                                     ValuationKind vkind, std::size_t max_atoms = 3,
                                                     unsigned max_den = 4, double density = 0.4);

/// Monotone map built point by point along a linear extension; falls back to
/// a constant map when a partial choice cannot be extended.
PointMap random_point_map(Rng& rng, const FinitePoset& source, const FinitePoset& target);

/// Random weights for `count` atoms of the given kind.
std::vector<Rational> random_weights(Rng& rng, std::size_t count, ValuationKind kind, unsigned max_den = 4);

}  // namespace mforge
