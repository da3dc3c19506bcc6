#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mforge/convex.hpp"
#include "mforge/hyperspace.hpp"
#include "mforge/mutation.hpp"

namespace mforge {

/// The weak distributive laws of a hyperspace over valuations. Lens is the
/// natural law read through the lens-to-quasi-lens transport.
enum class LawKind { Sharp, Flat, Natural, Lens };

const char* law_name(LawKind law);
LawKind parse_law(const std::string& name);
HyperKind law_hyperspace(LawKind law);

using HyperValuation = SimpleValuation<HyperElement>;

/// min of h over a nonempty upper set, max over a nonempty lower set.
Rational star_upper(const MonotoneMap& h, const PointSet& set);
Rational star_lower(const MonotoneMap& h, const PointSet& set);

enum class Transform { Phi, Psi, Theta };

Transform parse_transform(const std::string& name);

/// Σ a_i min_{Q_i} h over Smyth atoms.
Rational transform_phi(const HyperValuation& mu, const MonotoneMap& h);
/// Σ a_i max_{C_i} h over Hoare atoms.
Rational transform_psi(const HyperValuation& mu, const MonotoneMap& h);
/// The (phi, psi) pair of the two projections of quasi-lens or lens atoms.
std::pair<Rational, Rational> transform_theta(const HyperValuation& mu, const MonotoneMap& h);
/// One value for Phi and Psi, two for Theta.
std::vector<Rational> transform_eval(Transform t, const HyperValuation& mu, const MonotoneMap& h);

/// Σ_i a_i δ_{c(i)} for every choice function c with c(i) in choices[i], in
/// the order of an odometer over the choice lists.
template <class T>
std::vector<SimpleValuation<T>> choice_combinations(const std::vector<Rational>& weights,
                                                    const std::vector<std::vector<T>>& choices, ValuationKind kind) {
  const std::size_t n = choices.size();
  for (const auto& c : choices)
    if (c.empty()) throw Error(ErrorCode::EmptyInput, "an atom offers no choices");
  std::vector<SimpleValuation<T>> out;
  auto emit = [&](const std::vector<std::size_t>& pick) {
    std::vector<Atom<T>> atoms;
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) atoms.push_back({weights[i], choices[i][pick[i]]});
    out.emplace_back(std::move(atoms), kind);
  };
  std::vector<std::size_t> pick(n, 0);
  if (mutated(Mutation::WrongChoiceProduct)) {
    std::size_t longest = 0;
    for (const auto& c : choices) longest = std::max(longest, c.size());
    for (std::size_t k = 0; k < std::max<std::size_t>(longest, 1); ++k) {
      for (std::size_t i = 0; i < n; ++i) pick[i] = std::min(k, choices[i].size() - 1);
      emit(pick);
    }
    return out;
  }
  while (true) {
    emit(pick);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

/// Which points of an atom the choice functions range over: the whole atom,
/// or only its minimal (up side) or maximal (down side) elements.
enum class ChoiceSource { WholeAtom, Extremal };

/// Points of `atom` that choice functions may pick on the given side.
std::vector<std::size_t> atom_choices(LawKind law, const FinitePoset& poset, const HyperElement& atom, Orientation side,
                                      ChoiceSource source = ChoiceSource::WholeAtom);

/// Raw choice-function generators of one side of the law's image.
std::vector<Valuation> lambda_generators(LawKind law, const PosetRef& carrier, const HyperValuation& mu,
                                         Orientation side, ChoiceSource source = ChoiceSource::WholeAtom);

/// Generated sets produced by a law: `up` for sharp, `down` for flat, both for
/// natural and lens.
struct LawImage {
  std::optional<ConvexSet> up;
  std::optional<ConvexSet> down;
};

bool has_side(LawKind law, Orientation side);
std::vector<Orientation> law_sides(LawKind law);

/// Image of mu under the law, canonicalized.
LawImage lambda_apply(LawKind law, const PosetRef& carrier, const HyperValuation& mu,
                      ChoiceSource source = ChoiceSource::WholeAtom);

/// Throws TypeMismatch / EmptyInput / InvalidQuasiLens for ill-formed input.
void validate_law_input(LawKind law, const FinitePoset& carrier, const HyperValuation& mu);

struct ImageVerdict {
  bool equal = true;
  // Side on which the images differ, with the genset_equal witness.
  Orientation side = Orientation::Up;
  EqualityVerdict detail;
};

ImageVerdict law_image_equal(const LawImage& a, const LawImage& b);

/// Mass of the atoms inside U (up side) or meeting U (down side). For the up
/// side the upper component of each atom is used, for the down side the
/// lower one.
Rational box_mass(const HyperValuation& mu, const PointSet& open);
Rational diamond_mass(const HyperValuation& mu, const PointSet& open);

/// Defining inequalities over every upper set U: ν(U) >= μ(□U) on the up
/// side, ν(U) <= μ(◇U) on the down side. The candidate must also have a total
/// admissible for the kind of mu.
bool lambda_member(LawKind law, const PosetRef& carrier, const HyperValuation& mu, const Valuation& nu,
                   Orientation side);

/// Nested input for the multiplication law of the hyperspace: a valuation on
/// the points of space.poset() whose atoms are elements over that poset.
LawImage tmult_law_lhs(LawKind law, const HyperSpace& space, const HyperValuation& xi);
/// Union, over generators g of the law at T(X), of the generators of the law
/// at X applied to g.
LawImage tmult_law_rhs(LawKind law, const HyperSpace& space, const HyperValuation& xi);

LawImage vmult_law_lhs(LawKind law, const PosetRef& carrier, const SimpleValuation<HyperValuation>& xi);
/// {Σ_k b_k ν_k} over choices of a generator ν_k of the law's image of each
/// inner valuation.
LawImage vmult_law_rhs(LawKind law, const PosetRef& carrier, const SimpleValuation<HyperValuation>& xi);

/// The law applied to the image of ν under the hyperspace unit, and the unit
/// over valuations applied to ν.
LawImage unit_law_lhs(LawKind law, const PosetRef& carrier, const Valuation& nu);
LawImage unit_law_rhs(LawKind law, const PosetRef& carrier, const Valuation& nu);

LawImage naturality_lhs(LawKind law, const PosetRef& source, const PosetRef& target, const PointMap& f,
                        const HyperValuation& mu);
LawImage naturality_rhs(LawKind law, const PosetRef& source, const PosetRef& target, const PointMap& f,
                        const HyperValuation& mu);

/// Every generator of the image satisfies the defining inequalities of mu.
bool image_satisfies_member(LawKind law, const PosetRef& carrier, const HyperValuation& mu, const LawImage& image);

/// Brute-force check of the multiplication-law reductions: mixes of the
/// intermediate generators with weights of denominator at most `den` are
/// pushed through the law, and every resulting generator must lie in `rhs`.
/// Mixes are enumerated exhaustively up to `max_mixes`, then stop.
bool tmult_grid_check(LawKind law, const HyperSpace& space, const HyperValuation& xi, const LawImage& rhs,
                      unsigned den = 8, std::size_t max_mixes = 2000);
bool vmult_grid_check(LawKind law, const PosetRef& carrier, const SimpleValuation<HyperValuation>& xi,
                      const LawImage& rhs, unsigned den = 8, std::size_t max_mixes = 2000);

/// Weight vectors on the simplex with the given number of coordinates and a
/// common denominator `den`.
std::vector<std::vector<Rational>> simplex_grid(std::size_t dim, unsigned den);

HyperValuation to_hyper_valuation(const HyperSpace& space, const Valuation& nu);

}  // namespace mforge
