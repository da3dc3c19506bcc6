#include "mforge/weak_laws.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace mforge {

const char* law_name(LawKind law) {
  switch (law) {
    case LawKind::Sharp: return "sharp";
    case LawKind::Flat: return "flat";
    case LawKind::Natural: return "natural";
    case LawKind::Lens: return "lens";
  }
  return "?";
}

LawKind parse_law(const std::string& name) {
  if (name == "sharp") return LawKind::Sharp;
  if (name == "flat") return LawKind::Flat;
  if (name == "natural") return LawKind::Natural;
  if (name == "lens") return LawKind::Lens;
  throw Error(ErrorCode::InvalidArgument, "unknown law '" + name + "'");
}

HyperKind law_hyperspace(LawKind law) {
  switch (law) {
    case LawKind::Sharp: return HyperKind::Smyth;
    case LawKind::Flat: return HyperKind::Hoare;
    case LawKind::Natural: return HyperKind::QuasiLens;
    case LawKind::Lens: return HyperKind::Lens;
  }
  return HyperKind::Smyth;
}

Rational star_upper(const MonotoneMap& h, const PointSet& set) {
  if (set.empty()) throw Error(ErrorCode::EmptyInput, "minimum over an empty set");
  if (set.universe() != h.carrier().size()) throw Error(ErrorCode::CarrierMismatch, "set and map on different posets");
  std::optional<Rational> best;
  set.for_each([&](std::size_t x) {
    if (!best || h(x) < *best) best = h(x);
  });
  return *best;
}

Rational star_lower(const MonotoneMap& h, const PointSet& set) {
  if (set.empty()) throw Error(ErrorCode::EmptyInput, "maximum over an empty set");
  if (set.universe() != h.carrier().size()) throw Error(ErrorCode::CarrierMismatch, "set and map on different posets");
  std::optional<Rational> best;
  set.for_each([&](std::size_t x) {
    if (!best || h(x) > *best) best = h(x);
  });
  return *best;
}

Transform parse_transform(const std::string& name) {
  if (name == "phi") return Transform::Phi;
  if (name == "psi") return Transform::Psi;
  if (name == "theta") return Transform::Theta;
  throw Error(ErrorCode::InvalidArgument, "unknown transform '" + name + "'");
}

namespace {

void require_atom_kinds(const HyperValuation& mu, std::initializer_list<HyperKind> allowed, const char* what) {
  for (const auto& a : mu.atoms())
    if (std::find(allowed.begin(), allowed.end(), a.carrier.kind) == allowed.end())
      throw Error(ErrorCode::TypeMismatch,
                  std::string(what) + " does not accept " + hyper_kind_name(a.carrier.kind) + " atoms");
}

}  // namespace

Rational transform_phi(const HyperValuation& mu, const MonotoneMap& h) {
  require_atom_kinds(mu, {HyperKind::Smyth}, "phi");
  Rational total = 0;
  for (const auto& a : mu.atoms()) total += a.weight * star_upper(h, a.carrier.upper);
  return total;
}

Rational transform_psi(const HyperValuation& mu, const MonotoneMap& h) {
  require_atom_kinds(mu, {HyperKind::Hoare}, "psi");
  Rational total = 0;
  for (const auto& a : mu.atoms()) total += a.weight * star_lower(h, a.carrier.lower);
  return total;
}

std::pair<Rational, Rational> transform_theta(const HyperValuation& mu, const MonotoneMap& h) {
  require_atom_kinds(mu, {HyperKind::QuasiLens, HyperKind::Lens}, "theta");
  Rational low = 0, high = 0;
  for (const auto& a : mu.atoms()) {
    low += a.weight * star_upper(h, a.carrier.upper);
    high += a.weight * star_lower(h, a.carrier.lower);
  }
  return {low, high};
}

std::vector<Rational> transform_eval(Transform t, const HyperValuation& mu, const MonotoneMap& h) {
  switch (t) {
    case Transform::Phi: return {transform_phi(mu, h)};
    case Transform::Psi: return {transform_psi(mu, h)};
    case Transform::Theta: {
      auto [low, high] = transform_theta(mu, h);
      return {low, high};
    }
  }
  return {};
}

bool has_side(LawKind law, Orientation side) {
  if (law == LawKind::Sharp) return side == Orientation::Up;
  if (law == LawKind::Flat) return side == Orientation::Down;
  return true;
}

std::vector<Orientation> law_sides(LawKind law) {
  std::vector<Orientation> out;
  for (auto side : {Orientation::Up, Orientation::Down})
    if (has_side(law, side)) out.push_back(side);
  return out;
}

std::vector<std::size_t> atom_choices(LawKind law, const FinitePoset& poset, const HyperElement& atom, Orientation side,
                                      ChoiceSource source) {
  if (atom.kind != law_hyperspace(law))
    throw Error(ErrorCode::TypeMismatch,
                std::string(law_name(law)) + " law does not accept " + hyper_kind_name(atom.kind) + " atoms");
  if (!has_side(law, side)) throw Error(ErrorCode::InvalidArgument, std::string(law_name(law)) + " law has no such side");
  const bool whole = source == ChoiceSource::WholeAtom;
  PointSet set;
  switch (law) {
    case LawKind::Sharp: set = whole ? atom.upper : poset.minimal(atom.upper); break;
    case LawKind::Flat: set = whole ? atom.lower : poset.maximal(atom.lower); break;
    case LawKind::Natural:
    case LawKind::Lens:
      if (whole)
        set = atom.upper & atom.lower;
      else
        set = side == Orientation::Up ? poset.minimal(atom.upper) : poset.maximal(atom.lower);
      break;
  }
  if (set.empty()) throw Error(ErrorCode::EmptyInput, "empty atom");
  return set.indices();
}

std::vector<Valuation> lambda_generators(LawKind law, const PosetRef& carrier, const HyperValuation& mu,
                                         Orientation side, ChoiceSource source) {
  std::vector<Rational> weights;
  std::vector<std::vector<std::size_t>> choices;
  for (const auto& a : mu.atoms()) {
    weights.push_back(a.weight);
    choices.push_back(atom_choices(law, *carrier, a.carrier, side, source));
  }
  std::vector<Valuation> out;
  for (const auto& combo : choice_combinations(weights, choices, mu.kind())) out.push_back(from_simple(carrier, combo));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_law_input(LawKind law, const FinitePoset& carrier, const HyperValuation& mu) {
  for (const auto& a : mu.atoms()) {
    if (a.carrier.kind != law_hyperspace(law))
      throw Error(ErrorCode::TypeMismatch,
                  std::string(law_name(law)) + " law does not accept " + hyper_kind_name(a.carrier.kind) + " atoms");
    const PointSet& any = a.carrier.kind == HyperKind::Hoare ? a.carrier.lower : a.carrier.upper;
    if (any.universe() != carrier.size()) throw Error(ErrorCode::CarrierMismatch, "atom lives on another poset");
    validate_element(carrier, a.carrier);
  }
}

LawImage lambda_apply(LawKind law, const PosetRef& carrier, const HyperValuation& mu, ChoiceSource source) {
  validate_law_input(law, *carrier, mu);
  LawImage out;
  for (auto side : law_sides(law)) {
    auto set = canonicalize_generators(ConvexSet(side, lambda_generators(law, carrier, mu, side, source)));
    (side == Orientation::Up ? out.up : out.down) = std::move(set);
  }
  return out;
}

ImageVerdict law_image_equal(const LawImage& a, const LawImage& b) {
  if (a.up.has_value() != b.up.has_value() || a.down.has_value() != b.down.has_value())
    throw Error(ErrorCode::TypeMismatch, "images of different laws");
  ImageVerdict v;
  if (a.up) {
    v.detail = genset_equal(*a.up, *b.up);
    if (!v.detail.equal) {
      v.equal = false;
      v.side = Orientation::Up;
      return v;
    }
  }
  if (a.down) {
    v.detail = genset_equal(*a.down, *b.down);
    if (!v.detail.equal) {
      v.equal = false;
      v.side = Orientation::Down;
    }
  }
  return v;
}

Rational box_mass(const HyperValuation& mu, const PointSet& open) {
  Rational total = 0;
  for (const auto& a : mu.atoms())
    if (a.carrier.upper.is_subset_of(open)) total += a.weight;
  return total;
}

Rational diamond_mass(const HyperValuation& mu, const PointSet& open) {
  Rational total = 0;
  for (const auto& a : mu.atoms())
    if (a.carrier.lower.intersects(open)) total += a.weight;
  return total;
}

bool lambda_member(LawKind law, const PosetRef& carrier, const HyperValuation& mu, const Valuation& nu,
                   Orientation side) {
  validate_law_input(law, *carrier, mu);
  require_same_carrier(nu.carrier(), *carrier);
  if (!has_side(law, side)) throw Error(ErrorCode::InvalidArgument, std::string(law_name(law)) + " law has no such side");
  if (!total_admissible(mu.kind(), nu.total())) return false;
  for (const auto& open : carrier->upper_sets()) {
    const Rational mass = eval_open(nu, open);
    if (side == Orientation::Up ? mass < box_mass(mu, open) : mass > diamond_mass(mu, open)) return false;
  }
  return true;
}

HyperValuation to_hyper_valuation(const HyperSpace& space, const Valuation& nu) {
  std::vector<Atom<HyperElement>> atoms;
  for (std::size_t i = 0; i < nu.weights().size(); ++i)
    if (nu.weight(i) != 0) atoms.push_back({nu.weight(i), space.element(i)});
  return HyperValuation(std::move(atoms), nu.kind());
}

namespace {

void require_space(LawKind law, const HyperSpace& space) {
  if (space.kind() != law_hyperspace(law))
    throw Error(ErrorCode::TypeMismatch, std::string(law_name(law)) + " law over a " + hyper_kind_name(space.kind()) +
                                             " hyperspace");
}

void set_side(LawImage& image, Orientation side, std::vector<Valuation> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  auto set = canonicalize_generators(ConvexSet(side, std::move(gens)));
  (side == Orientation::Up ? image.up : image.down) = std::move(set);
}

// Generators of the law at X for each raw generator of the law at T(X).
class InnerLaw {
 public:
  InnerLaw(LawKind law, const HyperSpace& space, Orientation side) : law_(law), space_(space), side_(side) {}

  const std::vector<Valuation>& operator()(const Valuation& g) {
    auto it = memo_.find(g);
    if (it != memo_.end()) return it->second;
    auto gens = lambda_generators(law_, space_.base_ref(), to_hyper_valuation(space_, g), side_, ChoiceSource::Extremal);
    return memo_.emplace(g, std::move(gens)).first->second;
  }

 private:
  LawKind law_;
  const HyperSpace& space_;
  Orientation side_;
  std::map<Valuation, std::vector<Valuation>> memo_;
};

}  // namespace

LawImage tmult_law_lhs(LawKind law, const HyperSpace& space, const HyperValuation& xi) {
  require_space(law, space);
  validate_law_input(law, *space.poset(), xi);
  auto flat = xi.map([&](const HyperElement& nested) { return space.mult(nested); });
  return lambda_apply(law, space.base_ref(), flat);
}

LawImage tmult_law_rhs(LawKind law, const HyperSpace& space, const HyperValuation& xi) {
  require_space(law, space);
  validate_law_input(law, *space.poset(), xi);
  LawImage out;
  for (auto side : law_sides(law)) {
    InnerLaw inner(law, space, side);
    std::vector<Valuation> gens;
    for (const auto& g : lambda_generators(law, space.poset(), xi, side, ChoiceSource::Extremal)) {
      const auto& part = inner(g);
      gens.insert(gens.end(), part.begin(), part.end());
    }
    set_side(out, side, std::move(gens));
  }
  return out;
}

LawImage vmult_law_lhs(LawKind law, const PosetRef& carrier, const SimpleValuation<HyperValuation>& xi) {
  return lambda_apply(law, carrier, flatten(xi));
}

LawImage vmult_law_rhs(LawKind law, const PosetRef& carrier, const SimpleValuation<HyperValuation>& xi) {
  LawImage out;
  for (auto side : law_sides(law)) {
    std::vector<Rational> weights;
    std::vector<std::vector<Valuation>> lists;
    for (const auto& a : xi.atoms()) {
      validate_law_input(law, *carrier, a.carrier);
      weights.push_back(a.weight);
      lists.push_back(lambda_generators(law, carrier, a.carrier, side, ChoiceSource::Extremal));
    }
    std::vector<Valuation> gens;
    for (const auto& combo : choice_combinations(weights, lists, xi.kind())) gens.push_back(flatten(combo, carrier));
    set_side(out, side, std::move(gens));
  }
  return out;
}

LawImage unit_law_lhs(LawKind law, const PosetRef& carrier, const Valuation& nu) {
  require_same_carrier(nu.carrier(), *carrier);
  std::vector<Atom<HyperElement>> atoms;
  for (std::size_t x = 0; x < carrier->size(); ++x)
    if (nu.weight(x) != 0) atoms.push_back({nu.weight(x), hyper_unit(law_hyperspace(law), *carrier, x)});
  return lambda_apply(law, carrier, HyperValuation(std::move(atoms), nu.kind()));
}

LawImage unit_law_rhs(LawKind law, const PosetRef& carrier, const Valuation& nu) {
  require_same_carrier(nu.carrier(), *carrier);
  LawImage out;
  for (auto side : law_sides(law)) set_side(out, side, {nu});
  return out;
}

LawImage naturality_lhs(LawKind law, const PosetRef& source, const PosetRef& target, const PointMap& f,
                        const HyperValuation& mu) {
  if (!is_monotone(*source, *target, f)) throw Error(ErrorCode::NotMonotone, "naturality along a non-monotone map");
  validate_law_input(law, *source, mu);
  auto pushed = mu.map([&](const HyperElement& e) { return hyper_map(*source, *target, f, e); });
  return lambda_apply(law, target, pushed);
}

LawImage naturality_rhs(LawKind law, const PosetRef& source, const PosetRef& target, const PointMap& f,
                        const HyperValuation& mu) {
  if (!is_monotone(*source, *target, f)) throw Error(ErrorCode::NotMonotone, "naturality along a non-monotone map");
  LawImage image = lambda_apply(law, source, mu);
  LawImage out;
  for (auto side : law_sides(law)) {
    const ConvexSet& set = side == Orientation::Up ? *image.up : *image.down;
    std::vector<Valuation> gens;
    for (const auto& g : set.generators()) gens.push_back(pushforward(f, g, target));
    set_side(out, side, std::move(gens));
  }
  return out;
}

bool image_satisfies_member(LawKind law, const PosetRef& carrier, const HyperValuation& mu, const LawImage& image) {
  for (auto side : law_sides(law)) {
    const auto& set = side == Orientation::Up ? image.up : image.down;
    if (!set) return false;
    for (const auto& g : set->generators())
      if (!lambda_member(law, carrier, mu, g, side)) return false;
  }
  return true;
}

std::vector<std::vector<Rational>> simplex_grid(std::size_t dim, unsigned den) {
  std::vector<std::vector<Rational>> out;
  if (dim == 0) return out;
  std::vector<unsigned> parts(dim, 0);
  // Enumerate compositions of den into dim parts.
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == dim) {
      parts[i] = left;
      std::vector<Rational> w(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        w[k] = Rational(parts[k], den);
        w[k].canonicalize();
      }
      out.push_back(std::move(w));
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      parts[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, den);
  return out;
}

namespace {

// Grid weights for mixing `dim` points: the whole grid when it has at most
// `limit` points, otherwise `limit` seeded draws from it.
std::vector<std::vector<Rational>> mixing_weights(std::size_t dim, unsigned den, std::size_t limit) {
  // Size of the grid is C(den + dim - 1, dim - 1); stop counting past limit.
  std::size_t count = 1;
  for (std::size_t k = 1; k < dim && count <= limit; ++k) count = count * (den + k) / k;
  if (count <= limit) return simplex_grid(dim, den);
  std::mt19937_64 rng(0x5eed + dim * 131 + den);
  std::vector<std::vector<Rational>> out;
  for (std::size_t s = 0; s < limit; ++s) {
    std::vector<unsigned> parts(dim, 0);
    for (unsigned u = 0; u < den; ++u) ++parts[rng() % dim];
    std::vector<Rational> w(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      w[k] = Rational(parts[k], den);
      w[k].canonicalize();
    }
    out.push_back(std::move(w));
  }
  return out;
}

Valuation mix(const std::vector<Valuation>& points, const std::vector<Rational>& weights) {
  std::vector<Rational> acc(points.front().weights().size(), Rational(0));
  for (std::size_t k = 0; k < points.size(); ++k)
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weights[k] * points[k].weight(i);
  return Valuation(points.front().carrier_ref(), std::move(acc), points.front().kind());
}

}  // namespace

bool tmult_grid_check(LawKind law, const HyperSpace& space, const HyperValuation& xi, const LawImage& rhs, unsigned den,
                      std::size_t max_mixes) {
  for (auto side : law_sides(law)) {
    const auto& target = side == Orientation::Up ? rhs.up : rhs.down;
    if (!target) return false;
    auto level2 = lambda_generators(law, space.poset(), xi, side, ChoiceSource::Extremal);
    InnerLaw inner(law, space, side);
    std::vector<Valuation> seen;
    for (const auto& w : mixing_weights(level2.size(), den, max_mixes))
      for (const auto& g : inner(mix(level2, w))) seen.push_back(g);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& g : seen)
      if (!member_convex_set(g, *target).member) return false;
  }
  return true;
}

bool vmult_grid_check(LawKind law, const PosetRef& carrier, const SimpleValuation<HyperValuation>& xi,
                      const LawImage& rhs, unsigned den, std::size_t max_mixes) {
  std::mt19937_64 rng(0xface + xi.atoms().size());
  for (auto side : law_sides(law)) {
    const auto& target = side == Orientation::Up ? rhs.up : rhs.down;
    if (!target) return false;
    std::vector<std::vector<Valuation>> lists;
    std::vector<std::vector<std::vector<Rational>>> grids;
    for (const auto& a : xi.atoms()) {
      lists.push_back(lambda_generators(law, carrier, a.carrier, side, ChoiceSource::Extremal));
      grids.push_back(mixing_weights(lists.back().size(), den, max_mixes));
    }
    std::vector<Valuation> seen;
    for (std::size_t s = 0; s < max_mixes; ++s) {
      std::vector<Atom<Valuation>> atoms;
      for (std::size_t k = 0; k < lists.size(); ++k)
        atoms.push_back({xi.atoms()[k].weight, mix(lists[k], grids[k][rng() % grids[k].size()])});
      seen.push_back(flatten(SimpleValuation<Valuation>(std::move(atoms), xi.kind()), carrier));
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& g : seen)
      if (!member_convex_set(g, *target).member) return false;
  }
  return true;
}

}  // namespace mforge
