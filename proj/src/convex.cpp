#include "mforge/convex.hpp"

#include <algorithm>

#include "mforge/mutation.hpp"

namespace mforge {

ConvexSet::ConvexSet(Orientation orientation, std::vector<Valuation> generators)
    : orientation_(orientation), generators_(std::move(generators)) {
  if (generators_.empty()) throw Error(ErrorCode::EmptyInput, "generated set needs at least one generator");
  for (const auto& g : generators_) {
    require_same_carrier(generators_.front().carrier(), g.carrier());
    if (g.kind() != generators_.front().kind())
      throw Error(ErrorCode::KindViolation, "generators of different kinds");
  }
}

namespace {

bool principal(const FinitePoset& p, const PointSet& u) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.up_of(x) == u) return true;
  return false;
}

// Nonempty upper sets used as constraint rows, honouring the constraint-class
// mutation.
std::vector<const PointSet*> constraint_sets(const FinitePoset& p) {
  std::vector<const PointSet*> out;
  for (const auto& u : p.upper_sets()) {
    if (u.empty()) continue;
    if (mutated(Mutation::SkipConstraintClass) && !principal(p, u)) continue;
    out.push_back(&u);
  }
  return out;
}

Rational mass(const Valuation& nu, const PointSet& u) {
  Rational t = 0;
  u.for_each([&](std::size_t i) { t += nu.weight(i); });
  return t;
}

}  // namespace

LinearProgram membership_program(const Valuation& candidate, const ConvexSet& set) {
  require_same_carrier(candidate.carrier(), set.carrier());
  const auto& gens = set.generators();
  const std::size_t m = gens.size();
  LinearProgram lp(m);
  lp.add_constraint(std::vector<Rational>(m, Rational(1)), Relation::Equal, Rational(1));
  const Relation rel = set.orientation() == Orientation::Up ? Relation::LessEqual : Relation::GreaterEqual;
  for (const PointSet* u : constraint_sets(set.carrier())) {
    std::vector<Rational> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = mass(gens[j], *u);
    lp.add_constraint(std::move(row), rel, mass(candidate, *u));
  }
  return lp;
}

Membership member_convex_set(const Valuation& candidate, const ConvexSet& set) {
  Membership out;
  if (!total_admissible(set.kind(), candidate.total())) return out;
  LinearProgram lp = membership_program(candidate, set);
  Feasibility f = lp_feasible(lp);
  if (f.feasible) {
    out.member = true;
    out.weights = std::move(f.witness);
    return out;
  }
  if (!verify_infeasibility_certificate(lp, f.certificate))
    throw Error(ErrorCode::InvalidArgument, "internal: membership certificate failed verification");
  const auto rows = constraint_sets(set.carrier());
  std::vector<Rational> h(set.carrier().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Rational coeff = f.certificate[r + 1];
    if (set.orientation() == Orientation::Down) coeff = -coeff;
    if (coeff == 0) continue;
    rows[r]->for_each([&](std::size_t i) { h[i] += coeff; });
  }
  out.separator = MonotoneMap(set.carrier_ref(), std::move(h));
  return out;
}

EqualityVerdict genset_equal(const ConvexSet& a, const ConvexSet& b) {
  if (a.orientation() != b.orientation())
    throw Error(ErrorCode::TypeMismatch, "comparing an upward-closed set with a downward-closed one");
  require_same_carrier(a.carrier(), b.carrier());
  if (a.kind() != b.kind()) throw Error(ErrorCode::TypeMismatch, "generated sets of different kinds");
  EqualityVerdict out;
  if (a.generators() == b.generators()) return out;
  for (int side = 0; side < 2; ++side) {
    const ConvexSet& from = side == 0 ? a : b;
    const ConvexSet& into = side == 0 ? b : a;
    for (const auto& g : from.generators()) {
      Membership m = member_convex_set(g, into);
      if (!m.member) {
        out.equal = false;
        out.witness = g;
        out.witness_from_first = side == 0;
        out.separator = m.separator;
        return out;
      }
    }
  }
  return out;
}

bool genset_equal(const GenQuasiLens& a, const GenQuasiLens& b) {
  return genset_equal(a.up, b.up).equal && genset_equal(a.down, b.down).equal;
}

ConvexSet canonicalize_generators(const ConvexSet& set) {
  std::vector<Valuation> gens = set.generators();
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  if (gens.size() > 1) {
    const auto rows = constraint_sets(set.carrier());
    std::vector<std::vector<Rational>> profile(gens.size(), std::vector<Rational>(rows.size()));
    for (std::size_t j = 0; j < gens.size(); ++j)
      for (std::size_t r = 0; r < rows.size(); ++r) profile[j][r] = mass(gens[j], *rows[r]);
    const bool up = set.orientation() == Orientation::Up;
    // below(x, y): every upper set weighs no more under x than under y.
    auto below = [&](std::size_t x, std::size_t y) {
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (profile[x][r] > profile[y][r]) return false;
      return true;
    };
    std::vector<bool> keep(gens.size(), true);
    for (std::size_t j = 0; j < gens.size(); ++j)
      for (std::size_t k = 0; k < gens.size() && keep[j]; ++k)
        if (k != j && keep[k] && (up ? below(k, j) : below(j, k))) keep[j] = false;
    std::vector<Valuation> kept;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (keep[j]) kept.push_back(gens[j]);
    gens = std::move(kept);
    for (std::size_t j = 0; j < gens.size() && gens.size() > 1;) {
      std::vector<Valuation> others;
      for (std::size_t k = 0; k < gens.size(); ++k)
        if (k != j) others.push_back(gens[k]);
      if (member_convex_set(gens[j], ConvexSet(set.orientation(), others)).member)
        gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(j));
      else
        ++j;
    }
  }
  return ConvexSet(set.orientation(), std::move(gens));
}

GenQuasiLens canonicalize(const GenQuasiLens& ql) {
  return {canonicalize_generators(ql.up), canonicalize_generators(ql.down)};
}

bool is_canonical(const ConvexSet& set) { return canonicalize_generators(set).generators() == set.generators(); }

MaximinResult maximin_over_simplex(const std::vector<std::vector<Rational>>& forms, const Rational& threshold) {
  if (forms.empty()) throw Error(ErrorCode::EmptyInput, "maximin over an empty family of forms");
  const std::size_t n = forms.front().size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "forms over an empty simplex");
  for (const auto& f : forms)
    if (f.size() != n) throw Error(ErrorCode::MalformedConstraint, "forms of different lengths");
  LinearProgram lp(n + 1);
  lp.set_free(n);
  std::vector<Rational> simplex(n + 1, Rational(1));
  simplex[n] = 0;
  lp.add_constraint(simplex, Relation::Equal, Rational(1));
  for (const auto& f : forms) {
    std::vector<Rational> row(n + 1);
    for (std::size_t k = 0; k < n; ++k) row[k] = -f[k];
    row[n] = 1;
    lp.add_constraint(std::move(row), Relation::LessEqual, Rational(0));
  }
  std::vector<Rational> objective(n + 1);
  objective[n] = 1;
  LpResult r = lp_maximize(lp, objective);
  if (r.status != LpStatus::Optimal) throw Error(ErrorCode::InvalidArgument, "internal: maximin program not optimal");
  MaximinResult out;
  out.value = r.value;
  out.weights.assign(r.solution.begin(), r.solution.begin() + static_cast<std::ptrdiff_t>(n));
  out.exceeds = r.value > threshold;
  return out;
}

std::vector<Valuation> convex_hull_vertices(const std::vector<Valuation>& points) {
  std::vector<Valuation> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t j = 0; j < pts.size() && pts.size() > 1;) {
    const std::size_t m = pts.size() - 1;
    LinearProgram lp(m);
    lp.add_constraint(std::vector<Rational>(m, Rational(1)), Relation::Equal, Rational(1));
    const std::size_t dim = pts[j].weights().size();
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<Rational> row;
      row.reserve(m);
      for (std::size_t k = 0; k < pts.size(); ++k)
        if (k != j) row.push_back(pts[k].weight(i));
      lp.add_constraint(std::move(row), Relation::Equal, pts[j].weight(i));
    }
    if (lp_feasible(lp).feasible)
      pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(j));
    else
      ++j;
  }
  return pts;
}

}  // namespace mforge
