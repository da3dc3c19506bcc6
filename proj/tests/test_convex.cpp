#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mforge/convex.hpp"
#include "mforge/mutation.hpp"
#include "oracles.hpp"

using namespace mforge;
using fixtures::q;
using fixtures::val;

namespace {

// Support-function test: ν lies in the upset iff every grid map integrates
// at least to the smallest generator integral (dually for downsets).
bool support_member(const Valuation& nu, const ConvexSet& s, const std::vector<MonotoneMap>& grid) {
  for (const auto& h : grid) {
    Rational best = integrate(s.generators()[0], h);
    for (const auto& g : s.generators()) {
      Rational v = integrate(g, h);
      best = s.orientation() == Orientation::Up ? std::min(best, v) : std::max(best, v);
    }
    Rational mine = integrate(nu, h);
    if (s.orientation() == Orientation::Up ? mine < best : mine > best) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("membership examples") {
  auto d2 = fixtures::discrete2();
  auto dx = unit_valuation(d2, 0), dy = unit_valuation(d2, 1);
  auto half = val(d2, {{"x", "1/2"}, {"y", "1/2"}});
  auto m = member_convex_set(half, upset_of({dx, dy}));
  REQUIRE(m.member);
  CHECK(m.weights == std::vector<Rational>{q("1/2"), q("1/2")});

  auto out = member_convex_set(dx, upset_of({dy}));
  CHECK_FALSE(out.member);
  REQUIRE(out.separator);
  // the separator integrates strictly lower on the candidate
  CHECK(integrate(dx, *out.separator) < integrate(dy, *out.separator));

  auto set = downset_of({dx, half});
  for (const auto& g : set.generators()) CHECK(member_convex_set(g, set).member);

  CHECK_THROWS_AS(member_convex_set(dx, upset_of({unit_valuation(fixtures::chain2(), 0)})), Error);
}

TEST_CASE("separators certify non-membership") {
  auto b = fixtures::flat_bool();
  auto dt = unit_valuation(b, b->index_of("t")), df = unit_valuation(b, b->index_of("f"));
  auto db = unit_valuation(b, b->index_of("b"));
  auto up = upset_of({dt, df});
  auto m = member_convex_set(db, up);
  REQUIRE_FALSE(m.member);
  REQUIRE(m.separator);
  for (const auto& g : up.generators()) CHECK(integrate(db, *m.separator) < integrate(g, *m.separator));

  auto down = downset_of({db});
  auto n = member_convex_set(dt, down);
  REQUIRE_FALSE(n.member);
  REQUIRE(n.separator);
  CHECK(integrate(dt, *n.separator) > integrate(db, *n.separator));
}

TEST_CASE("membership agrees with the support-function test on every poset up to 3 points") {
  std::mt19937 rng(7);
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& p0 : enumerate_posets(n)) {
      auto p = share(p0);
      auto grid = enumerate_monotone_grid(p, 3);
      auto points = oracle::weight_grid(n, 3, Rational(1), Rational(1));
      std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
      for (int rep = 0; rep < 8; ++rep) {
        std::vector<Valuation> gens;
        for (int k = 0; k < 1 + rep % 3; ++k) gens.emplace_back(p, points[pick(rng)], ValuationKind::Prob);
        for (auto orientation : {Orientation::Up, Orientation::Down}) {
          ConvexSet s(orientation, gens);
          for (const auto& w : points) {
            Valuation nu(p, w, ValuationKind::Prob);
            auto m = member_convex_set(nu, s);
            CHECK(m.member == support_member(nu, s, grid));
            if (m.member) {
              // monotone under the stochastic order
              for (const auto& w2 : points) {
                Valuation other(p, w2, ValuationKind::Prob);
                bool ordered = orientation == Orientation::Up ? stochastic_leq(nu, other) : stochastic_leq(other, nu);
                if (ordered) CHECK(member_convex_set(other, s).member);
              }
            } else if (m.separator) {
              for (const auto& g : gens) {
                if (orientation == Orientation::Up)
                  CHECK(integrate(nu, *m.separator) < integrate(g, *m.separator));
                else
                  CHECK(integrate(nu, *m.separator) > integrate(g, *m.separator));
              }
            }
          }
        }
      }
    }
}

TEST_CASE("subprobability candidates") {
  auto d2 = fixtures::discrete2();
  auto sub_x = Valuation::dirac(d2, 0, ValuationKind::Sub);
  auto zero = Valuation::zero(d2, ValuationKind::Sub);
  CHECK(member_convex_set(zero, downset_of({sub_x})).member);
  CHECK_FALSE(member_convex_set(zero, upset_of({sub_x})).member);
  // a total above one cannot belong to a set of subprobability valuations
  CHECK_FALSE(member_convex_set(val(d2, {{"x", "1"}, {"y", "1"}}, ValuationKind::General), upset_of({sub_x})).member);
}

TEST_CASE("set equality") {
  auto d2 = fixtures::discrete2();
  auto dx = unit_valuation(d2, 0), dy = unit_valuation(d2, 1);
  auto half = val(d2, {{"x", "1/2"}, {"y", "1/2"}});
  CHECK(genset_equal(upset_of({dx, dy}), upset_of({dx, dy, half})).equal);
  auto diff = genset_equal(upset_of({dx}), upset_of({dy}));
  CHECK_FALSE(diff.equal);
  REQUIRE(diff.witness);
  CHECK(*diff.witness == dx);
  CHECK(diff.witness_from_first);
  REQUIRE(diff.separator);
  CHECK(genset_equal(upset_of({half}), upset_of({half})).equal);
  try {
    genset_equal(upset_of({dx}), downset_of({dx}));
    FAIL("mixed orientations accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TypeMismatch);
  }
}

// Generator membership suffices for inclusion: on D2 the upset spanned by
// {δx, δy} is the whole probability simplex, and every point of a fine grid
// is a member once both generators are.
TEST_CASE("generator membership implies inclusion on D2") {
  auto d2 = fixtures::discrete2();
  auto big = upset_of({val(d2, {{"x", "1/3"}, {"y", "2/3"}}), val(d2, {{"x", "3/4"}, {"y", "1/4"}})});
  auto small = upset_of({val(d2, {{"x", "1/2"}, {"y", "1/2"}})});
  REQUIRE(member_convex_set(small.generators()[0], big).member);
  for (const auto& w : oracle::weight_grid(2, 8, Rational(1), Rational(1))) {
    Valuation nu(d2, w, ValuationKind::Prob);
    if (member_convex_set(nu, small).member) CHECK(member_convex_set(nu, big).member);
  }
}

TEST_CASE("canonical generators") {
  auto d2 = fixtures::discrete2();
  auto dx = unit_valuation(d2, 0), dy = unit_valuation(d2, 1);
  auto half = val(d2, {{"x", "1/2"}, {"y", "1/2"}});
  auto c = canonicalize_generators(upset_of({dx, dy, half}));
  std::vector<Valuation> expected = {dx, dy};
  std::sort(expected.begin(), expected.end());
  CHECK(c.generators() == expected);

  auto b = fixtures::flat_bool();
  auto dt = unit_valuation(b, b->index_of("t")), db = unit_valuation(b, b->index_of("b"));
  CHECK(canonicalize_generators(upset_of({dt, db})).generators() == std::vector<Valuation>{db});
  CHECK(canonicalize_generators(downset_of({dt, db})).generators() == std::vector<Valuation>{dt});
  CHECK(canonicalize_generators(upset_of({half})).generators() == std::vector<Valuation>{half});

  std::mt19937 rng(29);
  for (std::size_t n = 2; n <= 4; ++n)
    for (const auto& p0 : enumerate_posets(n)) {
      auto p = share(p0);
      auto points = oracle::weight_grid(n, 2, Rational(1), Rational(1));
      std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<Valuation> gens;
        for (int k = 0; k < 4; ++k) gens.emplace_back(p, points[pick(rng)], ValuationKind::Prob);
        for (auto orientation : {Orientation::Up, Orientation::Down}) {
          ConvexSet s(orientation, gens);
          auto cs = canonicalize_generators(s);
          CHECK(genset_equal(s, cs).equal);
          CHECK(is_canonical(cs));
          // shuffled input gives the same output
          auto shuffled = gens;
          std::shuffle(shuffled.begin(), shuffled.end(), rng);
          CHECK(canonicalize_generators(ConvexSet(orientation, shuffled)).generators() == cs.generators());
          // no kept generator lies in the span of the others
          for (std::size_t j = 0; j < cs.generators().size() && cs.generators().size() > 1; ++j) {
            std::vector<Valuation> others;
            for (std::size_t k = 0; k < cs.generators().size(); ++k)
              if (k != j) others.push_back(cs.generators()[k]);
            CHECK_FALSE(member_convex_set(cs.generators()[j], ConvexSet(orientation, others)).member);
          }
        }
      }
    }
}

TEST_CASE("maximin over the simplex") {
  auto r = maximin_over_simplex({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}, q("1/3"));
  CHECK(r.exceeds);
  CHECK(r.value == q("1/2"));
  CHECK(r.weights == std::vector<Rational>{q("1/2"), q("1/2")});

  auto single = maximin_over_simplex({{Rational(2)}}, Rational(3));
  CHECK_FALSE(single.exceeds);
  CHECK(single.value == 2);

  auto tie = maximin_over_simplex({{Rational(2), Rational(1)}, {Rational(1), Rational(2)}}, q("3/2"));
  CHECK(tie.value == q("3/2"));
  CHECK_FALSE(tie.exceeds);
  CHECK(tie.weights == std::vector<Rational>{q("1/2"), q("1/2")});

  CHECK_THROWS_AS(maximin_over_simplex({}, Rational(0)), Error);
}

// Grid value approaches the exact value from below as the grid refines.
TEST_CASE("maximin agrees with a discretized simplex search") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> coef(0, 5);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 1 + rep % 3;
    const std::size_t forms = 1 + (rep / 3) % 3;
    std::vector<std::vector<Rational>> f(forms, std::vector<Rational>(n));
    for (auto& row : f)
      for (auto& c : row) c = coef(rng);
    auto exact = maximin_over_simplex(f, Rational(0));
    Rational grid_best = -1;
    for (const auto& t : oracle::weight_grid(n, 16, Rational(1), Rational(1))) {
      Rational m = -1;
      for (const auto& row : f) {
        Rational v = 0;
        for (std::size_t k = 0; k < n; ++k) v += row[k] * t[k];
        if (m < 0 || v < m) m = v;
      }
      grid_best = std::max(grid_best, m);
    }
    CHECK(grid_best <= exact.value);
    // the optimum of a 2-variable or 3-variable problem with small integer
    // forms has denominator at most 16 in these sizes, so the grid finds it
    if (n <= 2) CHECK(grid_best == exact.value);
    Rational at_weights = -1;
    for (const auto& row : f) {
      Rational v = 0;
      for (std::size_t k = 0; k < n; ++k) v += row[k] * exact.weights[k];
      if (at_weights < 0 || v < at_weights) at_weights = v;
    }
    CHECK(at_weights == exact.value);
  }
}

// Two points below a common top: the whole space is an upper set that is not
// principal, and only its row rejects δ_top against δ_a + δ_b.
TEST_CASE("constraint-class mutation loses completeness") {
  auto vee = make_poset({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}});
  auto top = val(vee, {{"c", "1"}}, ValuationKind::General);
  auto pair = val(vee, {{"a", "1"}, {"b", "1"}}, ValuationKind::General);
  CHECK_FALSE(member_convex_set(top, upset_of({pair})).member);
  ScopedMutation guard(Mutation::SkipConstraintClass);
  CHECK(member_convex_set(top, upset_of({pair})).member);
}

TEST_CASE("convex hull vertices") {
  auto d2 = fixtures::discrete2();
  auto dx = unit_valuation(d2, 0), dy = unit_valuation(d2, 1);
  auto half = val(d2, {{"x", "1/2"}, {"y", "1/2"}});
  auto v = convex_hull_vertices({half, dx, dy, dx});
  std::vector<Valuation> expected = {dx, dy};
  std::sort(expected.begin(), expected.end());
  CHECK(v == expected);
}
