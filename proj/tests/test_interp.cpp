#include "doctest.h"
#include "fixtures.hpp"
#include "interp_oracle.hpp"
#include "mforge/interp.hpp"

using namespace mforge;
using fixtures::fn;
using fixtures::q;
using fixtures::val;

namespace {

ProgramRef constant(const FinitePoset& p, const char* name) {
  return step(PointMap{std::vector<std::size_t>(p.size(), p.index_of(name))});
}

std::vector<PosetRef> small_posets(std::size_t max_n) {
  std::vector<PosetRef> out;
  for (std::size_t n = 1; n <= max_n; ++n)
    for (const auto& p : enumerate_posets(n)) out.push_back(share(p));
  return out;
}

}  // namespace

TEST_CASE("step id is the unit") {
  auto b = fixtures::flat_bool();
  auto d = denote_program(*step(identity_map(*b)), b);
  for (std::size_t x = 0; x < b->size(); ++x) CHECK(d[x] == fork_unit(b, x));
}

TEST_CASE("erratic choice of two constants") {
  auto b = fixtures::flat_bool();
  auto prog = binary(ProgramOp::EChoice, constant(*b, "t"), constant(*b, "f"));
  auto d = denote_program(*prog, b);
  const Fork& at_b = d[b->index_of("b")];
  std::vector<Valuation> both = {val(b, {{"t", "1"}}), val(b, {{"f", "1"}})};
  std::sort(both.begin(), both.end());
  auto sorted = [](std::vector<Valuation> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(sorted(at_b.lower.generators()) == both);
  CHECK(sorted(at_b.upper.generators()) == both);
  auto h = fn(b, {{"t", "1"}});
  CHECK(query_fork(d, b->index_of("b"), h) == ForkBounds{q("0"), q("1")});
}

TEST_CASE("probabilistic choice of two constants") {
  auto b = fixtures::flat_bool();
  auto prog = pchoice(q("1/2"), constant(*b, "t"), constant(*b, "f"));
  auto d = denote_program(*prog, b);
  for (std::size_t x = 0; x < b->size(); ++x) {
    CHECK(d[x].lower.generators() == std::vector<Valuation>{val(b, {{"t", "1/2"}, {"f", "1/2"}})});
    CHECK(d[x].upper.generators() == d[x].lower.generators());
    CHECK(query_fork(d, x, fn(b, {{"t", "1"}})) == ForkBounds{q("1/2"), q("1/2")});
  }
}

TEST_CASE("two coins in sequence") {
  auto b = fixtures::flat_bool();
  // t with probability 1/2, then stay with probability 1/2: t overall 1/4.
  auto coin = pchoice(q("1/2"), constant(*b, "t"), constant(*b, "f"));
  auto stay = pchoice(q("1/2"), step(identity_map(*b)), constant(*b, "f"));
  auto d = denote_program(*binary(ProgramOp::Seq, coin, stay), b);
  auto up_t = fn(b, {{"t", "1"}});
  for (std::size_t x = 0; x < b->size(); ++x) CHECK(query_fork(d, x, up_t) == ForkBounds{q("1/4"), q("1/4")});
}

TEST_CASE("demonic and angelic pairings") {
  auto b = fixtures::flat_bool();
  auto h = fn(b, {{"t", "1"}});
  // Choosing between staying at b and jumping to f: the demon's lower bound
  // is 0, and mass at b may still move up to t when read from above.
  auto d = denote_program(*binary(ProgramOp::DChoice, constant(*b, "b"), constant(*b, "f")), b);
  CHECK(query_fork(d, 0, h) == ForkBounds{q("0"), q("1")});
  auto a = denote_program(*binary(ProgramOp::AChoice, constant(*b, "t"), constant(*b, "f")), b);
  // From below both outcomes can drop to b.
  CHECK(query_fork(a, 0, h) == ForkBounds{q("0"), q("1")});
  auto a2 = denote_program(*binary(ProgramOp::AChoice, constant(*b, "t"), constant(*b, "t")), b);
  CHECK(query_fork(a2, 0, h) == ForkBounds{q("0"), q("1")});
  auto e2 = denote_program(*binary(ProgramOp::EChoice, constant(*b, "t"), constant(*b, "t")), b);
  CHECK(query_fork(e2, 0, h) == ForkBounds{q("1"), q("1")});
  for (const auto& f : {d, a, a2, e2})
    for (const auto& fork : f) CHECK(walley_check(fork, {h, fn(b, {{"f", "1"}}), fn(b, {{"b", "1"}, {"t", "2"}, {"f", "1"}})}).pass);
}

TEST_CASE("non-monotone families are rejected with a witness") {
  // Read from above, mass at b may move to t or f while mass at t stays put,
  // so the upper bound at b exceeds the one at t.
  auto b = fixtures::flat_bool();
  auto prog = binary(ProgramOp::DChoice, step(identity_map(*b)), step(identity_map(*b)));
  try {
    denote_program(*prog, b);
    FAIL("expected a monotonicity error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotMonotone);
    CHECK(std::string(e.what()).find("on (") != std::string::npos);
  }
}

TEST_CASE("program json round trip and errors") {
  auto b = fixtures::flat_bool();
  auto j = parse_json_text(R"({"op":"seq","left":{"op":"pchoice","p":"1/3","left":{"op":"step","map":"id"},
      "right":{"op":"step","map":{"const":"t"}}},"right":{"op":"echoice","left":{"op":"step","map":{"b":"b","t":"t","f":"f"}},
      "right":{"op":"step","map":{"const":"f"}}}})");
  auto prog = program_from_json(j, *b);
  CHECK(node_count(*prog) == 7);
  CHECK(choice_count(*prog) == 1);
  auto again = program_from_json(program_to_json(*b, *prog), *b);
  CHECK(program_to_json(*b, *again) == program_to_json(*b, *prog));

  auto bad_p = parse_json_text(R"({"op":"pchoice","p":"3/2","left":{"op":"step","map":"id"},"right":{"op":"step","map":"id"}})");
  CHECK_THROWS_AS(program_from_json(bad_p, *b), Error);
  auto bad_op = parse_json_text(R"({"op":"loop"})");
  CHECK_THROWS_AS(program_from_json(bad_op, *b), Error);
  auto not_monotone = parse_json_text(R"({"op":"step","map":{"b":"t","t":"b","f":"f"}})");
  CHECK_THROWS_AS(program_from_json(not_monotone, *b), Error);
}

TEST_CASE("deterministic programs have equal bounds") {
  Rng rng(5);
  for (const auto& p : small_posets(3)) {
    for (int i = 0; i < 10; ++i) {
      auto prog = random_program(rng, *p, 0, 4);
      REQUIRE(choice_count(*prog) == 0);
      auto d = denote_program(*prog, p);
      for (const auto& h : test_maps(p, rng, 8))
        for (std::size_t x = 0; x < p->size(); ++x) {
          auto r = query_fork(d, x, h);
          CHECK(r.lower == r.upper);
        }
    }
  }
}

TEST_CASE("denotation agrees with the strategy oracle") {
  Rng rng(2024);
  std::size_t accepted = 0, rejected = 0, comparisons = 0;
  for (int round = 0; accepted < 150 && round < 2000; ++round) {
    auto p = random_poset(rng, 1 + rng() % 4);
    auto prog = random_program(rng, *p, 3, 4);
    std::vector<Fork> d;
    try {
      d = denote_program(*prog, p);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::NotMonotone);
      ++rejected;
      continue;
    }
    ++accepted;
    oracle::StrategyOracle brute(*p);
    for (const auto& h : test_maps(p, rng, 6))
      for (std::size_t x = 0; x < p->size(); ++x) {
        auto r = query_fork(d, x, h);
        const std::string context = program_to_json(*p, *prog).dump() + " at " + p->name(x) + " h=" + describe_map(h);
        INFO(context);
        CHECK(r.lower == brute.bound(*prog, x, h, oracle::Side::Lower));
        CHECK(r.upper == brute.bound(*prog, x, h, oracle::Side::Upper));
        ++comparisons;
      }
  }
  MESSAGE("accepted " << accepted << ", rejected " << rejected << ", comparisons " << comparisons);
  CHECK(accepted >= 150);
}
