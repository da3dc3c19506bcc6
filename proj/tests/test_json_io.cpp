#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "mforge/json_io.hpp"
#include "mforge/random.hpp"

using namespace mforge;
using fixtures::q;
using fixtures::val;

namespace {

const char* kFlatBool = R"({"schema":"monad-forge/1","elements":["b","t","f"],"leq":[["b","t"],["b","f"]]})";

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("flat booleans fixture") {
  auto p = poset_from_json(parse_json_text(kFlatBool));
  CHECK(p->size() == 3);
  // Opens: {}, {t}, {f}, {t,f}, {b,t,f}.
  CHECK(p->upper_sets().size() == 5);
  CHECK(p->leq(p->index_of("b"), p->index_of("t")));
  CHECK_FALSE(p->leq(p->index_of("t"), p->index_of("f")));
  auto again = poset_from_json(poset_to_json(*p));
  CHECK(same_carrier(*p, *again));
}

TEST_CASE("parse errors carry a position") {
  const std::string msg = message_of([] { parse_json_text("{\n  \"elements\": [\"a\",\n  ]\n", "poset.json"); });
  CHECK(msg.find("poset.json:3:3:") != std::string::npos);
  CHECK(code_of([] { parse_json_text("[1,"); }) == ErrorCode::Parse);
}

TEST_CASE("poset errors") {
  CHECK(code_of([] {
          poset_from_json(parse_json_text(R"({"elements":["a","b"],"leq":[["a","b"],["b","a"]]})"));
        }) == ErrorCode::Cycle);
  CHECK(code_of([] { poset_from_json(parse_json_text(R"({"elements":["a"],"leq":[["a","z"]]})")); }) ==
        ErrorCode::UnknownPoint);
  CHECK(code_of([] { poset_from_json(parse_json_text(R"({"elements":"a"})")); }) == ErrorCode::Schema);
  CHECK(code_of([] { poset_from_json(parse_json_text(R"({"schema":"other/1","elements":[]})")); }) ==
        ErrorCode::Schema);
}

TEST_CASE("valuation round trip and kind errors") {
  auto p = fixtures::flat_bool();
  auto nu = val(p, {{"t", "1/2"}, {"f", "1/3"}}, ValuationKind::Sub);
  CHECK(valuation_from_json(valuation_to_json(nu), p) == nu);

  auto j = parse_json_text(R"({"kind":"prob","weights":{"t":"5/8","f":"1/2"}})");
  const std::string msg = message_of([&] { valuation_from_json(j, p); });
  CHECK(msg.find("9/8") != std::string::npos);
  CHECK(code_of([&] { valuation_from_json(j, p); }) == ErrorCode::KindViolation);

  auto unknown = parse_json_text(R"({"weights":{"z":"1"}})");
  CHECK(code_of([&] { valuation_from_json(unknown, p); }) == ErrorCode::UnknownPoint);
  auto negative = parse_json_text(R"({"kind":"general","weights":{"t":"-1"}})");
  CHECK(code_of([&] { valuation_from_json(negative, p); }) == ErrorCode::NegativeWeight);
  // Integers and strings both read as rationals; kind defaults to prob.
  auto ints = parse_json_text(R"({"weights":{"t":1}})");
  CHECK(valuation_from_json(ints, p) == val(p, {{"t", "1"}}));
}

TEST_CASE("maps") {
  auto p = fixtures::flat_bool();
  auto h = fixtures::fn(p, {{"t", "1"}, {"f", "1/2"}});
  CHECK(monotone_map_from_json(monotone_map_to_json(h), p) == h);
  CHECK(monotone_map_from_json(parse_json_text(R"({"t":"1","f":"1/2"})"), p) == h);
  CHECK(code_of([&] { monotone_map_from_json(parse_json_text(R"({"b":"1"})"), p); }) == ErrorCode::NotMonotone);

  auto two = fixtures::chain2();
  auto f = point_map_from_json(parse_json_text(R"({"b":"0","t":"1","f":"1"})"), *p, *two);
  auto back = point_map_to_json(*p, *two, f);
  CHECK(back["b"] == "0");
  CHECK(back["t"] == "1");
  CHECK(back["f"] == "1");
  const std::string msg =
      message_of([&] { point_map_from_json(parse_json_text(R"({"b":"1","t":"0","f":"1"})"), *p, *two); });
  CHECK(msg.find("b <= t") != std::string::npos);
}

TEST_CASE("elements close their input") {
  auto p = fixtures::flat_bool();
  auto smyth = element_from_json(parse_json_text(R"({"upper":["b"]})"), *p);
  CHECK(smyth.upper.count() == 3);
  auto hoare = element_from_json(parse_json_text(R"({"lower":["t"]})"), *p);
  CHECK(hoare.lower.count() == 2);
  auto lens = element_from_json(parse_json_text(R"({"lens":["t"]})"), *p);
  CHECK(element_from_json(element_to_json(*p, lens), *p) == lens);
  auto ql = element_from_json(parse_json_text(R"({"Q":["b"],"C":["t"]})"), *p);
  CHECK(ql.kind == HyperKind::QuasiLens);
  CHECK(ql.upper.count() == 3);
  CHECK(ql.lower.count() == 2);
  CHECK(code_of([&] { element_from_json(parse_json_text(R"({"Q":["t"],"C":["f"]})"), *p); }) ==
        ErrorCode::InvalidQuasiLens);
  CHECK(element_from_json(element_to_json(*p, ql), *p) == ql);
  CHECK(code_of([&] { element_from_json(parse_json_text(R"({"upper":[]})"), *p); }) != ErrorCode::Schema);
  CHECK(code_of([&] { element_from_json(parse_json_text(R"({"middle":["t"]})"), *p); }) == ErrorCode::Schema);
}

TEST_CASE("random round trips") {
  Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    auto p = random_poset(rng, 1 + i % 5);
    auto nu = random_valuation(rng, p, ValuationKind::Sub, 4);
    CHECK(valuation_from_json(parse_json_text(valuation_to_json(nu).dump()), p) == nu);
    auto f = random_prevision(rng, PrevisionRole::Sublinear, p, ValuationKind::Prob, 3, 3);
    CHECK(prevision_equal(prevision_from_json(prevision_to_json(f), p), f));
    auto fork = random_fork(rng, p, ValuationKind::Prob, 2, 3);
    CHECK(fork_equal(fork_from_json(fork_to_json(fork), p), fork));
    auto set = ConvexSet(Orientation::Down, random_generators(rng, p, ValuationKind::General, 3, 3));
    CHECK(convex_set_from_json(convex_set_to_json(set), p).generators() == set.generators());
    for (auto kind : {HyperKind::Smyth, HyperKind::Hoare, HyperKind::QuasiLens, HyperKind::Lens}) {
      auto mu = random_hyper_valuation(rng, kind, *p, ValuationKind::Prob, 2, 3);
      CHECK(hyper_valuation_from_json(hyper_valuation_to_json(*p, mu), *p) == mu);
    }
  }
}

TEST_CASE("error paths name the offending field") {
  auto p = fixtures::flat_bool();
  auto j = parse_json_text(R"({"kind":"prob","atoms":[{"weight":"1","upper":["t"]},{"weight":"x","upper":["t"]}]})");
  const std::string msg = message_of([&] { hyper_valuation_from_json(j, *p); });
  CHECK(msg.find("atoms[1]") != std::string::npos);
}

TEST_CASE("reading files") {
  const auto path = std::filesystem::temp_directory_path() / "mforge_json_io_test.json";
  {
    std::ofstream out(path);
    out << kFlatBool;
  }
  CHECK(load_json(path.string())["elements"].size() == 3);
  std::filesystem::remove(path);
  CHECK(code_of([&] { load_json(path.string()); }) == ErrorCode::InvalidArgument);
}
