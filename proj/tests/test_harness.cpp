#include <iostream>

#include "doctest.h"
#include "fixtures.hpp"
#include "mforge/harness.hpp"

using namespace mforge;

namespace {

std::string failures(const std::vector<LawReport>& reports) {
  std::string out;
  for (const auto& r : reports)
    if (r.verdict == Verdict::Fail || r.verdict == Verdict::Unresolved) out += format_report_text(r) + "\n";
  return out;
}

HarnessOptions quick(std::size_t budget = 6) {
  HarnessOptions o;
  o.budget = budget;
  return o;
}

}  // namespace

TEST_CASE("report json round trip") {
  LawReport r;
  r.law = "monad/QL/associativity";
  r.verdict = Verdict::Fail;
  r.instances = 17;
  r.instance = R"({"poset":{"elements":["a"],"leq":[]},"mu":{"kind":"prob"}})";
  r.certificate = "up side differs";
  r.note = "sampled";
  r.seed = 0xfeedfacecafebeefULL;
  r.micros = 1234;
  CHECK(report_from_json(report_to_json(r)) == r);
  CHECK(report_from_json(parse_json_text(report_to_json(r).dump())) == r);

  LawReport empty;
  empty.law = "x";
  CHECK(report_from_json(report_to_json(empty)) == empty);

  Json bad = report_to_json(r);
  bad["schema"] = "other/2";
  CHECK_THROWS_AS(report_from_json(bad), Error);
  bad = report_to_json(r);
  bad.erase("verdict");
  CHECK_THROWS_AS(report_from_json(bad), Error);
}

TEST_CASE("verdict and monad names") {
  for (auto v : {Verdict::Pass, Verdict::Fail, Verdict::Skip, Verdict::Unresolved})
    CHECK(parse_verdict(verdict_name(v)) == v);
  for (auto m : all_monads()) CHECK(parse_monad(monad_name(m)) == m);
  CHECK_THROWS_AS(parse_monad("Giry"), Error);
}

TEST_CASE("instance seeds differ by law and index") {
  CHECK(instance_seed(1, "a", 0) == instance_seed(1, "a", 0));
  CHECK(instance_seed(1, "a", 0) != instance_seed(1, "a", 1));
  CHECK(instance_seed(1, "a", 0) != instance_seed(1, "b", 0));
  CHECK(instance_seed(1, "a", 0) != instance_seed(2, "a", 0));
}

TEST_CASE("valuation grid") {
  auto p = fixtures::chain2();
  // Probability weights on two points with denominators up to 2: (1,0) (0,1) (1/2,1/2).
  CHECK(valuation_grid(p, ValuationKind::Prob, 2).size() == 3);
  // Subprobability adds totals 0 and 1/2: (0,0) (1/2,0) (0,1/2).
  CHECK(valuation_grid(p, ValuationKind::Sub, 2).size() == 6);
  for (const auto& nu : valuation_grid(p, ValuationKind::General, 3)) CHECK(nu.total() <= 2);
}

TEST_CASE("all suites pass on small spaces") {
  for (const auto& p : {fixtures::flat_bool(), fixtures::discrete2(), fixtures::chain2()}) {
    auto reports = run_all_suites(p, quick());
    auto s = summarize(reports);
    INFO(failures(reports));
    CHECK(s.fail == 0);
    CHECK(s.unresolved == 0);
    CHECK(s.pass > 40);
  }
}

TEST_CASE("monad laws on the empty space") {
  auto empty = share(enumerate_posets(0).at(0));
  for (auto m : all_monads()) {
    auto reports = check_monad_laws(m, empty, quick());
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == Verdict::Pass);
    CHECK(reports[0].instances == (m == MonadKind::Valuation ? 2u : 0u));
  }
}

TEST_CASE("suites are deterministic in the seed") {
  auto p = fixtures::flat_bool();
  auto a = check_cross_characterization(LawKind::Natural, p, quick(10));
  auto b = check_cross_characterization(LawKind::Natural, p, quick(10));
  a.micros = b.micros = 0;
  CHECK(a == b);
  auto w1 = check_weak_laws(LawKind::Sharp, p, quick(4));
  auto w2 = check_weak_laws(LawKind::Sharp, p, quick(4));
  REQUIRE(w1.size() == w2.size());
  for (std::size_t i = 0; i < w1.size(); ++i) {
    w1[i].micros = w2[i].micros = 0;
    CHECK(w1[i] == w2[i]);
  }
}

TEST_CASE("a failing suite reports the first instance") {
  ScopedMutation guard(Mutation::WrongKindTable);
  auto reports = check_monad_laws(MonadKind::Valuation, fixtures::flat_bool(), quick(30));
  bool failed = false;
  for (const auto& r : reports)
    if (r.verdict == Verdict::Fail) {
      failed = true;
      auto inst = parse_json_text(r.instance);
      CHECK(inst.contains("poset"));
      CHECK(inst.size() > 1);
      CHECK_FALSE(r.certificate.empty());
    }
  CHECK(failed);
}

TEST_CASE("walley control is rejected and skipped on a point") {
  auto reports = check_walley(fixtures::flat_bool(), quick());
  REQUIRE(reports.size() == 2);
  CHECK(reports[1].verdict == Verdict::Pass);
  auto single = check_walley(share(chain(1)), quick());
  CHECK(single[1].verdict == Verdict::Skip);
}

TEST_CASE("lens equations are not a standalone suite") {
  CHECK_THROWS_AS(check_weak_laws(LawKind::Lens, fixtures::chain2(), quick()), Error);
}

TEST_CASE("discrete degeneracy") {
  auto r = check_discrete_degeneracy(3, 3, 3);
  INFO(format_report_text(r));
  CHECK(r.verdict == Verdict::Pass);
  // 7 nonempty atoms: 7 single-atom valuations, 21 pairs times the splits 1/3, 1/2, 2/3.
  CHECK(r.instances == 7 + 21 * 3);
}

TEST_CASE("inverse image lemmas on two maps") {
  for (const auto& p : {fixtures::flat_bool(), fixtures::chain2()}) {
    for (auto lemma : {InverseImageLemma::Demonic, InverseImageLemma::Angelic}) {
      auto reports = check_inverse_image(lemma, p, 2, quick(30));
      INFO(failures(reports));
      for (const auto& r : reports) CHECK(r.verdict == Verdict::Pass);
    }
    CHECK(check_minimax(p, 2, quick(30)).verdict == Verdict::Pass);
  }
}

TEST_CASE("every mutation is caught") {
  for (auto m : all_mutations()) {
    auto r = check_mutation(m, quick(20));
    const std::string context = std::string(mutation_name(m)) + ": " + format_report_text(r);
    INFO(context);
    CHECK(r.verdict == Verdict::Pass);
    std::cout << mutation_name(m) << " " << r.certificate << " (" << r.micros / 1000 << " ms)\n";
  }
}
