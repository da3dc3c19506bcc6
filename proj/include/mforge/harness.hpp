#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mforge/json_io.hpp"
#include "mforge/mutation.hpp"
#include "mforge/random.hpp"
#include "mforge/weak_laws.hpp"

namespace mforge {

enum class Verdict { Pass, Fail, Skip, Unresolved };

const char* verdict_name(Verdict v);
Verdict parse_verdict(const std::string& name);

/// Outcome of one law suite on one space. A failing report carries the
/// first failing instance as JSON, its seed and a certificate (the
/// separating witness, violating map or error).
struct LawReport {
  std::string law;
  Verdict verdict = Verdict::Pass;
  std::size_t instances = 0;
  // Compact JSON. Always holds the poset; for failures also the instance.
  std::string instance;
  std::string certificate;
  std::string note;
  std::uint64_t seed = 0;
  std::uint64_t micros = 0;

  friend bool operator==(const LawReport&, const LawReport&) = default;
};

Json report_to_json(const LawReport& r);
LawReport report_from_json(const Json& j, const std::string& path = "$");

struct HarnessOptions {
  std::uint64_t seed = 1;
  // Random instances per equation (or per suite) and space.
  std::size_t budget = 50;
  // Spaces with at most this many points also get the exhaustive parts.
  std::size_t exhaustive_points = 3;
  // Brute-force validation of the multiplication-law reductions runs on
  // spaces up to this size.
  std::size_t grid_validation_points = 3;
  // Stop a suite at its first failing instance.
  bool stop_at_first_failure = true;
};

enum class MonadKind { Valuation, Smyth, Hoare, QuasiLens, Lens, Demonic, Angelic, Erratic };

const char* monad_name(MonadKind m);
MonadKind parse_monad(const std::string& name);
const std::vector<MonadKind>& all_monads();

/// Unit laws, associativity and (for hyperspaces) well-formedness of the
/// functor action. Exhaustive parts on small spaces, seeded sampling above.
std::vector<LawReport> check_monad_laws(MonadKind monad, const PosetRef& space, const HarnessOptions& opts);

/// Unit, hyperspace-multiplication, valuation-multiplication and naturality
/// equations of a law, each as its own report.
std::vector<LawReport> check_weak_laws(LawKind law, const PosetRef& space, const HarnessOptions& opts);

/// Membership by defining inequalities against membership in the applied
/// law's generated set, on random (mu, nu) pairs.
LawReport check_cross_characterization(LawKind law, const PosetRef& space, const HarnessOptions& opts);

/// Retraction of the law's image evaluated against the Phi / Psi / Theta
/// transform on every test map.
LawReport check_transform_consistency(LawKind law, const PosetRef& space, const HarnessOptions& opts);

/// r∘s is the identity on previsions and forks; s∘r is canonicalization on
/// generated sets and pairs.
std::vector<LawReport> check_retraction(const PosetRef& space, const HarnessOptions& opts);

/// Walley's condition on forks retracted from generated quasi-lenses, plus a
/// control instance that must be rejected.
std::vector<LawReport> check_walley(const PosetRef& space, const HarnessOptions& opts);

enum class InverseImageLemma { Demonic, Angelic };

/// The section's preimage of a subbasic open decided by an LP on generators,
/// against the maximin over the simplex. For the angelic case the finite
/// grids Δ_n^N are searched for N <= 64; instances where none works are
/// reported as Unresolved in a separate report.
std::vector<LawReport> check_inverse_image(InverseImageLemma lemma, const PosetRef& space, std::size_t forms,
                                           const HarnessOptions& opts);

/// max over the simplex of the min over a generated polytope against the
/// min-max, by two separate LPs.
LawReport check_minimax(const PosetRef& space, std::size_t forms, const HarnessOptions& opts);

/// On an antichain the lens law's two sides both equal the plain convex hull
/// of the choice combinations. Exhaustive over one- and two-atom valuations
/// with atoms of at most `max_atom` points and weight denominators up to
/// `max_den`.
LawReport check_discrete_degeneracy(std::size_t points, std::size_t max_atom, unsigned max_den);

/// Every suite above on one space.
std::vector<LawReport> run_all_suites(const PosetRef& space, const HarnessOptions& opts);

/// Runs suites under the mutation until one fails. The report passes when the
/// mutation was caught; its certificate names the suite that caught it.
LawReport check_mutation(Mutation m, const HarnessOptions& opts);

struct ReportSummary {
  std::size_t pass = 0, fail = 0, skip = 0, unresolved = 0;
};
ReportSummary summarize(const std::vector<LawReport>& reports);

std::string format_report_text(const LawReport& r);

/// Seed for instance `index` of suite `law` under the suite seed.
std::uint64_t instance_seed(std::uint64_t seed, const std::string& law, std::size_t index);

/// All valuations of the kind whose weights have denominators up to
/// max_den (general kind: totals up to 2).
std::vector<Valuation> valuation_grid(const PosetRef& carrier, ValuationKind kind, unsigned max_den);

}  // namespace mforge
