#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mforge/convex.hpp"

namespace mforge {

/// Superlinear previsions are minima of finitely many linear ones (demonic),
/// sublinear previsions maxima (angelic).
enum class PrevisionRole { Superlinear, Sublinear };

const char* role_name(PrevisionRole role);
PrevisionRole parse_role(const std::string& name);

class Prevision {
 public:
  Prevision() = default;
  Prevision(PrevisionRole role, std::vector<Valuation> generators);

  static Prevision unit(PrevisionRole role, const PosetRef& carrier, std::size_t point,
                        ValuationKind kind = ValuationKind::Prob);

  PrevisionRole role() const { return role_; }
  const std::vector<Valuation>& generators() const { return generators_; }
  const FinitePoset& carrier() const { return generators_.front().carrier(); }
  const PosetRef& carrier_ref() const { return generators_.front().carrier_ref(); }
  ValuationKind kind() const { return generators_.front().kind(); }

  Rational operator()(const MonotoneMap& h) const;

  friend bool operator==(const Prevision& a, const Prevision& b) {
    return a.role_ == b.role_ && a.generators_ == b.generators_;
  }
  friend bool operator<(const Prevision& a, const Prevision& b) {
    if (a.role_ != b.role_) return a.role_ < b.role_;
    return a.generators_ < b.generators_;
  }

 private:
  PrevisionRole role_ = PrevisionRole::Superlinear;
  std::vector<Valuation> generators_;
};

Rational eval_prevision(const Prevision& f, const MonotoneMap& h);

struct Fork {
  Prevision lower;  // superlinear
  Prevision upper;  // sublinear

  friend bool operator==(const Fork& a, const Fork& b) { return a.lower == b.lower && a.upper == b.upper; }
  friend bool operator<(const Fork& a, const Fork& b) {
    if (!(a.lower == b.lower)) return a.lower < b.lower;
    return a.upper < b.upper;
  }
};

Fork make_fork(Prevision lower, Prevision upper);
Fork fork_unit(const PosetRef& carrier, std::size_t point, ValuationKind kind = ValuationKind::Prob);

/// Reading a generated set as the functional it supports: upsets give
/// superlinear previsions, downsets sublinear ones.
Prevision retract_r(const ConvexSet& set);
Fork retract_r(const GenQuasiLens& ql);

/// Canonical generated set whose support function is the prevision.
ConvexSet section_s(const Prevision& f);
GenQuasiLens section_s(const Fork& f);

/// Functional equality, decided on canonical generator sets.
bool prevision_equal(const Prevision& a, const Prevision& b);
bool fork_equal(const Fork& a, const Fork& b);

/// a <= b pointwise on all monotone maps.
bool prevision_leq(const Prevision& a, const Prevision& b);
/// A monotone map on which a exceeds b, or nothing when a <= b.
std::optional<MonotoneMap> leq_counterexample(const Prevision& a, const Prevision& b);

/// Kleisli extension along a family with one prevision per point of the
/// source carrier. Generators of the result are Σ_x ν(x)·ρ_{x,c(x)} over
/// generators ν of `f` and choice functions c on the support of ν.
Prevision kleisli_extend(const std::vector<Prevision>& family, const Prevision& f);
Fork kleisli_extend(const std::vector<Fork>& family, const Fork& f);

/// "(b:0, t:1, f:1/2)".
std::string describe_map(const MonotoneMap& h);

/// Throws NotMonotone unless x <= y implies family[x] <= family[y].
void require_monotone_family(const FinitePoset& source, const std::vector<Prevision>& family);

/// Convex mix Σ a_i F_i of previsions with the same role. The weights form a
/// valuation whose kind combines with the previsions' kind.
Prevision algebra_prevision(const SimpleValuation<Prevision>& xi);
Fork algebra_fork(const SimpleValuation<Fork>& xi);
Rational algebra_eval(const SimpleValuation<Prevision>& xi, const MonotoneMap& h);

/// Monotone maps used for sampled functional checks: the exhaustive
/// {0..3} grid when the carrier has at most `exhaustive_limit` points, else
/// `samples` random maps.
std::vector<MonotoneMap> test_maps(const PosetRef& carrier, std::mt19937_64& rng, std::size_t samples,
                                   std::size_t exhaustive_limit = 4);

struct WalleyResult {
  bool pass = true;
  std::optional<MonotoneMap> h;
  std::optional<MonotoneMap> h2;
  // "left" when F⁻(h+h') > F⁻(h)+F⁺(h'), "right" when F⁻(h)+F⁺(h') > F⁺(h+h').
  std::string side;
  std::size_t pairs_checked = 0;
};

WalleyResult walley_check(const Fork& fork, const std::vector<MonotoneMap>& maps);

/// Superlinearity (or sublinearity) and homogeneity on the given maps.
bool check_prevision_shape(const Prevision& f, const std::vector<MonotoneMap>& maps);

/// Quasi-lens conditions for a pair of generated sets: the intersection is
/// nonempty, every up-generator lies above and every down-generator below a
/// point of the intersection. Decided by one LP per generator.
bool is_quasi_lens_pair(const GenQuasiLens& ql);

}  // namespace mforge
