#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "mforge/poset.hpp"

namespace mforge {

enum class HyperKind { Smyth, Hoare, QuasiLens, Lens };

const char* hyper_kind_name(HyperKind kind);
HyperKind parse_hyper_kind(const std::string& name);

/// Element of a hyperspace over a finite poset.
///   Smyth: nonempty upper set in `upper`; `lower` is empty.
///   Hoare: nonempty lower set in `lower`; `upper` is empty.
///   QuasiLens: the pair (upper, lower).
///   Lens: a lens L stored through its closures (↑L, ↓L); L = upper ∩ lower.
struct HyperElement {
  HyperKind kind = HyperKind::Smyth;
  PointSet upper;
  PointSet lower;

  friend bool operator==(const HyperElement&, const HyperElement&) = default;
  friend auto operator<=>(const HyperElement&, const HyperElement&) = default;
};

HyperElement smyth_element(const FinitePoset& poset, PointSet upper);
HyperElement hoare_element(const FinitePoset& poset, PointSet lower);
HyperElement quasi_lens_element(const FinitePoset& poset, PointSet upper, PointSet lower);
HyperElement lens_element(const FinitePoset& poset, const PointSet& lens);

/// Lens members for Lens elements; for quasi-lenses the intersection of the
/// two components.
PointSet lens_members(const HyperElement& e);

/// Throws InvalidArgument / RoleViolation / InvalidQuasiLens / EmptyInput.
void validate_element(const FinitePoset& poset, const HyperElement& e);
bool is_valid_element(const FinitePoset& poset, const HyperElement& e);

/// Specialization order: reverse inclusion for Smyth, inclusion for Hoare,
/// both for quasi-lenses, Egli-Milner for lenses.
bool hyper_leq(const HyperElement& a, const HyperElement& b);

HyperElement hyper_unit(HyperKind kind, const FinitePoset& poset, std::size_t point);
HyperElement hyper_map(const FinitePoset& source, const FinitePoset& target, const PointMap& f, const HyperElement& e);

/// Closure of a nonempty generator set: ↑G, ↓G or (↑G, ↓G).
HyperElement hyper_closure(HyperKind kind, const FinitePoset& poset, const PointSet& generators);

/// All elements in canonical order.
std::vector<HyperElement> enumerate_elements(HyperKind kind, const FinitePoset& poset);

std::string describe_element(const FinitePoset& poset, const HyperElement& e);

/// Multiplication applied to a nested element presented by generators: the
/// nested element is the closure (↑G⁺, ↓G⁻) of elements G over `poset`
/// (for Smyth only G⁺ is used, for Hoare only G⁻, for lenses both lists are
/// the same). Unions over all members reduce to unions over generators
/// because every member lies below (resp. above) some generator.
HyperElement mult_generated(HyperKind kind, const FinitePoset& poset, const std::vector<HyperElement>& up_generators,
                            const std::vector<HyperElement>& down_generators);

/// The hyperspace T(X) materialized as a finite poset under its
/// specialization order. Point i of poset() is element(i).
class HyperSpace {
 public:
  static constexpr std::size_t kMaxElements = 4096;

  HyperSpace(HyperKind kind, PosetRef base);

  HyperKind kind() const { return kind_; }
  const FinitePoset& base() const { return *base_; }
  const PosetRef& base_ref() const { return base_; }
  const PosetRef& poset() const { return poset_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<HyperElement>& elements() const { return elements_; }
  const HyperElement& element(std::size_t i) const { return elements_[i]; }
  std::size_t index_of(const HyperElement& e) const;

  /// Unit as a point map X -> T(X).
  PointMap unit_map() const;
  /// Multiplication T(T(X)) -> T(X) for a nested element over poset().
  HyperElement mult(const HyperElement& nested) const;

 private:
  HyperKind kind_;
  PosetRef base_;
  PosetRef poset_;
  std::vector<HyperElement> elements_;
  std::map<HyperElement, std::size_t> index_;
};

/// Multiplication as a point map from T(T(X)) to T(X).
PointMap mult_map(const HyperSpace& outer, const HyperSpace& inner);

}  // namespace mforge
