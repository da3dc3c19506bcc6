#include "mforge/hyperspace.hpp"

#include <algorithm>

#include "mforge/error.hpp"
#include "mforge/mutation.hpp"

namespace mforge {

const char* hyper_kind_name(HyperKind kind) {
  switch (kind) {
    case HyperKind::Smyth: return "S";
    case HyperKind::Hoare: return "H";
    case HyperKind::QuasiLens: return "QL";
    case HyperKind::Lens: return "Lens";
  }
  return "?";
}

HyperKind parse_hyper_kind(const std::string& name) {
  if (name == "S" || name == "smyth") return HyperKind::Smyth;
  if (name == "H" || name == "hoare") return HyperKind::Hoare;
  if (name == "QL" || name == "quasi-lens") return HyperKind::QuasiLens;
  if (name == "Lens" || name == "lens" || name == "plotkin") return HyperKind::Lens;
  throw Error(ErrorCode::Schema, "unknown hyperspace '" + name + "'");
}

HyperElement smyth_element(const FinitePoset& poset, PointSet upper) {
  HyperElement e{HyperKind::Smyth, std::move(upper), poset.empty_set()};
  validate_element(poset, e);
  return e;
}

HyperElement hoare_element(const FinitePoset& poset, PointSet lower) {
  HyperElement e{HyperKind::Hoare, poset.empty_set(), std::move(lower)};
  validate_element(poset, e);
  return e;
}

HyperElement quasi_lens_element(const FinitePoset& poset, PointSet upper, PointSet lower) {
  HyperElement e{HyperKind::QuasiLens, std::move(upper), std::move(lower)};
  validate_element(poset, e);
  return e;
}

HyperElement lens_element(const FinitePoset& poset, const PointSet& lens) {
  QuasiLens ql = lens_to_quasi_lens(poset, lens);
  return HyperElement{HyperKind::Lens, std::move(ql.upper), std::move(ql.lower)};
}

PointSet lens_members(const HyperElement& e) { return e.upper & e.lower; }

void validate_element(const FinitePoset& poset, const HyperElement& e) {
  if (e.upper.universe() != poset.size() || e.lower.universe() != poset.size())
    throw Error(ErrorCode::CarrierMismatch, "hyperspace element sized for another carrier");
  switch (e.kind) {
    case HyperKind::Smyth:
      if (e.upper.empty()) throw Error(ErrorCode::EmptyInput, "Smyth elements are nonempty");
      if (!poset.is_upper(e.upper)) throw Error(ErrorCode::RoleViolation, "Smyth element is not an upper set");
      if (!e.lower.empty()) throw Error(ErrorCode::InvalidArgument, "Smyth element carries a lower component");
      return;
    case HyperKind::Hoare:
      if (e.lower.empty()) throw Error(ErrorCode::EmptyInput, "Hoare elements are nonempty");
      if (!poset.is_lower(e.lower)) throw Error(ErrorCode::RoleViolation, "Hoare element is not a lower set");
      if (!e.upper.empty()) throw Error(ErrorCode::InvalidArgument, "Hoare element carries an upper component");
      return;
    case HyperKind::QuasiLens:
    case HyperKind::Lens:
      if (!validate_quasi_lens(poset, e.upper, e.lower))
        throw Error(ErrorCode::InvalidQuasiLens, "components fail the quasi-lens conditions");
      return;
  }
}

bool is_valid_element(const FinitePoset& poset, const HyperElement& e) {
  try {
    validate_element(poset, e);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool hyper_leq(const HyperElement& a, const HyperElement& b) {
  if (a.kind != b.kind) throw Error(ErrorCode::TypeMismatch, "comparing elements of different hyperspaces");
  switch (a.kind) {
    case HyperKind::Smyth: return b.upper.is_subset_of(a.upper);
    case HyperKind::Hoare: return a.lower.is_subset_of(b.lower);
    case HyperKind::QuasiLens:
    case HyperKind::Lens: return b.upper.is_subset_of(a.upper) && a.lower.is_subset_of(b.lower);
  }
  return false;
}

HyperElement hyper_closure(HyperKind kind, const FinitePoset& poset, const PointSet& generators) {
  if (generators.empty()) throw Error(ErrorCode::EmptyInput, "closure of an empty generator set");
  switch (kind) {
    case HyperKind::Smyth: return {kind, poset.up_closure(generators), poset.empty_set()};
    case HyperKind::Hoare: return {kind, poset.empty_set(), poset.down_closure(generators)};
    case HyperKind::QuasiLens:
    case HyperKind::Lens: return {kind, poset.up_closure(generators), poset.down_closure(generators)};
  }
  return {};
}

HyperElement hyper_unit(HyperKind kind, const FinitePoset& poset, std::size_t point) {
  if (point >= poset.size()) throw Error(ErrorCode::UnknownPoint, "point index out of range");
  return hyper_closure(kind, poset, PointSet::singleton(poset.size(), point));
}

HyperElement hyper_map(const FinitePoset& source, const FinitePoset& target, const PointMap& f, const HyperElement& e) {
  if (!is_monotone(source, target, f)) throw Error(ErrorCode::NotMonotone, "hyperspace action of a non-monotone map");
  validate_element(source, e);
  auto image = [&](const PointSet& s) {
    PointSet out(target.size());
    s.for_each([&](std::size_t i) { out.insert(f.image[i]); });
    return out;
  };
  switch (e.kind) {
    case HyperKind::Smyth: return {e.kind, target.up_closure(image(e.upper)), target.empty_set()};
    case HyperKind::Hoare: {
      PointSet img = image(e.lower);
      return {e.kind, target.empty_set(), mutated(Mutation::DropClosure) ? img : target.down_closure(img)};
    }
    case HyperKind::QuasiLens:
      return {e.kind, target.up_closure(image(e.upper)), target.down_closure(image(e.lower))};
    case HyperKind::Lens: {
      PointSet img = image(lens_members(e));
      PointSet lens = target.up_closure(img) & target.down_closure(img);
      return {e.kind, target.up_closure(lens), target.down_closure(lens)};
    }
  }
  return {};
}

std::vector<HyperElement> enumerate_elements(HyperKind kind, const FinitePoset& poset) {
  std::vector<HyperElement> out;
  switch (kind) {
    case HyperKind::Smyth:
      for (const auto& u : poset.upper_sets())
        if (!u.empty()) out.push_back({kind, u, poset.empty_set()});
      break;
    case HyperKind::Hoare:
      for (const auto& u : poset.upper_sets())
        if (u != poset.full_set()) out.push_back({kind, poset.empty_set(), u.complement()});
      break;
    case HyperKind::QuasiLens:
    case HyperKind::Lens:
      // On a finite poset every quasi-lens is (↑L, ↓L) for exactly one lens L.
      for (const auto& l : enumerate_lenses(poset)) {
        QuasiLens ql = lens_to_quasi_lens(poset, l);
        out.push_back({kind, std::move(ql.upper), std::move(ql.lower)});
      }
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string set_text(const FinitePoset& poset, const PointSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](std::size_t i) {
    if (!first) out += ",";
    first = false;
    out += poset.name(i);
  });
  return out + "}";
}

}  // namespace

std::string describe_element(const FinitePoset& poset, const HyperElement& e) {
  switch (e.kind) {
    case HyperKind::Smyth: return set_text(poset, e.upper);
    case HyperKind::Hoare: return set_text(poset, e.lower);
    case HyperKind::QuasiLens: return "(" + set_text(poset, e.upper) + "," + set_text(poset, e.lower) + ")";
    case HyperKind::Lens: return "<" + set_text(poset, lens_members(e)) + ">";
  }
  return "";
}

HyperElement mult_generated(HyperKind kind, const FinitePoset& poset, const std::vector<HyperElement>& up_generators,
                            const std::vector<HyperElement>& down_generators) {
  PointSet up(poset.size()), down(poset.size());
  for (const auto& g : up_generators) {
    if (g.kind != kind) throw Error(ErrorCode::TypeMismatch, "generator of another hyperspace");
    up |= kind == HyperKind::Lens ? lens_members(g) : g.upper;
  }
  for (const auto& g : down_generators) {
    if (g.kind != kind) throw Error(ErrorCode::TypeMismatch, "generator of another hyperspace");
    down |= kind == HyperKind::Lens ? lens_members(g) : g.lower;
  }
  switch (kind) {
    case HyperKind::Smyth:
      if (up.empty()) throw Error(ErrorCode::EmptyInput, "multiplication of an empty family");
      return {kind, up, poset.empty_set()};
    case HyperKind::Hoare:
      if (down.empty()) throw Error(ErrorCode::EmptyInput, "multiplication of an empty family");
      return {kind, poset.empty_set(), poset.down_closure(down)};
    case HyperKind::QuasiLens:
      if (up.empty() || down.empty()) throw Error(ErrorCode::EmptyInput, "multiplication of an empty family");
      return {kind, up, poset.down_closure(down)};
    case HyperKind::Lens: {
      PointSet all = up | down;
      if (all.empty()) throw Error(ErrorCode::EmptyInput, "multiplication of an empty family");
      return {kind, poset.up_closure(all), poset.down_closure(all)};
    }
  }
  return {};
}

HyperSpace::HyperSpace(HyperKind kind, PosetRef base) : kind_(kind), base_(std::move(base)) {
  auto elems = enumerate_elements(kind_, *base_);
  if (elems.size() > kMaxElements)
    throw Error(ErrorCode::Unsupported, "hyperspace has " + std::to_string(elems.size()) + " elements");
  std::vector<std::pair<std::string, HyperElement>> named;
  named.reserve(elems.size());
  for (auto& e : elems) named.emplace_back(describe_element(*base_, e), std::move(e));
  std::sort(named.begin(), named.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> names;
  for (auto& [name, e] : named) {
    names.push_back(name);
    elements_.push_back(std::move(e));
  }
  const std::size_t n = elements_.size();
  for (std::size_t i = 0; i < n; ++i) index_.emplace(elements_[i], i);
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) leq[i][j] = hyper_leq(elements_[i], elements_[j]);
  poset_ = share(FinitePoset::from_order_matrix(std::move(names), leq));
}

std::size_t HyperSpace::index_of(const HyperElement& e) const {
  auto it = index_.find(e);
  if (it != index_.end()) return it->second;
  throw Error(ErrorCode::InvalidArgument, "not an element of this hyperspace: " + describe_element(*base_, e));
}

PointMap HyperSpace::unit_map() const {
  PointMap f;
  for (std::size_t x = 0; x < base_->size(); ++x) f.image.push_back(index_of(hyper_unit(kind_, *base_, x)));
  return f;
}

HyperElement HyperSpace::mult(const HyperElement& nested) const {
  validate_element(*poset_, nested);
  if (nested.kind != kind_) throw Error(ErrorCode::TypeMismatch, "nested element of another hyperspace");
  std::vector<HyperElement> ups, downs;
  if (kind_ == HyperKind::Lens) {
    lens_members(nested).for_each([&](std::size_t i) { ups.push_back(elements_[i]); });
  } else {
    nested.upper.for_each([&](std::size_t i) { ups.push_back(elements_[i]); });
    nested.lower.for_each([&](std::size_t i) { downs.push_back(elements_[i]); });
  }
  return mult_generated(kind_, *base_, ups, downs);
}

PointMap mult_map(const HyperSpace& outer, const HyperSpace& inner) {
  if (outer.kind() != inner.kind() || !same_carrier(outer.base(), *inner.poset()))
    throw Error(ErrorCode::CarrierMismatch, "outer hyperspace is not built over the inner one");
  PointMap f;
  for (const auto& e : outer.elements()) f.image.push_back(inner.index_of(inner.mult(e)));
  return f;
}

}  // namespace mforge
