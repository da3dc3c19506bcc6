#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mforge {

/// Subset of a finite carrier, stored as a bitmask over point indices.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe);

  static PointSet full(std::size_t universe);
  static PointSet singleton(std::size_t universe, std::size_t point);
  static PointSet of(std::size_t universe, const std::vector<std::size_t>& points);

  std::size_t universe() const { return n_; }
  bool contains(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void erase(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  bool empty() const;
  std::size_t count() const;
  std::vector<std::size_t> indices() const;
  bool is_subset_of(const PointSet& other) const;
  bool intersects(const PointSet& other) const;

  PointSet& operator|=(const PointSet& other);
  PointSet& operator&=(const PointSet& other);
  PointSet& operator-=(const PointSet& other);
  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend PointSet operator-(PointSet a, const PointSet& b) { return a -= b; }
  PointSet complement() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  // Ordered by universe size, then by the bitmask read as a binary number.
  friend bool operator==(const PointSet& a, const PointSet& b) { return a.n_ == b.n_ && a.words_ == b.words_; }
  friend std::strong_ordering operator<=>(const PointSet& a, const PointSet& b);

  std::size_t hash() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct PointSetHash {
  std::size_t operator()(const PointSet& s) const { return s.hash(); }
};

/// Finite partial order. Points are identified by name and stored in
/// lexicographic name order; indices refer to that order.
class FinitePoset {
 public:
  static FinitePoset build(std::vector<std::string> elements,
                           const std::vector<std::pair<std::string, std::string>>& leq_pairs);

  // leq[i][j] must already be reflexive, transitive and antisymmetric; names
  // must be sorted and distinct.
  static FinitePoset from_order_matrix(std::vector<std::string> names, const std::vector<std::vector<bool>>& leq);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& elements() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;

  bool leq(std::size_t i, std::size_t j) const { return up_[i].contains(j); }
  const PointSet& up_of(std::size_t i) const { return up_[i]; }
  const PointSet& down_of(std::size_t i) const { return down_[i]; }
  // Points in an order compatible with leq (smaller first).
  const std::vector<std::size_t>& linear_extension() const { return linear_; }

  PointSet empty_set() const { return PointSet(size()); }
  PointSet full_set() const { return PointSet::full(size()); }
  PointSet up_closure(const PointSet& s) const;
  PointSet down_closure(const PointSet& s) const;
  bool is_upper(const PointSet& s) const;
  bool is_lower(const PointSet& s) const;
  bool is_convex(const PointSet& s) const;
  PointSet minimal(const PointSet& s) const;
  PointSet maximal(const PointSet& s) const;
  // Cached result of enumerate_upper_sets.
  const std::vector<PointSet>& upper_sets() const;

  PointSet set_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(const PointSet& s) const;
  // Non-reflexive pairs (a, b) with a <= b.
  std::vector<std::pair<std::string, std::string>> strict_pairs() const;

  friend bool operator==(const FinitePoset& a, const FinitePoset& b) {
    return a.names_ == b.names_ && a.up_ == b.up_;
  }

 private:
  void finish();

  std::vector<std::string> names_;
  std::vector<PointSet> up_;
  std::vector<PointSet> down_;
  std::vector<std::size_t> linear_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

using PosetRef = std::shared_ptr<const FinitePoset>;

PosetRef make_poset(std::vector<std::string> elements,
                    const std::vector<std::pair<std::string, std::string>>& leq_pairs);
PosetRef share(FinitePoset poset);
bool same_carrier(const FinitePoset& a, const FinitePoset& b);

enum class Closure { Up, Down };

/// All upper sets (opens of the Alexandrov topology), including the empty set,
/// in canonical bitmask order.
std::vector<PointSet> enumerate_upper_sets(const FinitePoset& poset);
std::vector<PointSet> enumerate_lower_sets(const FinitePoset& poset);
PointSet order_closure(const FinitePoset& poset, const PointSet& s, Closure direction);

/// Pair of an upper set and a lower set.
struct QuasiLens {
  PointSet upper;
  PointSet lower;
  friend bool operator==(const QuasiLens&, const QuasiLens&) = default;
  friend auto operator<=>(const QuasiLens&, const QuasiLens&) = default;
};

/// Checks Q ∩ C nonempty, Q ⊆ ↑(Q ∩ C) and C ⊆ ↓(Q ∩ C). Throws when Q is not
/// a nonempty upper set or C is not a nonempty lower set.
bool validate_quasi_lens(const FinitePoset& poset, const PointSet& upper, const PointSet& lower);

QuasiLens lens_to_quasi_lens(const FinitePoset& poset, const PointSet& lens);
PointSet quasi_lens_to_lens(const FinitePoset& poset, const QuasiLens& ql);

/// Nonempty order-convex subsets in canonical order.
std::vector<PointSet> enumerate_lenses(const FinitePoset& poset);

bool egli_milner_leq(const FinitePoset& poset, const PointSet& lens, const PointSet& other);

/// Map between carriers given by the image index of every source point.
struct PointMap {
  std::vector<std::size_t> image;
  friend bool operator==(const PointMap&, const PointMap&) = default;
};

bool is_monotone(const FinitePoset& source, const FinitePoset& target, const PointMap& map);
std::vector<PointMap> enumerate_monotone_maps(const FinitePoset& source, const FinitePoset& target);
PointMap identity_map(const FinitePoset& poset);
PointMap compose(const PointMap& second, const PointMap& first);

/// One representative per isomorphism class of posets on exactly n points.
/// Points are named "a", "b", ... . Practical up to n = 5.
std::vector<FinitePoset> enumerate_posets(std::size_t n);
FinitePoset antichain(std::size_t n);
FinitePoset chain(std::size_t n);

}  // namespace mforge
