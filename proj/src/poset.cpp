#include "mforge/poset.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "mforge/error.hpp"

namespace mforge {

// ---------------------------------------------------------------- PointSet

PointSet::PointSet(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}

PointSet PointSet::full(std::size_t universe) {
  PointSet s(universe);
  for (std::size_t i = 0; i < universe; ++i) s.insert(i);
  return s;
}

PointSet PointSet::singleton(std::size_t universe, std::size_t point) {
  PointSet s(universe);
  s.insert(point);
  return s;
}

PointSet PointSet::of(std::size_t universe, const std::vector<std::size_t>& points) {
  PointSet s(universe);
  for (auto p : points) {
    if (p >= universe) throw Error(ErrorCode::UnknownPoint, "point index out of range");
    s.insert(p);
  }
  return s;
}

bool PointSet::empty() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

std::size_t PointSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

std::vector<std::size_t> PointSet::indices() const {
  std::vector<std::size_t> out;
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

bool PointSet::is_subset_of(const PointSet& other) const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w] & ~other.words_[w]) return false;
  return true;
}

bool PointSet::intersects(const PointSet& other) const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w] & other.words_[w]) return true;
  return false;
}

PointSet& PointSet::operator|=(const PointSet& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

PointSet& PointSet::operator&=(const PointSet& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

PointSet& PointSet::operator-=(const PointSet& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
  return *this;
}

PointSet PointSet::complement() const { return full(n_) - *this; }

std::strong_ordering operator<=>(const PointSet& a, const PointSet& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  for (std::size_t w = a.words_.size(); w-- > 0;)
    if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::size_t PointSet::hash() const {
  std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
  for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
  return h;
}

// ------------------------------------------------------------- FinitePoset

FinitePoset FinitePoset::build(std::vector<std::string> elements,
                               const std::vector<std::pair<std::string, std::string>>& leq_pairs) {
  std::sort(elements.begin(), elements.end());
  for (std::size_t i = 1; i < elements.size(); ++i)
    if (elements[i] == elements[i - 1]) throw Error(ErrorCode::DuplicateElement, "'" + elements[i] + "'");
  const std::size_t n = elements.size();
  auto lookup = [&](const std::string& s) {
    auto it = std::lower_bound(elements.begin(), elements.end(), s);
    if (it == elements.end() || *it != s) throw Error(ErrorCode::UnknownPoint, "'" + s + "' in order relation");
    return static_cast<std::size_t>(it - elements.begin());
  };
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [a, b] : leq_pairs) leq[lookup(a)][lookup(b)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k][j]) leq[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq[i][j] && leq[j][i])
        throw Error(ErrorCode::Cycle, "'" + elements[i] + "' and '" + elements[j] + "' are mutually below");
  return from_order_matrix(std::move(elements), leq);
}

FinitePoset FinitePoset::from_order_matrix(std::vector<std::string> names, const std::vector<std::vector<bool>>& leq) {
  FinitePoset p;
  const std::size_t n = names.size();
  p.names_ = std::move(names);
  p.up_.assign(n, PointSet(n));
  p.down_.assign(n, PointSet(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (leq[i][j]) {
        p.up_[i].insert(j);
        p.down_[j].insert(i);
      }
  p.finish();
  return p;
}

struct FinitePoset::Cache {
  std::once_flag once;
  std::vector<PointSet> upper_sets;
};

const std::vector<PointSet>& FinitePoset::upper_sets() const {
  std::call_once(cache_->once, [this] { cache_->upper_sets = enumerate_upper_sets(*this); });
  return cache_->upper_sets;
}

void FinitePoset::finish() {
  cache_ = std::make_shared<Cache>();
  linear_.resize(size());
  std::iota(linear_.begin(), linear_.end(), 0);
  std::stable_sort(linear_.begin(), linear_.end(),
                   [&](std::size_t a, std::size_t b) { return down_[a].count() < down_[b].count(); });
}

std::optional<std::size_t> FinitePoset::find(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t FinitePoset::index_of(const std::string& name) const {
  auto i = find(name);
  if (!i) throw Error(ErrorCode::UnknownPoint, "'" + name + "'");
  return *i;
}

PointSet FinitePoset::up_closure(const PointSet& s) const {
  PointSet out(size());
  s.for_each([&](std::size_t i) { out |= up_[i]; });
  return out;
}

PointSet FinitePoset::down_closure(const PointSet& s) const {
  PointSet out(size());
  s.for_each([&](std::size_t i) { out |= down_[i]; });
  return out;
}

bool FinitePoset::is_upper(const PointSet& s) const {
  bool ok = true;
  s.for_each([&](std::size_t i) { ok = ok && up_[i].is_subset_of(s); });
  return ok;
}

bool FinitePoset::is_lower(const PointSet& s) const {
  bool ok = true;
  s.for_each([&](std::size_t i) { ok = ok && down_[i].is_subset_of(s); });
  return ok;
}

bool FinitePoset::is_convex(const PointSet& s) const { return (up_closure(s) & down_closure(s)) == s; }

PointSet FinitePoset::minimal(const PointSet& s) const {
  PointSet out(size());
  s.for_each([&](std::size_t i) {
    if ((down_[i] & s).count() == 1) out.insert(i);
  });
  return out;
}

PointSet FinitePoset::maximal(const PointSet& s) const {
  PointSet out(size());
  s.for_each([&](std::size_t i) {
    if ((up_[i] & s).count() == 1) out.insert(i);
  });
  return out;
}

PointSet FinitePoset::set_of(const std::vector<std::string>& names) const {
  PointSet s(size());
  for (const auto& n : names) s.insert(index_of(n));
  return s;
}

std::vector<std::string> FinitePoset::names_of(const PointSet& s) const {
  std::vector<std::string> out;
  s.for_each([&](std::size_t i) { out.push_back(names_[i]); });
  return out;
}

std::vector<std::pair<std::string, std::string>> FinitePoset::strict_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < size(); ++i)
    up_[i].for_each([&](std::size_t j) {
      if (j != i) out.emplace_back(names_[i], names_[j]);
    });
  return out;
}

PosetRef make_poset(std::vector<std::string> elements,
                    const std::vector<std::pair<std::string, std::string>>& leq_pairs) {
  return std::make_shared<const FinitePoset>(FinitePoset::build(std::move(elements), leq_pairs));
}

PosetRef share(FinitePoset poset) { return std::make_shared<const FinitePoset>(std::move(poset)); }

bool same_carrier(const FinitePoset& a, const FinitePoset& b) { return &a == &b || a == b; }

// ------------------------------------------------------------- enumeration

namespace {

void collect_upper_sets(const FinitePoset& p, const std::vector<std::size_t>& order, std::size_t k, PointSet& current,
                        std::vector<PointSet>& out) {
  if (k == order.size()) {
    out.push_back(current);
    return;
  }
  std::size_t x = order[k];
  collect_upper_sets(p, order, k + 1, current, out);
  PointSet strictly_above = p.up_of(x);
  strictly_above.erase(x);
  if (strictly_above.is_subset_of(current)) {
    current.insert(x);
    collect_upper_sets(p, order, k + 1, current, out);
    current.erase(x);
  }
}

}  // namespace

std::vector<PointSet> enumerate_upper_sets(const FinitePoset& poset) {
  std::vector<std::size_t> order(poset.linear_extension().rbegin(), poset.linear_extension().rend());
  std::vector<PointSet> out;
  PointSet current(poset.size());
  collect_upper_sets(poset, order, 0, current, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointSet> enumerate_lower_sets(const FinitePoset& poset) {
  auto uppers = enumerate_upper_sets(poset);
  std::vector<PointSet> out;
  out.reserve(uppers.size());
  for (const auto& u : uppers) out.push_back(u.complement());
  std::sort(out.begin(), out.end());
  return out;
}

PointSet order_closure(const FinitePoset& poset, const PointSet& s, Closure direction) {
  return direction == Closure::Up ? poset.up_closure(s) : poset.down_closure(s);
}

bool validate_quasi_lens(const FinitePoset& poset, const PointSet& upper, const PointSet& lower) {
  if (upper.universe() != poset.size() || lower.universe() != poset.size())
    throw Error(ErrorCode::CarrierMismatch, "quasi-lens components sized for another carrier");
  if (upper.empty() || lower.empty()) throw Error(ErrorCode::EmptyInput, "quasi-lens components must be nonempty");
  if (!poset.is_upper(upper)) throw Error(ErrorCode::RoleViolation, "first component is not an upper set");
  if (!poset.is_lower(lower)) throw Error(ErrorCode::RoleViolation, "second component is not a lower set");
  PointSet core = upper & lower;
  if (core.empty()) return false;
  return upper.is_subset_of(poset.up_closure(core)) && lower.is_subset_of(poset.down_closure(core));
}

QuasiLens lens_to_quasi_lens(const FinitePoset& poset, const PointSet& lens) {
  if (lens.empty()) throw Error(ErrorCode::EmptyInput, "lens must be nonempty");
  if (!poset.is_convex(lens)) throw Error(ErrorCode::RoleViolation, "lens is not order-convex");
  return {poset.up_closure(lens), poset.down_closure(lens)};
}

PointSet quasi_lens_to_lens(const FinitePoset& poset, const QuasiLens& ql) {
  if (!validate_quasi_lens(poset, ql.upper, ql.lower)) throw Error(ErrorCode::InvalidQuasiLens, "not a quasi-lens");
  return ql.upper & ql.lower;
}

std::vector<PointSet> enumerate_lenses(const FinitePoset& poset) {
  auto uppers = enumerate_upper_sets(poset);
  auto lowers = enumerate_lower_sets(poset);
  std::set<PointSet> found;
  for (const auto& u : uppers)
    for (const auto& d : lowers) {
      PointSet l = u & d;
      if (!l.empty()) found.insert(l);
    }
  return {found.begin(), found.end()};
}

bool egli_milner_leq(const FinitePoset& poset, const PointSet& lens, const PointSet& other) {
  return poset.up_closure(other).is_subset_of(poset.up_closure(lens)) &&
         poset.down_closure(lens).is_subset_of(poset.down_closure(other));
}

bool is_monotone(const FinitePoset& source, const FinitePoset& target, const PointMap& map) {
  if (map.image.size() != source.size()) return false;
  for (auto y : map.image)
    if (y >= target.size()) return false;
  for (std::size_t i = 0; i < source.size(); ++i) {
    bool ok = true;
    source.up_of(i).for_each([&](std::size_t j) { ok = ok && target.leq(map.image[i], map.image[j]); });
    if (!ok) return false;
  }
  return true;
}

namespace {

void collect_maps(const FinitePoset& s, const FinitePoset& t, std::size_t k, PointMap& current,
                  std::vector<PointMap>& out) {
  const auto& order = s.linear_extension();
  if (k == order.size()) {
    out.push_back(current);
    return;
  }
  std::size_t x = order[k];
  PointSet allowed = t.full_set();
  s.down_of(x).for_each([&](std::size_t z) {
    if (z != x) allowed &= t.up_of(current.image[z]);
  });
  allowed.for_each([&](std::size_t y) {
    current.image[x] = y;
    collect_maps(s, t, k + 1, current, out);
  });
}

}  // namespace

std::vector<PointMap> enumerate_monotone_maps(const FinitePoset& source, const FinitePoset& target) {
  std::vector<PointMap> out;
  PointMap current{std::vector<std::size_t>(source.size(), 0)};
  collect_maps(source, target, 0, current, out);
  return out;
}

PointMap identity_map(const FinitePoset& poset) {
  PointMap m{std::vector<std::size_t>(poset.size())};
  std::iota(m.image.begin(), m.image.end(), 0);
  return m;
}

PointMap compose(const PointMap& second, const PointMap& first) {
  PointMap m{std::vector<std::size_t>(first.image.size())};
  for (std::size_t i = 0; i < first.image.size(); ++i) m.image[i] = second.image[first.image[i]];
  return m;
}

namespace {

std::vector<std::string> letter_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return names;
}

}  // namespace

std::vector<FinitePoset> enumerate_posets(std::size_t n) {
  if (n > 6) throw Error(ErrorCode::Unsupported, "poset enumeration is limited to 6 points");
  // Every poset has a labelling in which i < j whenever i is strictly below j,
  // so it suffices to range over relations on pairs i < j.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<std::size_t> perm(n);
  std::map<std::vector<bool>, std::vector<std::vector<bool>>> classes;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if ((mask >> k) & 1U) leq[pairs[k].first][pairs[k].second] = true;
    bool transitive = true;
    for (std::size_t a = 0; a < n && transitive; ++a)
      for (std::size_t b = 0; b < n && transitive; ++b)
        for (std::size_t c = 0; c < n && transitive; ++c)
          if (leq[a][b] && leq[b][c] && !leq[a][c]) transitive = false;
    if (!transitive) continue;
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<bool> best;
    do {
      std::vector<bool> code(n * n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) code[perm[a] * n + perm[b]] = leq[a][b];
      if (best.empty() || code < best) best = code;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!classes.count(best)) {
      std::vector<std::vector<bool>> canon(n, std::vector<bool>(n));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) canon[a][b] = best.empty() ? false : bool(best[a * n + b]);
      classes.emplace(best, canon);
    }
  }
  std::vector<FinitePoset> out;
  for (auto& [code, leq] : classes) out.push_back(FinitePoset::from_order_matrix(letter_names(n), leq));
  return out;
}

FinitePoset antichain(std::size_t n) { return FinitePoset::build(letter_names(n), {}); }

FinitePoset chain(std::size_t n) {
  std::vector<std::pair<std::string, std::string>> pairs;
  auto names = letter_names(n);
  for (std::size_t i = 0; i + 1 < n; ++i) pairs.emplace_back(names[i], names[i + 1]);
  return FinitePoset::build(names, pairs);
}

}  // namespace mforge
