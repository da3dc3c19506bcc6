// Brute-force reference for the interpreter: run the program under every
// deterministic strategy and take the best expectation.
//
// A strategy fixes, for each choice node and each state it is entered in,
// which branch runs, and for each push (a demonic node read from above, an
// angelic node read from below) and each state, which extremal point the
// mass moves to. Decisions may depend on the current state but not on how it
// was reached; for expectations of a fixed map that loses nothing.
#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "mforge/interp.hpp"

namespace oracle {

using mforge::FinitePoset;
using mforge::MonotoneMap;
using mforge::Program;
using mforge::ProgramOp;
using mforge::Rational;

enum class Side { Lower, Upper };

class StrategyOracle {
 public:
  explicit StrategyOracle(const FinitePoset& space) : space_(space) {}

  // min (Lower) or max (Upper) of E[h] over all strategies from `start`.
  Rational bound(const Program& program, std::size_t start, const MonotoneMap& h, Side side) {
    sigma_.clear();
    have_ = false;
    explore(program, start, h, side);
    return best_;
  }

  std::size_t strategies_seen() const { return seen_; }

 private:
  using Dist = std::vector<Rational>;
  using Key = std::tuple<const Program*, int, std::size_t>;
  struct Need {
    Key key;
    std::size_t options;
  };

  void explore(const Program& program, std::size_t start, const MonotoneMap& h, Side side) {
    Dist d;
    try {
      d = run(program, start, side);
    } catch (const Need& need) {
      for (std::size_t o = 0; o < need.options; ++o) {
        sigma_[need.key] = o;
        explore(program, start, h, side);
      }
      sigma_.erase(need.key);
      return;
    }
    ++seen_;
    Rational value = 0;
    for (std::size_t y = 0; y < d.size(); ++y) value += d[y] * h(y);
    if (!have_ || (side == Side::Lower ? value < best_ : value > best_)) best_ = value;
    have_ = true;
  }

  std::size_t decide(const Key& key, std::size_t options) {
    auto it = sigma_.find(key);
    if (it == sigma_.end()) throw Need{key, options};
    return it->second;
  }

  // Extremal points above (up) or below (!up) y, read off leq directly.
  std::vector<std::size_t> extremal(std::size_t y, bool up) const {
    std::vector<std::size_t> out;
    const std::size_t n = space_.size();
    for (std::size_t m = 0; m < n; ++m) {
      if (up ? !space_.leq(y, m) : !space_.leq(m, y)) continue;
      bool extreme = true;
      for (std::size_t k = 0; k < n; ++k)
        if (k != m && (up ? space_.leq(m, k) : space_.leq(k, m))) extreme = false;
      if (extreme) out.push_back(m);
    }
    return out;
  }

  Dist push(const Program* node, const Dist& d, bool up) {
    Dist out(d.size(), Rational(0));
    for (std::size_t y = 0; y < d.size(); ++y) {
      if (d[y] == 0) continue;
      auto targets = extremal(y, up);
      out[targets[decide({node, 1, y}, targets.size())]] += d[y];
    }
    return out;
  }

  Dist run(const Program& p, std::size_t x, Side side) {
    const std::size_t n = space_.size();
    switch (p.op) {
      case ProgramOp::Step: {
        Dist d(n, Rational(0));
        d[p.map.image[x]] = 1;
        return d;
      }
      case ProgramOp::PChoice: {
        Dist a = run(*p.left, x, side), b = run(*p.right, x, side);
        for (std::size_t y = 0; y < n; ++y) a[y] = p.p * a[y] + (1 - p.p) * b[y];
        return a;
      }
      case ProgramOp::Seq: {
        Dist mid = run(*p.left, x, side);
        Dist out(n, Rational(0));
        for (std::size_t y = 0; y < n; ++y) {
          if (mid[y] == 0) continue;
          Dist tail = run(*p.right, y, side);
          for (std::size_t z = 0; z < n; ++z) out[z] += mid[y] * tail[z];
        }
        return out;
      }
      case ProgramOp::EChoice: return run(decide({&p, 0, x}, 2) ? *p.right : *p.left, x, side);
      case ProgramOp::DChoice: {
        const Program& branch = decide({&p, 0, x}, 2) ? *p.right : *p.left;
        Dist d = run(branch, x, Side::Lower);
        return side == Side::Lower ? d : push(&p, d, true);
      }
      case ProgramOp::AChoice: {
        const Program& branch = decide({&p, 0, x}, 2) ? *p.right : *p.left;
        Dist d = run(branch, x, Side::Upper);
        return side == Side::Upper ? d : push(&p, d, false);
      }
    }
    return {};
  }

  const FinitePoset& space_;
  std::map<Key, std::size_t> sigma_;
  Rational best_;
  bool have_ = false;
  std::size_t seen_ = 0;
};

}  // namespace oracle
