#include "mforge/lp.hpp"

#include "mforge/error.hpp"

namespace mforge {

std::size_t LinearProgram::add_variable(bool is_free) {
  free_.push_back(is_free);
  for (auto& r : rows_) r.coefficients.emplace_back(0);
  return free_.size() - 1;
}

void LinearProgram::set_free(std::size_t var, bool is_free) { free_.at(var) = is_free; }

void LinearProgram::add_constraint(std::vector<Rational> coefficients, Relation relation, Rational rhs) {
  if (coefficients.size() != free_.size())
    throw Error(ErrorCode::MalformedConstraint, "constraint has " + std::to_string(coefficients.size()) +
                                                    " coefficients for " + std::to_string(free_.size()) + " variables");
  for (auto& c : coefficients) c.canonicalize();
  rhs.canonicalize();
  rows_.push_back({std::move(coefficients), relation, std::move(rhs)});
}

bool LinearProgram::has_strict() const {
  for (const auto& r : rows_)
    if (r.relation == Relation::Less || r.relation == Relation::Greater) return true;
  return false;
}

namespace {

// Dense tableau for the standard form  A x = b, x >= 0, b >= 0, with one
// artificial column per row. Pivoting follows Bland's rule, which cannot
// cycle under exact arithmetic.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : lp_(lp) {
    const std::size_t vars = lp.num_vars();
    for (std::size_t v = 0; v < vars; ++v) {
      pos_.push_back(cols_++);
      neg_.push_back(lp.is_free(v) ? cols_++ : npos);
    }
    const auto& rows = lp.constraints();
    m_ = rows.size();
    slack_.assign(m_, npos);
    for (std::size_t i = 0; i < m_; ++i) {
      if (rows[i].relation == Relation::Less || rows[i].relation == Relation::Greater)
        throw Error(ErrorCode::MalformedConstraint, "strict constraint in an optimization problem");
      if (rows[i].relation != Relation::Equal) slack_[i] = cols_++;
    }
    first_art_ = cols_;
    cols_ += m_;
    a_.assign(m_, std::vector<Rational>(cols_ + 1));
    sign_.assign(m_, 1);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = rows[i];
      sign_[i] = r.rhs < 0 ? -1 : 1;
      for (std::size_t v = 0; v < vars; ++v) {
        if (r.coefficients[v] == 0) continue;
        a_[i][pos_[v]] = r.coefficients[v] * sign_[i];
        if (neg_[v] != npos) a_[i][neg_[v]] = -a_[i][pos_[v]];
      }
      if (slack_[i] != npos) a_[i][slack_[i]] = Rational(r.relation == Relation::LessEqual ? 1 : -1) * sign_[i];
      a_[i][first_art_ + i] = 1;
      a_[i][cols_] = r.rhs * sign_[i];
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = first_art_ + i;
  }

  // Returns false when the system is infeasible; certificate_ is then set.
  bool phase_one() {
    obj_.assign(cols_ + 1, Rational(0));
    for (std::size_t j = first_art_; j < cols_; ++j) obj_[j] = 1;
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j <= cols_; ++j)
        if (a_[i][j] != 0) obj_[j] -= a_[i][j];
    allow_artificial_ = true;
    run();
    Rational z = -obj_[cols_];
    if (z > 0) {
      certificate_.assign(m_, Rational(0));
      for (std::size_t i = 0; i < m_; ++i) {
        Rational y = 1 - obj_[first_art_ + i];
        certificate_[i] = -(y * sign_[i]);
      }
      return false;
    }
    drive_out_artificials();
    allow_artificial_ = false;
    return true;
  }

  // Minimizes c·x over the feasible region found by phase one.
  LpStatus phase_two(const std::vector<Rational>& c) {
    std::vector<Rational> cost(cols_ + 1);
    for (std::size_t v = 0; v < c.size(); ++v) {
      cost[pos_[v]] = c[v];
      if (neg_[v] != npos) cost[neg_[v]] = -c[v];
    }
    obj_ = cost;
    obj_[cols_] = 0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j)
        if (a_[i][j] != 0) obj_[j] -= cb * a_[i][j];
    }
    return run();
  }

  Rational objective_value() const { return -obj_[cols_]; }

  std::vector<Rational> solution() const {
    std::vector<Rational> col(cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) col[basis_[i]] = a_[i][cols_];
    std::vector<Rational> x(lp_.num_vars());
    for (std::size_t v = 0; v < x.size(); ++v) {
      x[v] = col[pos_[v]];
      if (neg_[v] != npos) x[v] -= col[neg_[v]];
    }
    return x;
  }

  const std::vector<Rational>& certificate() const { return certificate_; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool enterable(std::size_t j) const { return allow_artificial_ || j < first_art_; }

  LpStatus run() {
    for (;;) {
      std::size_t enter = npos;
      for (std::size_t j = 0; j < cols_; ++j)
        if (enterable(j) && obj_[j] < 0) {
          enter = j;
          break;
        }
      if (enter == npos) return LpStatus::Optimal;
      std::size_t leave = npos;
      Rational best;
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i][enter] <= 0) continue;
        Rational ratio = a_[i][cols_] / a_[i][enter];
        if (leave == npos || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == npos) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = a_[r];
    Rational inv = 1 / prow[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= cols_; ++j)
      if (prow[j] != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    Rational tmp;
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[c] == 0) return;
      Rational f = row[c];
      for (auto j : nz) {
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), prow[j].get_mpq_t());
        mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), tmp.get_mpq_t());
      }
    };
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (i != r) eliminate(a_[i]);
    eliminate(obj_);
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < a_.size();) {
      if (basis_[i] < first_art_) {
        ++i;
        continue;
      }
      std::size_t col = npos;
      for (std::size_t j = 0; j < first_art_; ++j)
        if (a_[i][j] != 0) {
          col = j;
          break;
        }
      if (col != npos) {
        pivot(i, col);
        ++i;
      } else {
        // Redundant row: every structural entry vanished.
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  const LinearProgram& lp_;
  std::size_t m_ = 0;
  std::size_t cols_ = 0;
  std::size_t first_art_ = 0;
  std::vector<std::size_t> pos_, neg_, slack_;
  std::vector<int> sign_;
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> certificate_;
  bool allow_artificial_ = true;
};

LpResult optimize(const LinearProgram& lp, const std::vector<Rational>& cost) {
  if (cost.size() != lp.num_vars()) throw Error(ErrorCode::MalformedConstraint, "objective has the wrong length");
  Tableau t(lp);
  LpResult result;
  if (!t.phase_one()) {
    result.status = LpStatus::Infeasible;
    result.certificate = t.certificate();
    return result;
  }
  result.status = t.phase_two(cost);
  if (result.status == LpStatus::Optimal) {
    result.value = t.objective_value();
    result.solution = t.solution();
  }
  return result;
}

}  // namespace

LpResult lp_minimize(const LinearProgram& lp, const std::vector<Rational>& objective) {
  return optimize(lp, objective);
}

LpResult lp_maximize(const LinearProgram& lp, const std::vector<Rational>& objective) {
  std::vector<Rational> neg(objective.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -objective[i];
  LpResult r = optimize(lp, neg);
  if (r.status == LpStatus::Optimal) r.value = -r.value;
  return r;
}

Feasibility lp_feasible(const LinearProgram& lp) {
  Feasibility out;
  if (!lp.has_strict()) {
    LpResult r = optimize(lp, std::vector<Rational>(lp.num_vars()));
    out.feasible = r.status != LpStatus::Infeasible;
    if (out.feasible)
      out.witness = r.solution;
    else
      out.certificate = r.certificate;
    return out;
  }
  const std::size_t n = lp.num_vars();
  LinearProgram relaxed(n + 1);
  for (std::size_t v = 0; v < n; ++v) relaxed.set_free(v, lp.is_free(v));
  for (const auto& row : lp.constraints()) {
    std::vector<Rational> c = row.coefficients;
    c.emplace_back(0);
    Relation rel = row.relation;
    if (rel == Relation::Less) {
      c[n] = 1;
      rel = Relation::LessEqual;
    } else if (rel == Relation::Greater) {
      c[n] = -1;
      rel = Relation::GreaterEqual;
    }
    relaxed.add_constraint(std::move(c), rel, row.rhs);
  }
  std::vector<Rational> cap(n + 1);
  cap[n] = 1;
  relaxed.add_constraint(cap, Relation::LessEqual, Rational(1));
  LpResult r = lp_maximize(relaxed, cap);
  out.feasible = r.status == LpStatus::Optimal && r.value > 0;
  if (out.feasible) out.witness.assign(r.solution.begin(), r.solution.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

bool verify_witness(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars()) return false;
  for (std::size_t v = 0; v < x.size(); ++v)
    if (!lp.is_free(v) && x[v] < 0) return false;
  for (const auto& row : lp.constraints()) {
    Rational lhs = 0;
    for (std::size_t v = 0; v < x.size(); ++v) lhs += row.coefficients[v] * x[v];
    switch (row.relation) {
      case Relation::LessEqual: if (!(lhs <= row.rhs)) return false; break;
      case Relation::GreaterEqual: if (!(lhs >= row.rhs)) return false; break;
      case Relation::Equal: if (lhs != row.rhs) return false; break;
      case Relation::Less: if (!(lhs < row.rhs)) return false; break;
      case Relation::Greater: if (!(lhs > row.rhs)) return false; break;
    }
  }
  return true;
}

bool verify_infeasibility_certificate(const LinearProgram& lp, const std::vector<Rational>& y) {
  const auto& rows = lp.constraints();
  if (y.size() != rows.size() || lp.has_strict()) return false;
  Rational rhs = 0;
  std::vector<Rational> combo(lp.num_vars());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].relation == Relation::LessEqual && y[i] < 0) return false;
    if (rows[i].relation == Relation::GreaterEqual && y[i] > 0) return false;
    if (y[i] == 0) continue;
    for (std::size_t v = 0; v < combo.size(); ++v) combo[v] += y[i] * rows[i].coefficients[v];
    rhs += y[i] * rows[i].rhs;
  }
  for (std::size_t v = 0; v < combo.size(); ++v) {
    if (lp.is_free(v) ? combo[v] != 0 : combo[v] < 0) return false;
  }
  return rhs < 0;
}

}  // namespace mforge
