#pragma once

#include <vector>

#include "mforge/rational.hpp"

namespace mforge {

enum class Relation { LessEqual, GreaterEqual, Equal, Less, Greater };

struct LinearConstraint {
  std::vector<Rational> coefficients;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

/// Linear system over exact rationals. Variables are nonnegative unless
/// marked free.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars = 0) : free_(num_vars, false) {}

  std::size_t num_vars() const { return free_.size(); }
  std::size_t add_variable(bool is_free = false);
  void set_free(std::size_t var, bool is_free = true);
  bool is_free(std::size_t var) const { return free_[var]; }
  void add_constraint(std::vector<Rational> coefficients, Relation relation, Rational rhs);
  const std::vector<LinearConstraint>& constraints() const { return rows_; }
  bool has_strict() const;

 private:
  std::vector<bool> free_;
  std::vector<LinearConstraint> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> solution;
  // Set when infeasible: one multiplier per constraint, see
  // verify_infeasibility_certificate.
  std::vector<Rational> certificate;
};

/// Maximizes objective·x. Strict constraints are rejected.
LpResult lp_maximize(const LinearProgram& lp, const std::vector<Rational>& objective);
LpResult lp_minimize(const LinearProgram& lp, const std::vector<Rational>& objective);

struct Feasibility {
  bool feasible = false;
  std::vector<Rational> witness;
  // Present only for infeasible systems without strict constraints.
  std::vector<Rational> certificate;
};

/// Exact feasibility. Strict rows are handled by maximizing a common slack.
Feasibility lp_feasible(const LinearProgram& lp);

bool verify_witness(const LinearProgram& lp, const std::vector<Rational>& x);

/// Multipliers y with y >= 0 on <= rows, y <= 0 on >= rows and y free on
/// equalities, such that sum y_i a_i is >= 0 on nonnegative variables, zero on
/// free variables, and sum y_i b_i < 0.
bool verify_infeasibility_certificate(const LinearProgram& lp, const std::vector<Rational>& y);

}  // namespace mforge
