#pragma once

#include <string>
#include <vector>

namespace mforge {

/// Deliberate single-point semantic faults used to show that the law checks
/// can fail. Only the harness and tests switch them on.
enum class Mutation {
  None,
  DropClosure,             // Hoare functor action skips the down-closure
  SwapMinMax,              // superlinear evaluation takes the max over generators
  ForgetCanonicalization,  // the section returns raw generators
  SkipConstraintClass,     // membership ignores non-principal upper sets
  WrongKindTable,          // flattening keeps the outer kind
  WrongChoiceProduct,      // law application pairs the i-th points of every atom
};

const char* mutation_name(Mutation m);
Mutation parse_mutation(const std::string& name);
const std::vector<Mutation>& all_mutations();

Mutation active_mutation();
inline bool mutated(Mutation m) { return active_mutation() == m; }

/// Activates a mutation on the current thread for the lifetime of the guard.
class ScopedMutation {
 public:
  explicit ScopedMutation(Mutation m);
  ~ScopedMutation();
  ScopedMutation(const ScopedMutation&) = delete;
  ScopedMutation& operator=(const ScopedMutation&) = delete;

 private:
  Mutation previous_;
};

}  // namespace mforge
