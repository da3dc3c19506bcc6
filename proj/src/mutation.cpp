#include "mforge/mutation.hpp"

#include "mforge/error.hpp"

namespace mforge {

namespace {
thread_local Mutation current = Mutation::None;
}

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::DropClosure: return "drop-closure";
    case Mutation::SwapMinMax: return "swap-min-max";
    case Mutation::ForgetCanonicalization: return "forget-canonicalization";
    case Mutation::SkipConstraintClass: return "skip-constraint-class";
    case Mutation::WrongKindTable: return "wrong-kind-table";
    case Mutation::WrongChoiceProduct: return "wrong-choice-product";
  }
  return "none";
}

const std::vector<Mutation>& all_mutations() {
  static const std::vector<Mutation> list = {Mutation::DropClosure,          Mutation::SwapMinMax,
                                             Mutation::ForgetCanonicalization, Mutation::SkipConstraintClass,
                                             Mutation::WrongKindTable,       Mutation::WrongChoiceProduct};
  return list;
}

Mutation parse_mutation(const std::string& name) {
  if (name == "none") return Mutation::None;
  for (auto m : all_mutations())
    if (name == mutation_name(m)) return m;
  throw Error(ErrorCode::InvalidArgument, "unknown mutation '" + name + "'");
}

Mutation active_mutation() { return current; }

ScopedMutation::ScopedMutation(Mutation m) : previous_(current) { current = m; }
ScopedMutation::~ScopedMutation() { current = previous_; }

}  // namespace mforge
