#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mforge/json_io.hpp"
#include "mforge/prevision.hpp"
#include "mforge/random.hpp"

namespace mforge {

// A loop-free program over one finite space. Every program denotes a family
// of forks, one per start state: lower and upper expectation functionals.
enum class ProgramOp { Step, PChoice, DChoice, AChoice, EChoice, Seq };

const char* op_name(ProgramOp op);

struct Program;
using ProgramRef = std::shared_ptr<const Program>;

struct Program {
  ProgramOp op = ProgramOp::Step;
  PointMap map;         // Step
  Rational p;           // PChoice: probability of the left branch
  ProgramRef left, right;
};

ProgramRef step(PointMap map);
ProgramRef pchoice(Rational p, ProgramRef left, ProgramRef right);
ProgramRef binary(ProgramOp op, ProgramRef left, ProgramRef right);

std::size_t choice_count(const Program& program);
std::size_t node_count(const Program& program);

/// {"op":"step","map":"id" | {"const":"t"} | {"b":"t",...}},
/// {"op":"pchoice","p":"1/2","left":...,"right":...},
/// {"op":"dchoice"|"achoice"|"echoice"|"seq","left":...,"right":...}.
ProgramRef program_from_json(const Json& j, const FinitePoset& space, const std::string& path = "$");
Json program_to_json(const FinitePoset& space, const Program& program);

/// Denotation, one fork per start state. Steps are units, pchoice mixes,
/// echoice unions both components and seq is Kleisli extension.
///
/// dchoice unions the lower components; its upper component is the closure
/// of that lower set, so it bounds every outcome where mass may further move
/// to maximal points. achoice mirrors this with the upper components and
/// minimal points. Families that come out non-monotone (at the top or as the
/// second half of a seq) are rejected with a NotMonotone error naming two
/// points and a separating map.
std::vector<Fork> denote_program(const Program& program, const PosetRef& space);

struct ForkBounds {
  Rational lower, upper;
  friend bool operator==(const ForkBounds&, const ForkBounds&) = default;
};

ForkBounds query_fork(const std::vector<Fork>& denotation, std::size_t state, const MonotoneMap& h);

/// Random program with at most `max_choices` nondeterministic nodes and at
/// most `max_depth` levels.
ProgramRef random_program(Rng& rng, const FinitePoset& space, std::size_t max_choices, std::size_t max_depth);

}  // namespace mforge
