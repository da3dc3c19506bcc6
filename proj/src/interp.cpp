#include "mforge/interp.hpp"

#include <algorithm>
#include <functional>

namespace mforge {

const char* op_name(ProgramOp op) {
  switch (op) {
    case ProgramOp::Step: return "step";
    case ProgramOp::PChoice: return "pchoice";
    case ProgramOp::DChoice: return "dchoice";
    case ProgramOp::AChoice: return "achoice";
    case ProgramOp::EChoice: return "echoice";
    case ProgramOp::Seq: return "seq";
  }
  return "?";
}

ProgramRef step(PointMap map) {
  auto p = std::make_shared<Program>();
  p->map = std::move(map);
  return p;
}

ProgramRef pchoice(Rational p, ProgramRef left, ProgramRef right) {
  if (p < 0 || p > 1) throw Error(ErrorCode::InvalidArgument, "pchoice probability " + format_rational(p));
  auto out = std::make_shared<Program>();
  out->op = ProgramOp::PChoice;
  out->p = std::move(p);
  out->left = std::move(left);
  out->right = std::move(right);
  return out;
}

ProgramRef binary(ProgramOp op, ProgramRef left, ProgramRef right) {
  if (op == ProgramOp::Step || op == ProgramOp::PChoice)
    throw Error(ErrorCode::InvalidArgument, std::string(op_name(op)) + " is not a plain binary node");
  auto out = std::make_shared<Program>();
  out->op = op;
  out->left = std::move(left);
  out->right = std::move(right);
  return out;
}

std::size_t choice_count(const Program& program) {
  if (program.op == ProgramOp::Step) return 0;
  const bool choice = program.op == ProgramOp::DChoice || program.op == ProgramOp::AChoice ||
                      program.op == ProgramOp::EChoice;
  return (choice ? 1 : 0) + choice_count(*program.left) + choice_count(*program.right);
}

std::size_t node_count(const Program& program) {
  if (program.op == ProgramOp::Step) return 1;
  return 1 + node_count(*program.left) + node_count(*program.right);
}

namespace {

ProgramOp parse_op(const std::string& name, const std::string& path) {
  for (auto op : {ProgramOp::Step, ProgramOp::PChoice, ProgramOp::DChoice, ProgramOp::AChoice, ProgramOp::EChoice,
                  ProgramOp::Seq})
    if (name == op_name(op)) return op;
  throw Error(ErrorCode::Schema, path + ": unknown op '" + name + "'");
}

PointMap step_map_from_json(const Json& j, const FinitePoset& space, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "id") return identity_map(space);
  if (j.is_object() && j.size() == 1 && j.contains("const")) {
    const Json& target = j.at("const");
    if (!target.is_string()) throw Error(ErrorCode::Schema, path + ".const: expected a point name");
    auto idx = space.find(target.get<std::string>());
    if (!idx) throw Error(ErrorCode::UnknownPoint, path + ".const: '" + target.get<std::string>() + "'");
    return PointMap{std::vector<std::size_t>(space.size(), *idx)};
  }
  if (j.is_object()) {
    for (std::size_t x = 0; x < space.size(); ++x)
      if (!j.contains(space.name(x)))
        throw Error(ErrorCode::Schema, path + ": no image for '" + space.name(x) + "'");
    return point_map_from_json(j, space, space, path);
  }
  throw Error(ErrorCode::Schema, path + ": expected \"id\", {\"const\": point} or a point map");
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw Error(ErrorCode::Schema, path + ": missing field '" + key + "'");
  return j.at(key);
}

// Every way of moving each point's mass to one of the extremal points above
// (Up) or below (Down) it.
std::vector<Valuation> pushes(const Valuation& g, Orientation side) {
  const FinitePoset& p = g.carrier();
  const auto support = g.support().indices();
  std::vector<std::vector<std::size_t>> targets;
  std::size_t total = 1;
  for (std::size_t y : support) {
    targets.push_back(side == Orientation::Up ? p.maximal(p.up_of(y)).indices() : p.minimal(p.down_of(y)).indices());
    total *= targets.back().size();
    if (total > 4096) throw Error(ErrorCode::Unsupported, "too many extremal pushes of one generator");
  }
  std::vector<Valuation> out;
  std::vector<std::size_t> pick(support.size(), 0);
  while (true) {
    std::vector<Rational> w(p.size());
    for (std::size_t k = 0; k < support.size(); ++k) w[targets[k][pick[k]]] += g.weight(support[k]);
    out.emplace_back(g.carrier_ref(), std::move(w), g.kind());
    std::size_t k = 0;
    while (k < support.size() && ++pick[k] == targets[k].size()) pick[k++] = 0;
    if (k == support.size()) break;
  }
  return out;
}

Prevision canonical(PrevisionRole role, std::vector<Valuation> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  const Orientation side = role == PrevisionRole::Superlinear ? Orientation::Up : Orientation::Down;
  return retract_r(canonicalize_generators(ConvexSet(side, std::move(gens))));
}

std::vector<Valuation> joined(const Prevision& a, const Prevision& b) {
  std::vector<Valuation> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return gens;
}

void require_monotone(const FinitePoset& space, const std::vector<Fork>& family, const char* what) {
  std::vector<Prevision> lows, highs;
  for (const auto& f : family) {
    lows.push_back(f.lower);
    highs.push_back(f.upper);
  }
  try {
    require_monotone_family(space, lows);
    require_monotone_family(space, highs);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotMonotone, std::string(what) + ": " + e.what());
  }
}

std::vector<Fork> denote(const Program& program, const PosetRef& space) {
  const std::size_t n = space->size();
  std::vector<Fork> out;
  if (program.op == ProgramOp::Step) {
    if (!is_monotone(*space, *space, program.map)) throw Error(ErrorCode::NotMonotone, "step map is not monotone");
    for (std::size_t x = 0; x < n; ++x) out.push_back(fork_unit(space, program.map.image[x]));
    return out;
  }
  const auto left = denote(*program.left, space);
  const auto right = denote(*program.right, space);
  for (std::size_t x = 0; x < n; ++x) {
    const Fork& a = left[x];
    const Fork& b = right[x];
    switch (program.op) {
      case ProgramOp::PChoice: {
        std::vector<Atom<Fork>> atoms;
        if (program.p != 0) atoms.push_back({program.p, a});
        if (program.p != 1) atoms.push_back({1 - program.p, b});
        out.push_back(algebra_fork(SimpleValuation<Fork>(std::move(atoms), ValuationKind::Prob)));
        break;
      }
      case ProgramOp::EChoice:
        out.push_back(make_fork(canonical(PrevisionRole::Superlinear, joined(a.lower, b.lower)),
                                canonical(PrevisionRole::Sublinear, joined(a.upper, b.upper))));
        break;
      case ProgramOp::DChoice: {
        Prevision lower = canonical(PrevisionRole::Superlinear, joined(a.lower, b.lower));
        std::vector<Valuation> up;
        for (const auto& g : lower.generators())
          for (auto& v : pushes(g, Orientation::Up)) up.push_back(std::move(v));
        out.push_back(make_fork(std::move(lower), canonical(PrevisionRole::Sublinear, std::move(up))));
        break;
      }
      case ProgramOp::AChoice: {
        Prevision upper = canonical(PrevisionRole::Sublinear, joined(a.upper, b.upper));
        std::vector<Valuation> down;
        for (const auto& g : upper.generators())
          for (auto& v : pushes(g, Orientation::Down)) down.push_back(std::move(v));
        out.push_back(make_fork(canonical(PrevisionRole::Superlinear, std::move(down)), std::move(upper)));
        break;
      }
      case ProgramOp::Seq:
        if (x == 0) require_monotone(*space, right, "second half of seq");
        out.push_back(kleisli_extend(right, a));
        break;
      case ProgramOp::Step: break;
    }
  }
  return out;
}

}  // namespace

ProgramRef program_from_json(const Json& j, const FinitePoset& space, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorCode::Schema, path + ": expected a program object");
  const Json& op_field = field(j, "op", path);
  if (!op_field.is_string()) throw Error(ErrorCode::Schema, path + ".op: expected a string");
  const ProgramOp op = parse_op(op_field.get<std::string>(), path + ".op");
  if (op == ProgramOp::Step) return step(step_map_from_json(field(j, "map", path), space, path + ".map"));
  auto left = program_from_json(field(j, "left", path), space, path + ".left");
  auto right = program_from_json(field(j, "right", path), space, path + ".right");
  if (op == ProgramOp::PChoice) {
    Rational p = rational_from_json(field(j, "p", path), path + ".p");
    if (p < 0 || p > 1) throw Error(ErrorCode::InvalidArgument, path + ".p: " + format_rational(p) + " is not in [0,1]");
    return pchoice(std::move(p), std::move(left), std::move(right));
  }
  return binary(op, std::move(left), std::move(right));
}

Json program_to_json(const FinitePoset& space, const Program& program) {
  Json j{{"op", op_name(program.op)}};
  if (program.op == ProgramOp::Step) {
    j["map"] = point_map_to_json(space, space, program.map);
    return j;
  }
  if (program.op == ProgramOp::PChoice) j["p"] = rational_to_json(program.p);
  j["left"] = program_to_json(space, *program.left);
  j["right"] = program_to_json(space, *program.right);
  return j;
}

std::vector<Fork> denote_program(const Program& program, const PosetRef& space) {
  auto family = denote(program, space);
  require_monotone(*space, family, "program");
  return family;
}

ForkBounds query_fork(const std::vector<Fork>& denotation, std::size_t state, const MonotoneMap& h) {
  if (state >= denotation.size()) throw Error(ErrorCode::UnknownPoint, "state index out of range");
  const Fork& f = denotation[state];
  require_same_carrier(f.lower.carrier(), h.carrier());
  return {f.lower(h), f.upper(h)};
}

ProgramRef random_program(Rng& rng, const FinitePoset& space, std::size_t max_choices, std::size_t max_depth) {
  static const char* probabilities[] = {"1/2", "1/3", "2/3", "1/4", "3/4"};
  std::size_t choices_left = max_choices;
  std::function<ProgramRef(std::size_t)> grow = [&](std::size_t depth) -> ProgramRef {
    if (depth >= max_depth || rng() % 3 == 0) return step(random_point_map(rng, space, space));
    std::vector<ProgramOp> ops = {ProgramOp::PChoice, ProgramOp::Seq};
    if (choices_left > 0) {
      ops.insert(ops.end(), {ProgramOp::DChoice, ProgramOp::AChoice, ProgramOp::EChoice});
    }
    const ProgramOp op = ops[rng() % ops.size()];
    if (op == ProgramOp::DChoice || op == ProgramOp::AChoice || op == ProgramOp::EChoice) --choices_left;
    auto left = grow(depth + 1);
    auto right = grow(depth + 1);
    if (op == ProgramOp::PChoice) return pchoice(parse_rational(probabilities[rng() % 5]), left, right);
    return binary(op, left, right);
  };
  return grow(0);
}

}  // namespace mforge
