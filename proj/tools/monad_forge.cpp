// monad_forge: law suites, law application, canonical forms and the demo
// interpreter from the command line.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
// 3 invalid input.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mforge/harness.hpp"
#include "mforge/interp.hpp"

using namespace mforge;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const Json& member_or(const Json& j, const char* key, const Json& fallback) {
  return j.is_object() && j.contains(key) ? j.at(key) : fallback;
}

// Largest space any subcommand accepts; --max-points lowers it.
std::size_t max_points = 8;

void require_size(const FinitePoset& p, const std::string& source) {
  if (p.size() > max_points)
    throw Error(ErrorCode::InvalidArgument, source + ": " + std::to_string(p.size()) + " points exceed --max-points " +
                                                std::to_string(max_points));
}

// A model file either is a poset or carries one under "poset".
PosetRef poset_of(const Json& j, const std::string& source) {
  PosetRef p = j.is_object() && j.contains("poset") ? poset_from_json(j.at("poset"), source + ":$.poset")
                                                    : poset_from_json(j, source + ":$");
  require_size(*p, source);
  return p;
}

void emit(const Json& j, const std::string& format) {
  if (format == "json")
    std::cout << j.dump() << "\n";
  else
    std::cout << j.dump(2) << "\n";
}

std::vector<LawReport> run_law(const std::string& law, const PosetRef& space, const HarnessOptions& opts) {
  std::vector<LawReport> out;
  auto add = [&](std::vector<LawReport> more) { out.insert(out.end(), more.begin(), more.end()); };
  if (law == "all") return run_all_suites(space, opts);
  if (law == "monads") {
    for (auto m : all_monads()) add(check_monad_laws(m, space, opts));
    return out;
  }
  for (auto m : all_monads())
    if (law == monad_name(m)) return check_monad_laws(m, space, opts);
  if (law == "sharp" || law == "flat" || law == "natural" || law == "lens") {
    const LawKind kind = parse_law(law);
    if (kind != LawKind::Lens) add(check_weak_laws(kind, space, opts));
    out.push_back(check_cross_characterization(kind, space, opts));
    out.push_back(check_transform_consistency(kind, space, opts));
    return out;
  }
  if (law == "retraction") return check_retraction(space, opts);
  if (law == "walley") return check_walley(space, opts);
  if (law == "inverse-image") {
    for (std::size_t n = 1; n <= 3; ++n) {
      add(check_inverse_image(InverseImageLemma::Demonic, space, n, opts));
      add(check_inverse_image(InverseImageLemma::Angelic, space, n, opts));
    }
    return out;
  }
  if (law == "minimax") {
    for (std::size_t n = 1; n <= 3; ++n) out.push_back(check_minimax(space, n, opts));
    return out;
  }
  throw UsageError("unknown law '" + law + "'");
}

int finish_reports(const std::vector<LawReport>& reports, const std::string& format) {
  for (const auto& r : reports) {
    if (format == "json")
      std::cout << report_to_json(r).dump() << "\n";
    else
      std::cout << format_report_text(r) << "\n";
  }
  const auto s = summarize(reports);
  if (format == "text")
    std::cout << s.pass << " passed, " << s.fail << " failed, " << s.skip << " skipped, " << s.unresolved
              << " unresolved\n";
  return s.fail ? kExitFail : 0;
}

struct LawCheckArgs {
  std::string law = "all";
  std::string poset;
  std::size_t all_posets = 0;
  std::uint64_t seed = 1;
  std::size_t budget = 50;
};

int law_check(const LawCheckArgs& a, const std::string& format) {
  HarnessOptions opts;
  opts.seed = a.seed;
  opts.budget = a.budget;
  std::vector<PosetRef> spaces;
  if (!a.poset.empty()) spaces.push_back(poset_of(load_json(a.poset), a.poset));
  if (a.all_posets) {
    for (const auto& p : enumerate_posets(a.all_posets)) {
      require_size(p, "--all-posets");
      spaces.push_back(share(p));
    }
  }
  if (spaces.empty() && a.law != "degeneracy" && a.law != "mutations")
    throw UsageError("law-check needs --poset or --all-posets");

  std::vector<LawReport> reports;
  if (a.law == "degeneracy") {
    for (std::size_t n = 1; n <= 5; ++n) reports.push_back(check_discrete_degeneracy(n, 3, 4));
  } else if (a.law == "mutations") {
    for (auto m : all_mutations()) reports.push_back(check_mutation(m, opts));
  } else {
    for (const auto& p : spaces)
      for (auto& r : run_law(a.law, p, opts)) reports.push_back(std::move(r));
  }
  return finish_reports(reports, format);
}

int apply_law(const std::string& law_name, const std::string& mu_path, const std::string& format) {
  const Json j = load_json(mu_path);
  check_schema_tag(j, mu_path + ":$");
  const PosetRef space = poset_of(j, mu_path);
  const Json& mu_json = member_or(j, "mu", j);
  const LawKind law = parse_law(law_name);
  const HyperValuation mu = hyper_valuation_from_json(mu_json, *space, mu_path + ":$.mu");
  Json out = law_image_to_json(lambda_apply(law, space, mu));
  out["schema"] = kSchemaTag;
  out["law"] = law_name;
  emit(out, format);
  return 0;
}

int interp(const std::string& program_path, const std::string& h_path, const std::string& at,
           const std::string& format) {
  const Json j = load_json(program_path);
  check_schema_tag(j, program_path + ":$");
  const PosetRef space = poset_of(j, program_path);
  if (!j.contains("program")) throw Error(ErrorCode::Schema, program_path + ":$: missing field 'program'");
  const ProgramRef program = program_from_json(j.at("program"), *space, program_path + ":$.program");
  const MonotoneMap h = monotone_map_from_json(load_json(h_path), space, h_path + ":$");
  const auto family = denote_program(*program, space);
  auto bounds_json = [&](std::size_t x) {
    const auto b = query_fork(family, x, h);
    return Json{{"lower", rational_to_json(b.lower)}, {"upper", rational_to_json(b.upper)}};
  };
  if (!at.empty()) {
    auto x = space->find(at);
    if (!x) throw Error(ErrorCode::UnknownPoint, "--at: '" + at + "'");
    emit(bounds_json(*x), format);
    return 0;
  }
  Json out = Json::object();
  for (std::size_t x = 0; x < space->size(); ++x) out[space->name(x)] = bounds_json(x);
  emit(out, format);
  return 0;
}

// Canonical form of a generated set, quasi-lens pair, prevision or fork.
int canon(const std::string& path, const std::string& format) {
  const Json j = load_json(path);
  check_schema_tag(j, path + ":$");
  const PosetRef space = poset_of(j, path);
  const std::string at = path + ":$";
  Json out;
  if (j.contains("orientation")) {
    out = convex_set_to_json(canonicalize_generators(convex_set_from_json(j, space, at)));
  } else if (j.contains("role")) {
    out = prevision_to_json(retract_r(section_s(prevision_from_json(j, space, at))));
  } else if (j.contains("lower") && j.contains("upper")) {
    out = fork_to_json(retract_r(section_s(fork_from_json(j, space, at))));
  } else if (j.contains("up") && j.contains("down")) {
    GenQuasiLens ql{convex_set_from_json(j.at("up"), space, at + ".up"),
                    convex_set_from_json(j.at("down"), space, at + ".down")};
    auto c = canonicalize(ql);
    out = Json{{"up", convex_set_to_json(c.up)}, {"down", convex_set_to_json(c.down)}};
  } else {
    throw Error(ErrorCode::Schema, at + ": expected a generated set, quasi-lens, prevision or fork");
  }
  out["schema"] = kSchemaTag;
  emit(out, format);
  return 0;
}

// Summarizes JSON-lines report files written by law-check.
int report(const std::vector<std::string>& paths, const std::string& format) {
  std::vector<LawReport> reports;
  for (const auto& path : paths) {
    std::istringstream in(read_input(path));
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = path + ":" + std::to_string(n);
      reports.push_back(report_from_json(parse_json_text(line, where), where));
    }
  }
  const auto s = summarize(reports);
  if (format == "json") {
    Json failing = Json::array();
    for (const auto& r : reports)
      if (r.verdict == Verdict::Fail || r.verdict == Verdict::Unresolved) failing.push_back(report_to_json(r));
    std::cout << Json{{"schema", kSchemaTag},
                      {"reports", reports.size()},
                      {"pass", s.pass},
                      {"fail", s.fail},
                      {"skip", s.skip},
                      {"unresolved", s.unresolved},
                      {"failing", failing}}
                     .dump()
              << "\n";
  } else {
    for (const auto& r : reports)
      if (r.verdict == Verdict::Fail || r.verdict == Verdict::Unresolved) std::cout << format_report_text(r) << "\n";
    std::cout << reports.size() << " reports: " << s.pass << " passed, " << s.fail << " failed, " << s.skip
              << " skipped, " << s.unresolved << " unresolved\n";
  }
  return s.fail ? kExitFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Law checks for powerdomain, valuation and prevision monads and their weak distributive laws"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--max-points", max_points, "Reject spaces with more points")->check(CLI::Range(1, 8));

  LawCheckArgs lc;
  auto* law_check_cmd = app.add_subcommand("law-check", "Run law suites and print one report per suite");
  law_check_cmd->add_option("--law", lc.law,
                            "all, monads, V, S, H, QL, Lens, PDN, PAN, PADN, sharp, flat, natural, lens, "
                            "retraction, walley, inverse-image, minimax, degeneracy or mutations");
  law_check_cmd->add_option("--poset", lc.poset, "Poset JSON file ('-' for stdin)");
  law_check_cmd->add_option("--all-posets", lc.all_posets, "Every poset with this many points")
      ->check(CLI::Range(1, 5));
  law_check_cmd->add_option("--seed", lc.seed, "Seed for random instances");
  law_check_cmd->add_option("--budget", lc.budget, "Random instances per suite");

  std::string law = "sharp", mu_path;
  auto* apply_cmd = app.add_subcommand("apply-law", "Apply a weak distributive law to a valuation on a hyperspace");
  apply_cmd->add_option("--law", law, "sharp, flat, natural or lens")
      ->check(CLI::IsMember({"sharp", "flat", "natural", "lens"}));
  apply_cmd->add_option("--mu", mu_path, "Valuation JSON file with its poset ('-' for stdin)")->required();

  std::string program_path, h_path, at;
  auto* interp_cmd = app.add_subcommand("interp", "Lower and upper expectations of a program");
  interp_cmd->set_help_flag("--help", "Print this help message and exit");
  interp_cmd->add_option("--program", program_path, "Program JSON file with its poset ('-' for stdin)")->required();
  interp_cmd->add_option("--h", h_path, "Monotone map JSON file ('-' for stdin)")->required();
  interp_cmd->add_option("--at", at, "Start state (default: every state)");

  std::string canon_path;
  auto* canon_cmd = app.add_subcommand("canon", "Canonical generators of a set, quasi-lens, prevision or fork");
  canon_cmd->add_option("--input", canon_path, "JSON file with its poset ('-' for stdin)")->required();

  std::vector<std::string> report_paths;
  auto* report_cmd = app.add_subcommand("report", "Summarize JSON-lines reports from law-check");
  report_cmd->add_option("inputs", report_paths, "Report files ('-' for stdin)")->required();

  for (auto* cmd : {law_check_cmd, apply_cmd, interp_cmd, canon_cmd, report_cmd}) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--max-points", max_points, "Reject spaces with more points")->check(CLI::Range(1, 8));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*law_check_cmd) return law_check(lc, format);
    if (*apply_cmd) return apply_law(law, mu_path, format);
    if (*interp_cmd) return interp(program_path, h_path, at, format);
    if (*canon_cmd) return canon(canon_path, format);
    if (*report_cmd) return report(report_paths, format);
  } catch (const UsageError& e) {
    std::cerr << "monad_forge: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "monad_forge: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
