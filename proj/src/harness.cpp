#include "mforge/harness.hpp"

#include <chrono>
#include <functional>
#include <sstream>

#include "mforge/lp.hpp"

namespace mforge {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skip: return "skip";
    case Verdict::Unresolved: return "unresolved";
  }
  return "?";
}

Verdict parse_verdict(const std::string& name) {
  for (auto v : {Verdict::Pass, Verdict::Fail, Verdict::Skip, Verdict::Unresolved})
    if (name == verdict_name(v)) return v;
  throw Error(ErrorCode::InvalidArgument, "unknown verdict '" + name + "'");
}

Json report_to_json(const LawReport& r) {
  Json j{{"schema", kSchemaTag},
         {"law", r.law},
         {"verdict", verdict_name(r.verdict)},
         {"instances", r.instances},
         {"instance", r.instance.empty() ? Json() : Json::parse(r.instance)},
         {"certificate", r.certificate},
         {"note", r.note},
         {"seed", r.seed},
         {"micros", r.micros}};
  return j;
}

LawReport report_from_json(const Json& j, const std::string& path) {
  check_schema_tag(j, path);
  auto need = [&](const char* key) -> const Json& {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Schema, path + ": missing field '" + key + "'");
    return j.at(key);
  };
  LawReport r;
  try {
    r.law = need("law").get<std::string>();
    r.verdict = parse_verdict(need("verdict").get<std::string>());
    r.instances = need("instances").get<std::size_t>();
    const Json& inst = need("instance");
    r.instance = inst.is_null() ? std::string() : inst.dump();
    r.certificate = need("certificate").get<std::string>();
    r.note = need("note").get<std::string>();
    r.seed = need("seed").get<std::uint64_t>();
    r.micros = need("micros").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, path + ": " + e.what());
  }
  return r;
}

const char* monad_name(MonadKind m) {
  switch (m) {
    case MonadKind::Valuation: return "V";
    case MonadKind::Smyth: return "S";
    case MonadKind::Hoare: return "H";
    case MonadKind::QuasiLens: return "QL";
    case MonadKind::Lens: return "Lens";
    case MonadKind::Demonic: return "PDN";
    case MonadKind::Angelic: return "PAN";
    case MonadKind::Erratic: return "PADN";
  }
  return "?";
}

MonadKind parse_monad(const std::string& name) {
  for (auto m : all_monads())
    if (name == monad_name(m)) return m;
  throw Error(ErrorCode::InvalidArgument, "unknown monad '" + name + "'");
}

const std::vector<MonadKind>& all_monads() {
  static const std::vector<MonadKind> list = {MonadKind::Valuation, MonadKind::Smyth,   MonadKind::Hoare,
                                              MonadKind::QuasiLens, MonadKind::Lens,    MonadKind::Demonic,
                                              MonadKind::Angelic,   MonadKind::Erratic};
  return list;
}

std::uint64_t instance_seed(std::uint64_t seed, const std::string& law, std::size_t index) {
  // FNV-1a over the suite name, then a splitmix64 finalizer.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : law) h = (h ^ c) * 1099511628211ULL;
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1) + h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Valuation> valuation_grid(const PosetRef& carrier, ValuationKind kind, unsigned max_den) {
  const std::size_t n = carrier->size();
  const Rational cap = kind == ValuationKind::General ? Rational(2) : Rational(1);
  std::vector<std::vector<Rational>> grid;
  for (unsigned d = 1; d <= max_den; ++d) {
    std::vector<unsigned> k(n, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned used) {
      if (i == n) {
        Rational total(used, d);
        total.canonicalize();
        if (total > cap || !total_admissible(kind, total)) return;
        std::vector<Rational> w(n);
        for (std::size_t j = 0; j < n; ++j) {
          w[j] = Rational(k[j], d);
          w[j].canonicalize();
        }
        grid.push_back(std::move(w));
        return;
      }
      for (unsigned v = 0; used + v <= 2 * d; ++v) {
        k[i] = v;
        rec(i + 1, used + v);
      }
    };
    rec(0, 0);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<Valuation> out;
  for (auto& w : grid) out.emplace_back(carrier, std::move(w), kind);
  return out;
}

ReportSummary summarize(const std::vector<LawReport>& reports) {
  ReportSummary s;
  for (const auto& r : reports) {
    switch (r.verdict) {
      case Verdict::Pass: ++s.pass; break;
      case Verdict::Fail: ++s.fail; break;
      case Verdict::Skip: ++s.skip; break;
      case Verdict::Unresolved: ++s.unresolved; break;
    }
  }
  return s;
}

std::string format_report_text(const LawReport& r) {
  std::ostringstream out;
  out << verdict_name(r.verdict) << "  " << r.law << "  (" << r.instances << " instances, " << r.micros / 1000
      << " ms)";
  if (!r.note.empty()) out << "  " << r.note;
  if (r.verdict == Verdict::Fail || r.verdict == Verdict::Unresolved) {
    out << "\n    seed " << r.seed;
    if (!r.certificate.empty()) out << "\n    certificate: " << r.certificate;
    if (!r.instance.empty()) out << "\n    instance: " << r.instance;
  }
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

const ValuationKind kKinds[] = {ValuationKind::Prob, ValuationKind::Sub, ValuationKind::General};

ValuationKind random_kind(Rng& rng) { return kKinds[rng() % 3]; }

// Accumulates one report. The first failure wins; later ones only count.
class Suite {
 public:
  Suite(std::string law, const PosetRef& space, const HarnessOptions& opts)
      : opts_(opts), start_(Clock::now()) {
    report_.law = std::move(law);
    report_.seed = opts.seed;
    poset_ = space ? poset_to_json(*space) : Json();
    report_.instance = Json{{"poset", poset_}}.dump();
  }

  bool done() const { return report_.verdict == Verdict::Fail && opts_.stop_at_first_failure; }

  // body(rng, instance, certificate) returns true when the instance passes.
  template <class Body>
  void run(std::uint64_t seed, Body&& body) {
    if (done()) return;
    Rng rng(seed);
    Json instance = Json::object();
    std::string certificate;
    bool ok = false;
    try {
      ok = body(rng, instance, certificate);
    } catch (const std::exception& e) {
      certificate = std::string("error: ") + e.what();
    }
    ++report_.instances;
    if (!ok) fail(instance, certificate, seed);
  }

  // `count` seeded instances.
  template <class Body>
  void sample(std::size_t count, Body&& body) {
    for (std::size_t i = 0; i < count && !done(); ++i) run(instance_seed(opts_.seed, report_.law, i), body);
  }

  void fail(const Json& instance, const std::string& certificate, std::uint64_t seed) {
    if (report_.verdict == Verdict::Fail) return;
    report_.verdict = Verdict::Fail;
    Json inst{{"poset", poset_}};
    for (auto it = instance.begin(); it != instance.end(); ++it) inst[it.key()] = it.value();
    report_.instance = inst.dump();
    report_.certificate = certificate;
    report_.seed = seed;
  }

  void note(const std::string& text) {
    if (!report_.note.empty()) report_.note += "; ";
    report_.note += text;
  }
  void set_verdict(Verdict v) { report_.verdict = v; }
  LawReport& report() { return report_; }

  LawReport finish() {
    report_.micros =
        static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start_).count());
    return report_;
  }

 private:
  const HarnessOptions& opts_;
  Clock::time_point start_;
  Json poset_;
  LawReport report_;
};

std::string describe_valuation(const Valuation& nu) { return valuation_to_json(nu).dump(); }

std::string describe_verdict(const ImageVerdict& v) {
  std::string out = std::string(v.side == Orientation::Up ? "up" : "down") + " side differs";
  if (v.detail.witness)
    out += ": generator " + describe_valuation(*v.detail.witness) + " of the " +
           (v.detail.witness_from_first ? "left" : "right") + " side is outside the other";
  if (v.detail.separator) out += ", separated by " + monotone_map_to_json(*v.detail.separator).dump();
  return out;
}

bool small(const PosetRef& space, std::size_t limit) { return space->size() <= limit; }

// ----- valuation monad -----

SimpleValuation<Valuation> random_nested(Rng& rng, const PosetRef& p) {
  const std::size_t n = 1 + rng() % 3;
  const ValuationKind outer = random_kind(rng);
  auto w = random_weights(rng, n, outer, 3);
  std::vector<Atom<Valuation>> atoms;
  const ValuationKind inner = random_kind(rng);
  for (std::size_t i = 0; i < n; ++i) atoms.push_back({w[i], random_valuation(rng, p, inner, 3)});
  return SimpleValuation<Valuation>(std::move(atoms), outer);
}

Json nested_to_json(const SimpleValuation<Valuation>& xi) {
  Json atoms = Json::array();
  for (const auto& a : xi.atoms())
    atoms.push_back(Json{{"weight", rational_to_json(a.weight)}, {"valuation", valuation_to_json(a.carrier)}});
  return Json{{"kind", kind_name(xi.kind())}, {"atoms", atoms}};
}

std::vector<LawReport> valuation_monad(const PosetRef& space, const HarnessOptions& opts) {
  std::vector<LawReport> out;
  const bool exhaustive = small(space, opts.exhaustive_points);
  std::vector<Valuation> grid;
  if (exhaustive)
    for (auto kind : kKinds)
      for (auto& nu : valuation_grid(space, kind, 4)) grid.push_back(nu);

  auto unit_suite = [&](const char* name, auto&& check) {
    Suite s(std::string("monad/V/") + name, space, opts);
    auto body_for = [&](const Valuation& nu) {
      return [&, nu](Rng&, Json& inst, std::string& cert) {
        inst["valuation"] = valuation_to_json(nu);
        Valuation got = check(nu);
        if (got == nu) return true;
        cert = "got " + describe_valuation(got);
        return false;
      };
    };
    for (std::size_t i = 0; i < grid.size(); ++i) s.run(instance_seed(opts.seed, s.report().law, i), body_for(grid[i]));
    s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
      return body_for(random_valuation(rng, space, random_kind(rng), 4))(rng, inst, cert);
    });
    if (exhaustive) s.note("exhaustive over weights with denominator <= 4");
    out.push_back(s.finish());
  };

  unit_suite("unit-left", [&](const Valuation& nu) {
    return flatten(SimpleValuation<Valuation>::dirac(nu), space);
  });
  unit_suite("unit-right", [&](const Valuation& nu) {
    std::vector<Atom<Valuation>> atoms;
    for (std::size_t x = 0; x < space->size(); ++x) atoms.push_back({nu.weight(x), unit_valuation(space, x)});
    return flatten(SimpleValuation<Valuation>(std::move(atoms), nu.kind()), space);
  });

  auto assoc_holds = [&](const SimpleValuation<SimpleValuation<Valuation>>& xi, std::string& cert) {
    Valuation lhs = flatten(flatten(xi), space);
    Valuation rhs = flatten(xi.map([&](const SimpleValuation<Valuation>& v) { return flatten(v, space); }), space);
    if (lhs == rhs) return true;
    cert = "flatten-then-flatten gives " + describe_valuation(lhs) + ", inner-first gives " + describe_valuation(rhs);
    return false;
  };

  Suite assoc("monad/V/associativity", space, opts);
  if (exhaustive) {
    // ½·δ(⅓·δν + ⅔·δν') + ½·δ(δν) for every ordered pair from the
    // denominator-2 grid, under each outer kind.
    std::vector<Valuation> coarse;
    for (auto kind : kKinds)
      for (auto& nu : valuation_grid(space, kind, 2)) coarse.push_back(nu);
    std::size_t index = 0;
    for (auto outer : kKinds)
      for (const auto& a : coarse)
        for (const auto& b : coarse)
          assoc.run(instance_seed(opts.seed, assoc.report().law, index++), [&](Rng&, Json& inst, std::string& cert) {
            inst["pair"] = Json::array({valuation_to_json(a), valuation_to_json(b)});
            inst["kind"] = kind_name(outer);
            SimpleValuation<Valuation> mixed({{Rational(1, 3), a}, {Rational(2, 3), b}}, ValuationKind::Prob);
            std::vector<Atom<SimpleValuation<Valuation>>> atoms = {
                {Rational(1, 2), mixed}, {Rational(1, 2), SimpleValuation<Valuation>::dirac(a)}};
            return assoc_holds(SimpleValuation<SimpleValuation<Valuation>>(std::move(atoms), outer), cert);
          });
    assoc.note("exhaustive over pairs with denominator <= 2");
  }
  assoc.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    const std::size_t n = 1 + rng() % 3;
    const ValuationKind outer = random_kind(rng);
    auto w = random_weights(rng, n, outer, 3);
    std::vector<Atom<SimpleValuation<Valuation>>> atoms;
    Json parts = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
      atoms.push_back({w[i], random_nested(rng, space)});
      parts.push_back(Json{{"weight", rational_to_json(w[i])}, {"nested", nested_to_json(atoms.back().carrier)}});
    }
    inst["kind"] = kind_name(outer);
    inst["atoms"] = parts;
    return assoc_holds(SimpleValuation<SimpleValuation<Valuation>>(std::move(atoms), outer), cert);
  });
  out.push_back(assoc.finish());
  return out;
}

// ----- hyperspace monads -----

HyperKind hyper_of(MonadKind m) {
  switch (m) {
    case MonadKind::Smyth: return HyperKind::Smyth;
    case MonadKind::Hoare: return HyperKind::Hoare;
    case MonadKind::QuasiLens: return HyperKind::QuasiLens;
    default: return HyperKind::Lens;
  }
}

std::vector<LawReport> hyperspace_monad(MonadKind monad, const PosetRef& space, const HarnessOptions& opts) {
  const HyperKind kind = hyper_of(monad);
  const std::string prefix = std::string("monad/") + monad_name(monad) + "/";
  std::vector<LawReport> out;
  std::optional<HyperSpace> tx;
  try {
    tx.emplace(kind, space);
  } catch (const Error& e) {
    for (const char* law : {"functor", "unit-left", "unit-right", "associativity"}) {
      Suite s(prefix + law, space, opts);
      s.set_verdict(Verdict::Skip);
      s.note(e.what());
      out.push_back(s.finish());
    }
    return out;
  }
  const FinitePoset& x = *space;
  const bool exhaustive = small(space, opts.exhaustive_points);
  auto elem_json = [&](const HyperElement& e) { return element_to_json(x, e); };

  {
    Suite s(prefix + "functor", space, opts);
    auto check = [&](const PointMap& f, const PointMap& g, const HyperElement& e, Json& inst, std::string& cert) {
      inst["element"] = elem_json(e);
      inst["f"] = point_map_to_json(x, x, f);
      inst["g"] = point_map_to_json(x, x, g);
      auto fe = hyper_map(x, x, f, e);
      if (!is_valid_element(x, fe)) {
        cert = "image under f is not an element: " + describe_element(x, fe);
        return false;
      }
      if (hyper_map(x, x, identity_map(x), e) != e) {
        cert = "identity moves the element";
        return false;
      }
      if (hyper_map(x, x, compose(g, f), e) != hyper_map(x, x, g, fe)) {
        cert = "mapping along g after f differs from mapping along the composite";
        return false;
      }
      return true;
    };
    if (exhaustive) {
      auto maps = enumerate_monotone_maps(x, x);
      std::size_t i = 0;
      for (const auto& f : maps)
        for (const auto& e : tx->elements())
          s.run(instance_seed(opts.seed, s.report().law, i++), [&](Rng& rng, Json& inst, std::string& cert) {
            return check(f, maps[rng() % maps.size()], e, inst, cert);
          });
      s.note("exhaustive over maps and elements");
    }
    s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
      auto f = random_point_map(rng, x, x);
      auto g = random_point_map(rng, x, x);
      return check(f, g, tx->element(rng() % tx->size()), inst, cert);
    });
    out.push_back(s.finish());
  }

  {
    Suite s(prefix + "unit-left", space, opts);
    for (std::size_t i = 0; i < tx->size(); ++i)
      s.run(instance_seed(opts.seed, s.report().law, i), [&](Rng&, Json& inst, std::string& cert) {
        const HyperElement& e = tx->element(i);
        inst["element"] = elem_json(e);
        auto got = tx->mult(hyper_unit(kind, *tx->poset(), i));
        if (got == e) return true;
        cert = "got " + describe_element(x, got);
        return false;
      });
    s.note("all elements");
    out.push_back(s.finish());
  }

  {
    Suite s(prefix + "unit-right", space, opts);
    const PointMap unit = tx->unit_map();
    for (std::size_t i = 0; i < tx->size(); ++i)
      s.run(instance_seed(opts.seed, s.report().law, i), [&](Rng&, Json& inst, std::string& cert) {
        const HyperElement& e = tx->element(i);
        inst["element"] = elem_json(e);
        auto nested = hyper_map(x, *tx->poset(), unit, e);
        if (!is_valid_element(*tx->poset(), nested)) {
          cert = "image of the element under the unit is not a nested element: " +
                 describe_element(*tx->poset(), nested);
          return false;
        }
        auto got = tx->mult(nested);
        if (got == e) return true;
        cert = "got " + describe_element(x, got);
        return false;
      });
    s.note("all elements");
    out.push_back(s.finish());
  }

  {
    Suite s(prefix + "associativity", space, opts);
    std::optional<HyperSpace> ttx;
    if (exhaustive) {
      try {
        ttx.emplace(kind, tx->poset());
      } catch (const Error&) {
      }
    }
    if (ttx && ttx->size() <= 12) {
      const PointMap mm = mult_map(*ttx, *tx);
      auto all = enumerate_elements(kind, *ttx->poset());
      for (std::size_t i = 0; i < all.size(); ++i)
        s.run(instance_seed(opts.seed, s.report().law, i), [&](Rng&, Json& inst, std::string& cert) {
          const HyperElement& top = all[i];
          inst["nested"] = describe_element(*ttx->poset(), top);
          auto lhs = tx->mult(ttx->mult(top));
          auto mapped = hyper_map(*ttx->poset(), *tx->poset(), mm, top);
          if (!is_valid_element(*tx->poset(), mapped)) {
            cert = "image under the multiplication is not a nested element";
            return false;
          }
          auto rhs = tx->mult(mapped);
          if (lhs == rhs) return true;
          cert = "outer-first gives " + describe_element(x, lhs) + ", inner-first gives " + describe_element(x, rhs);
          return false;
        });
      s.note("exhaustive over the third level");
    } else {
      s.note("third level sampled through generators");
    }
    s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
      // A third-level element given by generators: second-level elements,
      // each the closure of random first-level elements.
      const std::size_t k = 1 + rng() % 3;
      std::vector<HyperElement> gens;
      Json desc = Json::array();
      for (std::size_t i = 0; i < k; ++i) {
        gens.push_back(random_element(rng, kind, *tx->poset(), 0.3));
        desc.push_back(describe_element(*tx->poset(), gens.back()));
      }
      inst["generators"] = desc;
      auto lhs = tx->mult(mult_generated(kind, *tx->poset(), gens, gens));
      std::vector<HyperElement> flat;
      for (const auto& g : gens) flat.push_back(tx->mult(g));
      auto rhs = mult_generated(kind, x, flat, flat);
      if (lhs == rhs) return true;
      cert = "outer-first gives " + describe_element(x, lhs) + ", inner-first gives " + describe_element(x, rhs);
      return false;
    });
    out.push_back(s.finish());
  }
  return out;
}

// ----- prevision monads -----

PrevisionRole role_of(MonadKind m) {
  return m == MonadKind::Angelic ? PrevisionRole::Sublinear : PrevisionRole::Superlinear;
}

Rational random_mix_weight(Rng& rng) {
  static const char* options[] = {"1/3", "1/2", "2/3", "1/4", "3/4", "1"};
  return parse_rational(options[rng() % 6]);
}

// x ↦ w·base + (1-w)·unit(g(x)): monotone because g is.
std::vector<Prevision> prevision_family(Rng& rng, PrevisionRole role, const PosetRef& p, Json& desc) {
  auto g = random_point_map(rng, *p, *p);
  auto base = random_prevision(rng, role, p, ValuationKind::Prob, 2, 3);
  const Rational w = random_mix_weight(rng);
  desc = Json{{"base", prevision_to_json(base)}, {"weight", rational_to_json(w)}, {"g", point_map_to_json(*p, *p, g)}};
  std::vector<Prevision> out;
  for (std::size_t x = 0; x < p->size(); ++x) {
    std::vector<Atom<Prevision>> atoms = {{w, base}, {1 - w, Prevision::unit(role, p, g.image[x])}};
    out.push_back(algebra_prevision(SimpleValuation<Prevision>(std::move(atoms), ValuationKind::Prob)));
  }
  return out;
}

std::vector<Fork> fork_family(Rng& rng, const PosetRef& p, Json& desc) {
  auto g = random_point_map(rng, *p, *p);
  auto base = random_fork(rng, p, ValuationKind::Prob, 2, 3);
  const Rational w = random_mix_weight(rng);
  desc = Json{{"base", fork_to_json(base)}, {"weight", rational_to_json(w)}, {"g", point_map_to_json(*p, *p, g)}};
  std::vector<Fork> out;
  for (std::size_t x = 0; x < p->size(); ++x) {
    std::vector<Atom<Fork>> atoms = {{w, base}, {1 - w, fork_unit(p, g.image[x])}};
    out.push_back(algebra_fork(SimpleValuation<Fork>(std::move(atoms), ValuationKind::Prob)));
  }
  return out;
}

template <class T>
struct PrevisionOps;

template <>
struct PrevisionOps<Prevision> {
  static Prevision random(Rng& rng, PrevisionRole role, const PosetRef& p) {
    return random_prevision(rng, role, p, rng() % 2 ? ValuationKind::Prob : ValuationKind::Sub, 3, 3);
  }
  static Prevision unit(PrevisionRole role, const PosetRef& p, std::size_t x) { return Prevision::unit(role, p, x); }
  static std::vector<Prevision> family(Rng& rng, PrevisionRole role, const PosetRef& p, Json& d) {
    return prevision_family(rng, role, p, d);
  }
  static Prevision generated(PrevisionRole role, std::vector<Valuation> gens) {
    const Orientation side = role == PrevisionRole::Superlinear ? Orientation::Up : Orientation::Down;
    return retract_r(ConvexSet(side, std::move(gens)));
  }
  static Prevision algebra(const SimpleValuation<Prevision>& xi) { return algebra_prevision(xi); }
  static bool equal(const Prevision& a, const Prevision& b) { return prevision_equal(a, b); }
  static Json to_json(const Prevision& f) { return prevision_to_json(f); }
};

template <>
struct PrevisionOps<Fork> {
  static Fork random(Rng& rng, PrevisionRole, const PosetRef& p) {
    return random_fork(rng, p, rng() % 2 ? ValuationKind::Prob : ValuationKind::Sub, 3, 3);
  }
  static Fork unit(PrevisionRole, const PosetRef& p, std::size_t x) { return fork_unit(p, x); }
  static std::vector<Fork> family(Rng& rng, PrevisionRole, const PosetRef& p, Json& d) { return fork_family(rng, p, d); }
  // Both halves read off the same generators, which always gives a fork.
  static Fork generated(PrevisionRole, const std::vector<Valuation>& gens) {
    return retract_r(GenQuasiLens{ConvexSet(Orientation::Up, gens), ConvexSet(Orientation::Down, gens)});
  }
  static Fork algebra(const SimpleValuation<Fork>& xi) { return algebra_fork(xi); }
  static bool equal(const Fork& a, const Fork& b) { return fork_equal(a, b); }
  static Json to_json(const Fork& f) { return fork_to_json(f); }
};

template <class T>
std::vector<LawReport> prevision_monad(MonadKind monad, const PosetRef& space, const HarnessOptions& opts) {
  using Ops = PrevisionOps<T>;
  const PrevisionRole role = role_of(monad);
  const std::string prefix = std::string("monad/") + monad_name(monad) + "/";
  std::vector<LawReport> out;

  const bool exhaustive = small(space, opts.exhaustive_points);
  // Generated by one or two valuations of one kind with denominator <= 3.
  std::vector<T> grid;
  std::vector<Valuation> prob_grid;
  if (exhaustive) {
    prob_grid = valuation_grid(space, ValuationKind::Prob, 3);
    for (auto kind : {ValuationKind::Prob, ValuationKind::Sub}) {
      const auto gens = valuation_grid(space, kind, 3);
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j < gens.size(); ++j)
          grid.push_back(i == j ? Ops::generated(role, {gens[i]}) : Ops::generated(role, {gens[i], gens[j]}));
    }
  }

  Suite left(prefix + "unit-left", space, opts);
  auto left_body = [&](const std::vector<T>& family, const Json& desc) {
    return [&, desc](Rng&, Json& inst, std::string& cert) {
      inst["family"] = desc;
      for (std::size_t x = 0; x < space->size(); ++x) {
        if (!Ops::equal(kleisli_extend(family, Ops::unit(role, space, x)), family[x])) {
          cert = "extension of the unit at " + space->name(x) + " differs from the family's value there";
          return false;
        }
      }
      return true;
    };
  };
  if (exhaustive) {
    // x ↦ ½·base + ½·unit(g(x)) for every monotone g and grid base.
    std::size_t index = 0;
    for (const auto& g : enumerate_monotone_maps(*space, *space))
      for (const auto& base_gen : prob_grid) {
        const T base = Ops::generated(role, {base_gen});
        std::vector<T> family;
        for (std::size_t x = 0; x < space->size(); ++x) {
          std::vector<Atom<T>> atoms = {{Rational(1, 2), base}, {Rational(1, 2), Ops::unit(role, space, g.image[x])}};
          family.push_back(Ops::algebra(SimpleValuation<T>(std::move(atoms), ValuationKind::Prob)));
        }
        Json desc{{"base", Ops::to_json(base)}, {"weight", "1/2"}, {"g", point_map_to_json(*space, *space, g)}};
        left.run(instance_seed(opts.seed, left.report().law, index++), left_body(family, desc));
      }
    left.note("exhaustive over monotone maps and grid bases with denominator <= 3");
  }
  left.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    Json desc;
    auto family = Ops::family(rng, role, space, desc);
    return left_body(family, desc)(rng, inst, cert);
  });
  out.push_back(left.finish());

  Suite right(prefix + "unit-right", space, opts);
  std::vector<T> units;
  for (std::size_t x = 0; x < space->size(); ++x) units.push_back(Ops::unit(role, space, x));
  auto right_body = [&](const T& f) {
    return [&, f](Rng&, Json& inst, std::string& cert) {
      inst["value"] = Ops::to_json(f);
      auto got = kleisli_extend(units, f);
      if (Ops::equal(got, f)) return true;
      cert = "got " + Ops::to_json(got).dump();
      return false;
    };
  };
  for (std::size_t i = 0; i < grid.size(); ++i) right.run(instance_seed(opts.seed, right.report().law, i), right_body(grid[i]));
  if (exhaustive) right.note("exhaustive over sets of at most two generators with denominator <= 3");
  right.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    return right_body(Ops::random(rng, role, space))(rng, inst, cert);
  });
  out.push_back(right.finish());

  Suite assoc(prefix + "associativity", space, opts);
  if (space->size() > 6) assoc.note("choice-function expansion grows quickly beyond 6 points");
  assoc.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    Json d1, d2;
    auto first = Ops::family(rng, role, space, d1);
    auto second = Ops::family(rng, role, space, d2);
    auto f = Ops::random(rng, role, space);
    inst["first"] = d1;
    inst["second"] = d2;
    inst["value"] = Ops::to_json(f);
    std::vector<T> composed;
    for (const auto& v : first) composed.push_back(kleisli_extend(second, v));
    auto lhs = kleisli_extend(second, kleisli_extend(first, f));
    auto rhs = kleisli_extend(composed, f);
    if (Ops::equal(lhs, rhs)) return true;
    cert = "sequential " + Ops::to_json(lhs).dump() + " vs composed " + Ops::to_json(rhs).dump();
    return false;
  });
  out.push_back(assoc.finish());
  return out;
}

// ----- weak laws -----

Valuation mix_of(Rng& rng, const PosetRef& p, const std::vector<Valuation>& gens, ValuationKind kind) {
  auto w = random_weights(rng, gens.size(), ValuationKind::Prob, 3);
  std::vector<Rational> acc(p->size(), Rational(0));
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t i = 0; i < p->size(); ++i) acc[i] += w[k] * gens[k].weight(i);
  return Valuation(p, acc, kind);
}

// A mix with every point's mass moved to a random point on the set's side
// of it, then shrunk when the kind allows. These probe the boundary where
// only a non-principal open separates.
Valuation pushed(Rng& rng, const PosetRef& p, const ConvexSet& set, ValuationKind kind) {
  Valuation m = mix_of(rng, p, set.generators(), kind);
  std::vector<Rational> acc(p->size(), Rational(0));
  for (std::size_t x = 0; x < p->size(); ++x) {
    const auto reach =
        (set.orientation() == Orientation::Up ? p->up_of(x) : p->down_of(x)).indices();
    acc[reach[rng() % reach.size()]] += m.weight(x);
  }
  if (kind != ValuationKind::Prob) {
    const Rational scale = parse_rational(rng() % 2 ? "1/2" : "3/4");
    for (auto& a : acc) a *= scale;
  }
  return Valuation(p, acc, kind);
}

// Candidates near a generated set: mixes of its generators, perturbed mixes,
// pushed mixes and free draws.
Valuation candidate(Rng& rng, const PosetRef& p, const ConvexSet& set, ValuationKind kind) {
  switch (rng() % 4) {
    case 2: return pushed(rng, p, set, kind);
    case 0: return mix_of(rng, p, set.generators(), kind);
    case 1: {
      Valuation m = mix_of(rng, p, set.generators(), kind);
      auto other = random_valuation(rng, p, kind, 3);
      const Rational t = parse_rational(rng() % 2 ? "1/4" : "1/8");
      std::vector<Rational> acc(p->size());
      for (std::size_t i = 0; i < p->size(); ++i) acc[i] = (1 - t) * m.weight(i) + t * other.weight(i);
      return Valuation(p, acc, kind);
    }
    default: return random_valuation(rng, p, kind, 4);
  }
}

const ConvexSet& side_of(const LawImage& image, Orientation side) {
  return side == Orientation::Up ? *image.up : *image.down;
}

// Sampled agreement between the defining inequalities of mu and membership
// in a generated image.
bool sampled_membership(Rng& rng, LawKind law, const PosetRef& p, const HyperValuation& mu, const LawImage& image,
                        std::size_t samples, std::string& cert) {
  for (auto side : law_sides(law))
    for (std::size_t i = 0; i < samples; ++i) {
      auto nu = candidate(rng, p, side_of(image, side), mu.kind());
      const bool by_inequalities = lambda_member(law, p, mu, nu, side);
      const bool by_generators = member_convex_set(nu, side_of(image, side)).member;
      if (by_inequalities != by_generators) {
        cert = "candidate " + describe_valuation(nu) + (by_inequalities ? " satisfies" : " violates") +
               " the defining inequalities but is" + (by_generators ? "" : " not") + " in the generated set";
        return false;
      }
    }
  return true;
}

std::vector<LawReport> weak_law_suites(LawKind law, const PosetRef& space, const HarnessOptions& opts) {
  std::vector<LawReport> out;
  const std::string prefix = std::string("weak/") + law_name(law) + "/";
  const FinitePoset& x = *space;
  const bool exhaustive = small(space, opts.exhaustive_points);
  const bool grid = small(space, opts.grid_validation_points);
  const HyperKind hk = law_hyperspace(law);

  {
    Suite s(prefix + "unit", space, opts);
    auto body_for = [&](const Valuation& nu) {
      return [&, nu](Rng&, Json& inst, std::string& cert) {
        inst["valuation"] = valuation_to_json(nu);
        auto v = law_image_equal(unit_law_lhs(law, space, nu), unit_law_rhs(law, space, nu));
        if (!v.equal) cert = describe_verdict(v);
        return v.equal;
      };
    };
    if (exhaustive) {
      std::size_t i = 0;
      for (auto kind : kKinds)
        for (const auto& nu : valuation_grid(space, kind, 3))
          s.run(instance_seed(opts.seed, s.report().law, i++), body_for(nu));
      s.note("exhaustive over weights with denominator <= 3");
    }
    s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
      return body_for(random_valuation(rng, space, random_kind(rng), 4))(rng, inst, cert);
    });
    out.push_back(s.finish());
  }

  {
    Suite s(prefix + "mult-hyperspace", space, opts);
    std::optional<HyperSpace> tx;
    try {
      tx.emplace(hk, space);
    } catch (const Error& e) {
      s.set_verdict(Verdict::Skip);
      s.note(e.what());
    }
    if (tx) {
      s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
        auto xi = random_hyper_valuation(rng, hk, *tx->poset(), random_kind(rng), 1 + rng() % 3, 3, 0.3);
        inst["xi"] = hyper_valuation_to_json(*tx->poset(), xi);
        inst["second_level_points"] = tx->poset()->elements();
        auto lhs = tmult_law_lhs(law, *tx, xi);
        auto rhs = tmult_law_rhs(law, *tx, xi);
        auto v = law_image_equal(lhs, rhs);
        if (!v.equal) {
          cert = describe_verdict(v);
          return false;
        }
        auto flat = xi.map([&](const HyperElement& e) { return tx->mult(e); });
        if (!image_satisfies_member(law, space, flat, rhs)) {
          cert = "a reduced generator violates the defining inequalities";
          return false;
        }
        if (!sampled_membership(rng, law, space, flat, rhs, 2, cert)) return false;
        if (grid && !tmult_grid_check(law, *tx, xi, rhs, 8, 60)) {
          cert = "a mixed intermediate generator leaves the reduced set";
          return false;
        }
        return true;
      });
      if (grid) s.note("reduction validated on a weight grid of denominator 8");
    }
    out.push_back(s.finish());
  }

  {
    Suite s(prefix + "mult-valuation", space, opts);
    s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
      const std::size_t n = 1 + rng() % 3;
      const ValuationKind outer = random_kind(rng);
      const ValuationKind inner = random_kind(rng);
      auto w = random_weights(rng, n, outer, 3);
      std::vector<Atom<HyperValuation>> atoms;
      Json parts = Json::array();
      for (std::size_t i = 0; i < n; ++i) {
        atoms.push_back({w[i], random_hyper_valuation(rng, hk, x, inner, 2, 3)});
        parts.push_back(Json{{"weight", rational_to_json(w[i])}, {"mu", hyper_valuation_to_json(x, atoms.back().carrier)}});
      }
      inst["kind"] = kind_name(outer);
      inst["atoms"] = parts;
      SimpleValuation<HyperValuation> xi(std::move(atoms), outer);
      auto lhs = vmult_law_lhs(law, space, xi);
      auto rhs = vmult_law_rhs(law, space, xi);
      auto v = law_image_equal(lhs, rhs);
      if (!v.equal) {
        cert = describe_verdict(v);
        return false;
      }
      auto flat = flatten(xi);
      if (!image_satisfies_member(law, space, flat, rhs)) {
        cert = "a reduced generator violates the defining inequalities";
        return false;
      }
      if (!sampled_membership(rng, law, space, flat, rhs, 2, cert)) return false;
      if (grid && !vmult_grid_check(law, space, xi, rhs, 8, 60)) {
        cert = "a mixed inner generator leaves the reduced set";
        return false;
      }
      return true;
    });
    if (grid) s.note("reduction validated on a weight grid of denominator 8");
    out.push_back(s.finish());
  }

  {
    Suite s(prefix + "naturality", space, opts);
    auto body_for = [&](const PosetRef& target, const PointMap& f) {
      return [&, target, f](Rng& rng, Json& inst, std::string& cert) {
        auto mu = random_hyper_valuation(rng, hk, x, random_kind(rng), 3, 3);
        inst["target"] = poset_to_json(*target);
        inst["f"] = point_map_to_json(x, *target, f);
        inst["mu"] = hyper_valuation_to_json(x, mu);
        auto v = law_image_equal(naturality_lhs(law, space, target, f, mu), naturality_rhs(law, space, target, f, mu));
        if (!v.equal) cert = describe_verdict(v);
        return v.equal;
      };
    };
    if (exhaustive) {
      std::size_t i = 0;
      for (std::size_t n = 1; n <= 3; ++n)
        for (const auto& t : enumerate_posets(n)) {
          auto target = share(t);
          for (const auto& f : enumerate_monotone_maps(x, *target))
            s.run(instance_seed(opts.seed, s.report().law, i++), body_for(target, f));
        }
      s.note("all monotone maps into posets of at most 3 points");
    }
    s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
      auto target = random_poset(rng, 1 + rng() % 4);
      return body_for(target, random_point_map(rng, x, *target))(rng, inst, cert);
    });
    out.push_back(s.finish());
  }
  return out;
}

// ----- retraction -----

// Adds generators the canonical form must drop: a mix of two generators and
// a generator moved along the order away from the set's boundary.
std::vector<Valuation> with_redundancy(Rng& rng, std::vector<Valuation> gens, Orientation side) {
  const PosetRef p = gens.front().carrier_ref();
  if (gens.size() >= 2) {
    std::vector<Rational> acc(p->size());
    for (std::size_t i = 0; i < p->size(); ++i) acc[i] = (gens[0].weight(i) + gens[1].weight(i)) / 2;
    for (auto& a : acc) a.canonicalize();
    gens.emplace_back(p, acc, gens[0].kind());
  }
  const Valuation g = gens[rng() % gens.size()];
  for (std::size_t from = 0; from < p->size(); ++from) {
    if (g.weight(from) == 0) continue;
    const PointSet& reach = side == Orientation::Up ? p->up_of(from) : p->down_of(from);
    for (std::size_t to : reach.indices()) {
      if (to == from) continue;
      auto w = g.weights();
      w[to] += w[from];
      w[from] = 0;
      gens.emplace_back(p, w, g.kind());
      return gens;
    }
  }
  return gens;
}

std::vector<LawReport> retraction_suites(const PosetRef& space, const HarnessOptions& opts) {
  std::vector<LawReport> out;
  auto maps_for = [&](Rng& rng) { return test_maps(space, rng, 12); };

  for (auto role : {PrevisionRole::Superlinear, PrevisionRole::Sublinear}) {
    const std::string name = role == PrevisionRole::Superlinear ? "DN" : "AN";
    Suite rs("retraction/" + name + "/r-after-s", space, opts);
    rs.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
      auto kind = rng() % 2 ? ValuationKind::Prob : ValuationKind::Sub;
      auto gens = with_redundancy(rng, random_generators(rng, space, kind, 3, 3),
                                  role == PrevisionRole::Superlinear ? Orientation::Up : Orientation::Down);
      Prevision f(role, gens);
      inst["prevision"] = prevision_to_json(f);
      auto back = retract_r(section_s(f));
      if (!prevision_equal(back, f)) {
        cert = "generated sets differ";
        return false;
      }
      for (const auto& h : maps_for(rng))
        if (back(h) != f(h)) {
          cert = "values differ at " + monotone_map_to_json(h).dump();
          return false;
        }
      return true;
    });
    out.push_back(rs.finish());

    Suite sr("retraction/" + name + "/s-after-r", space, opts);
    const Orientation side = role == PrevisionRole::Superlinear ? Orientation::Up : Orientation::Down;
    sr.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
      auto kind = random_kind(rng);
      ConvexSet set(side, with_redundancy(rng, random_generators(rng, space, kind, 3, 3), side));
      inst["set"] = convex_set_to_json(set);
      auto round = section_s(retract_r(set));
      auto canon = canonicalize_generators(set);
      if (round.generators() != canon.generators()) {
        cert = "section of the retraction " + convex_set_to_json(round).dump() + " is not the canonical form " +
               convex_set_to_json(canon).dump();
        return false;
      }
      if (!genset_equal(round, set).equal) {
        cert = "round trip changed the set";
        return false;
      }
      return true;
    });
    out.push_back(sr.finish());
  }

  Suite rs("retraction/ADN/r-after-s", space, opts);
  rs.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    auto fork = random_fork(rng, space, rng() % 2 ? ValuationKind::Prob : ValuationKind::Sub, 3, 3);
    inst["fork"] = fork_to_json(fork);
    auto back = retract_r(section_s(fork));
    if (!fork_equal(back, fork)) {
      cert = "generated pairs differ";
      return false;
    }
    for (const auto& h : maps_for(rng))
      if (back.lower(h) != fork.lower(h) || back.upper(h) != fork.upper(h)) {
        cert = "values differ at " + monotone_map_to_json(h).dump();
        return false;
      }
    return true;
  });
  out.push_back(rs.finish());

  Suite sr("retraction/ADN/s-after-r", space, opts);
  sr.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    auto kind = random_kind(rng);
    auto base = random_generators(rng, space, kind, 3, 3);
    GenQuasiLens ql{ConvexSet(Orientation::Up, with_redundancy(rng, base, Orientation::Up)),
                    ConvexSet(Orientation::Down, with_redundancy(rng, base, Orientation::Down))};
    inst["up"] = convex_set_to_json(ql.up);
    inst["down"] = convex_set_to_json(ql.down);
    auto round = section_s(retract_r(ql));
    auto canon = canonicalize(ql);
    if (round.up.generators() != canon.up.generators() || round.down.generators() != canon.down.generators()) {
      cert = "section of the retraction is not the canonical pair";
      return false;
    }
    return true;
  });
  out.push_back(sr.finish());
  return out;
}

// ----- inverse images -----

std::vector<std::vector<Rational>> integrals(const std::vector<MonotoneMap>& hs, const std::vector<Valuation>& gens) {
  // c[j][i] = ∫ h_i d g_j
  std::vector<std::vector<Rational>> c(gens.size(), std::vector<Rational>(hs.size()));
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t i = 0; i < hs.size(); ++i) c[j][i] = integrate(gens[j], hs[i]);
  return c;
}

// Variables: point weights ν (one per point), then hull weights t (one per
// generator). Rows: ν in the generated set, kind total, plus caller rows.
LinearProgram section_program(const ConvexSet& set) {
  const FinitePoset& p = set.carrier();
  const std::size_t n = p.size(), m = set.generators().size();
  LinearProgram lp(n + m);
  std::vector<Rational> simplex(n + m, Rational(0));
  for (std::size_t j = 0; j < m; ++j) simplex[n + j] = 1;
  lp.add_constraint(simplex, Relation::Equal, Rational(1));
  for (const auto& u : p.upper_sets()) {
    if (u.empty()) continue;
    std::vector<Rational> row(n + m, Rational(0));
    u.for_each([&](std::size_t x) { row[x] = 1; });
    for (std::size_t j = 0; j < m; ++j) row[n + j] = -eval_open(set.generators()[j], u);
    lp.add_constraint(row, set.orientation() == Orientation::Up ? Relation::GreaterEqual : Relation::LessEqual,
                      Rational(0));
  }
  std::vector<Rational> total(n + m, Rational(0));
  for (std::size_t x = 0; x < n; ++x) total[x] = 1;
  if (set.kind() == ValuationKind::Prob) lp.add_constraint(total, Relation::Equal, Rational(1));
  if (set.kind() == ValuationKind::Sub) lp.add_constraint(total, Relation::LessEqual, Rational(1));
  return lp;
}

// Does every b in Δ_n^N satisfy max_j Σ_i b_i c[j][i] > 1?
bool grid_condition(const std::vector<std::vector<Rational>>& c, std::size_t n, unsigned big_n) {
  std::vector<unsigned> k(n, 0);
  bool all = true;
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned used) {
    if (!all) return;
    if (i == n) {
      if (used + n <= big_n) return;  // sum must exceed N - n
      Rational best;
      bool first = true;
      for (const auto& row : c) {
        Rational v = 0;
        for (std::size_t t = 0; t < n; ++t) v += row[t] * k[t];
        if (first || v > best) best = v;
        first = false;
      }
      if (!(best > big_n)) all = false;
      return;
    }
    for (unsigned v = 0; used + v <= big_n; ++v) {
      k[i] = v;
      rec(i + 1, used + v);
    }
  };
  rec(0, 0);
  return all;
}

std::vector<LawReport> inverse_image_suites(InverseImageLemma lemma, const PosetRef& space, std::size_t n,
                                            const HarnessOptions& opts) {
  const bool demonic = lemma == InverseImageLemma::Demonic;
  const std::string prefix = std::string("inverse-image/") + (demonic ? "DN" : "AN") + "/n=" + std::to_string(n);
  Suite s(prefix, space, opts);
  Suite search(prefix + "/grid-search", space, opts);
  std::size_t unresolved = 0, searched = 0, true_verdicts = 0;
  std::uint64_t first_unresolved = 0;
  std::size_t index = 0;
  Json unresolved_instance;
  s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    const std::uint64_t seed = instance_seed(opts.seed, s.report().law, index++);
    const PrevisionRole role = demonic ? PrevisionRole::Superlinear : PrevisionRole::Sublinear;
    auto f = random_prevision(rng, role, space, rng() % 2 ? ValuationKind::Prob : ValuationKind::Sub, 3, 4);
    std::vector<MonotoneMap> hs;
    Json hj = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
      hs.push_back(random_monotone_map(rng, space, 6).scaled(Rational(1, 2)));
      hj.push_back(monotone_map_to_json(hs.back()));
    }
    inst["prevision"] = prevision_to_json(f);
    inst["maps"] = hj;
    auto set = section_s(f);
    auto c = integrals(hs, set.generators());

    // Left side: an LP over the section itself.
    LinearProgram lp = section_program(set);
    const std::size_t vars = lp.num_vars();
    for (const auto& h : hs) {
      std::vector<Rational> row(vars, Rational(0));
      for (std::size_t x = 0; x < space->size(); ++x) row[x] = h(x);
      lp.add_constraint(row, demonic ? Relation::LessEqual : Relation::Greater, Rational(1));
    }
    const bool feasible = lp_feasible(lp).feasible;
    // Demonic: the section lies inside the union iff no point escapes it.
    const bool lhs = demonic ? !feasible : feasible;

    // Right side: maximin over the simplex of the forms.
    bool rhs;
    if (demonic) {
      rhs = maximin_over_simplex(c, Rational(1)).exceeds;
    } else {
      auto neg = c;
      for (auto& row : neg)
        for (auto& v : row) v = -v;
      rhs = -maximin_over_simplex(neg, Rational(-1)).value > 1;
    }
    if (lhs != rhs) {
      cert = std::string("section-side verdict ") + (lhs ? "true" : "false") + ", maximin verdict " +
             (rhs ? "true" : "false");
      return false;
    }
    true_verdicts += rhs;
    if (!demonic) {
      ++searched;
      if (rhs) {
        bool found = false;
        for (unsigned big_n = static_cast<unsigned>(n) + 1; big_n <= 64 && !found; ++big_n)
          found = grid_condition(c, n, big_n);
        if (!found) {
          if (unresolved++ == 0) {
            first_unresolved = seed;
            unresolved_instance = inst;
          }
        }
      } else if (grid_condition(c, n, 64)) {
        cert = "a finite grid condition holds although the maximin verdict is false";
        return false;
      }
    }
    return true;
  });
  s.note(std::to_string(true_verdicts) + " instances with a true verdict");
  std::vector<LawReport> out = {s.finish()};
  if (!demonic) {
    search.report().instances = searched;
    if (unresolved) {
      search.set_verdict(Verdict::Unresolved);
      search.report().instance = Json{{"example", unresolved_instance}}.dump();
      search.report().seed = first_unresolved;
    }
    search.note(std::to_string(unresolved) + " unresolved with N <= 64");
    out.push_back(search.finish());
  }
  return out;
}

}  // namespace

namespace {

// The empty space: V holds only the zero sub-probability and general
// valuations, every other monad holds nothing, so its laws hold vacuously.
std::vector<LawReport> empty_space_monad(MonadKind monad, const PosetRef& space, const HarnessOptions& opts) {
  const std::string prefix = std::string("monad/") + monad_name(monad) + "/";
  if (monad != MonadKind::Valuation) {
    Suite s(prefix + "empty-space", space, opts);
    s.note("no elements over the empty space");
    return {s.finish()};
  }
  std::vector<LawReport> out;
  Suite s(prefix + "empty-space", space, opts);
  for (auto kind : {ValuationKind::Sub, ValuationKind::General}) {
    s.run(instance_seed(opts.seed, s.report().law, out.size()), [&](Rng&, Json& inst, std::string& cert) {
      const Valuation zero(space, {}, kind);
      inst["valuation"] = valuation_to_json(zero);
      const Valuation left = flatten(SimpleValuation<Valuation>::dirac(zero), space);
      const Valuation right = flatten(SimpleValuation<Valuation>({}, kind), space);
      const Valuation nested =
          flatten(SimpleValuation<Valuation>::dirac(flatten(SimpleValuation<Valuation>::dirac(zero), space)), space);
      if (left == zero && right == zero && nested == zero) return true;
      cert = "the zero valuation is not fixed";
      return false;
    });
  }
  s.note("only the zero valuation exists");
  out.push_back(s.finish());
  return out;
}

}  // namespace

std::vector<LawReport> check_monad_laws(MonadKind monad, const PosetRef& space, const HarnessOptions& opts) {
  if (space->size() == 0) return empty_space_monad(monad, space, opts);
  switch (monad) {
    case MonadKind::Valuation: return valuation_monad(space, opts);
    case MonadKind::Smyth:
    case MonadKind::Hoare:
    case MonadKind::QuasiLens:
    case MonadKind::Lens: return hyperspace_monad(monad, space, opts);
    case MonadKind::Demonic:
    case MonadKind::Angelic: return prevision_monad<Prevision>(monad, space, opts);
    case MonadKind::Erratic: return prevision_monad<Fork>(monad, space, opts);
  }
  return {};
}

std::vector<LawReport> check_weak_laws(LawKind law, const PosetRef& space, const HarnessOptions& opts) {
  if (law == LawKind::Lens) throw Error(ErrorCode::Unsupported, "the lens law is checked through its transport");
  return weak_law_suites(law, space, opts);
}

LawReport check_cross_characterization(LawKind law, const PosetRef& space, const HarnessOptions& opts) {
  Suite s(std::string("cross/") + law_name(law), space, opts);
  std::size_t members = 0, non_members = 0, unnormalized = 0;
  s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    auto mu = random_hyper_valuation(rng, law_hyperspace(law), *space, random_kind(rng), 3, 3);
    inst["mu"] = hyper_valuation_to_json(*space, mu);
    unnormalized += mu.kind() == ValuationKind::General;
    auto image = lambda_apply(law, space, mu);
    for (auto side : law_sides(law)) {
      auto nu = candidate(rng, space, side_of(image, side), mu.kind());
      const bool by_inequalities = lambda_member(law, space, mu, nu, side);
      const bool by_generators = member_convex_set(nu, side_of(image, side)).member;
      (by_generators ? members : non_members) += 1;
      if (by_inequalities != by_generators) {
        inst["candidate"] = valuation_to_json(nu);
        inst["side"] = side == Orientation::Up ? "up" : "down";
        cert = std::string("defining inequalities say ") + (by_inequalities ? "member" : "non-member") +
               ", generated set says " + (by_generators ? "member" : "non-member");
        return false;
      }
    }
    return true;
  });
  s.note(std::to_string(members) + " members, " + std::to_string(non_members) + " non-members, " +
         std::to_string(unnormalized) + " with unnormalized mu");
  return s.finish();
}

LawReport check_transform_consistency(LawKind law, const PosetRef& space, const HarnessOptions& opts) {
  Suite s(std::string("transform/") + law_name(law), space, opts);
  s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    auto mu = random_hyper_valuation(rng, law_hyperspace(law), *space, random_kind(rng), 3, 3);
    inst["mu"] = hyper_valuation_to_json(*space, mu);
    auto image = lambda_apply(law, space, mu);
    for (const auto& h : test_maps(space, rng, 12)) {
      bool ok = true;
      if (law == LawKind::Sharp) ok = retract_r(*image.up)(h) == transform_phi(mu, h);
      if (law == LawKind::Flat) ok = retract_r(*image.down)(h) == transform_psi(mu, h);
      if (law == LawKind::Natural || law == LawKind::Lens) {
        auto fork = retract_r(GenQuasiLens{*image.up, *image.down});
        auto [low, high] = transform_theta(mu, h);
        ok = fork.lower(h) == low && fork.upper(h) == high;
      }
      if (!ok) {
        cert = "retracted image and transform differ at " + monotone_map_to_json(h).dump();
        return false;
      }
    }
    return true;
  });
  return s.finish();
}

std::vector<LawReport> check_retraction(const PosetRef& space, const HarnessOptions& opts) {
  return retraction_suites(space, opts);
}

std::vector<LawReport> check_walley(const PosetRef& space, const HarnessOptions& opts) {
  std::vector<LawReport> out;
  Suite s("walley/quasi-lens", space, opts);
  s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    auto ql = random_gen_quasi_lens(rng, space, rng() % 2 ? ValuationKind::Prob : ValuationKind::Sub, 3, 3);
    inst["up"] = convex_set_to_json(ql.up);
    inst["down"] = convex_set_to_json(ql.down);
    auto fork = retract_r(ql);
    const auto maps = test_maps(space, rng, 16);
    auto r = walley_check(fork, maps);
    if (!check_prevision_shape(fork.lower, maps) || !check_prevision_shape(fork.upper, maps)) {
      cert = "a half of the fork is not superlinear or sublinear on the test maps";
      return false;
    }
    if (!r.pass) {
      cert = r.side + " inequality fails for h = " + monotone_map_to_json(*r.h).dump() +
             ", h' = " + monotone_map_to_json(*r.h2).dump();
      return false;
    }
    if (!is_quasi_lens_pair(section_s(fork))) {
      cert = "section of the fork is not a quasi-lens";
      return false;
    }
    return true;
  });
  s.note(small(space, 4) ? "exhaustive {0..3} grid of maps; tested, not proven"
                         : "sampled maps; tested, not proven");
  out.push_back(s.finish());

  // Control: lower point mass at a, upper at b with a not below b.
  Suite control("walley/mismatched-control", space, opts);
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  for (std::size_t a = 0; a < space->size() && !pair; ++a)
    for (std::size_t b = 0; b < space->size() && !pair; ++b)
      if (!space->leq(a, b)) pair.emplace(a, b);
  if (!pair) {
    control.set_verdict(Verdict::Skip);
    control.note("every pair is comparable upward; no mismatched pair exists");
  } else {
    control.run(opts.seed, [&](Rng& rng, Json& inst, std::string& cert) {
      Fork bad{Prevision(PrevisionRole::Superlinear, {unit_valuation(space, pair->first)}),
               Prevision(PrevisionRole::Sublinear, {unit_valuation(space, pair->second)})};
      inst["fork"] = fork_to_json(bad);
      if (!walley_check(bad, test_maps(space, rng, 16)).pass) return true;
      cert = "mismatched pair accepted";
      return false;
    });
  }
  out.push_back(control.finish());
  return out;
}

std::vector<LawReport> check_inverse_image(InverseImageLemma lemma, const PosetRef& space, std::size_t forms,
                                           const HarnessOptions& opts) {
  if (forms < 1 || forms > 3) throw Error(ErrorCode::InvalidArgument, "between 1 and 3 maps");
  return inverse_image_suites(lemma, space, forms, opts);
}

LawReport check_minimax(const PosetRef& space, std::size_t forms, const HarnessOptions& opts) {
  Suite s("minimax/n=" + std::to_string(forms), space, opts);
  s.sample(opts.budget, [&](Rng& rng, Json& inst, std::string& cert) {
    auto gens = random_generators(rng, space, random_kind(rng), 4, 4);
    std::vector<MonotoneMap> hs;
    Json hj = Json::array();
    for (std::size_t i = 0; i < forms; ++i) {
      hs.push_back(random_monotone_map(rng, space, 4));
      hj.push_back(monotone_map_to_json(hs.back()));
    }
    inst["polytope"] = convex_set_to_json(ConvexSet(Orientation::Up, gens));
    inst["maps"] = hj;
    auto c = integrals(hs, gens);
    // max over a of min over ν.
    const Rational sup_inf = maximin_over_simplex(c, Rational(0)).value;
    // min over ν of max over a: minimize v with v >= Σ_j t_j c[j][i].
    const std::size_t m = gens.size();
    LinearProgram lp(m + 1);
    lp.set_free(m);
    std::vector<Rational> simplex(m + 1, Rational(1));
    simplex[m] = 0;
    lp.add_constraint(simplex, Relation::Equal, Rational(1));
    for (std::size_t i = 0; i < forms; ++i) {
      std::vector<Rational> row(m + 1);
      for (std::size_t j = 0; j < m; ++j) row[j] = c[j][i];
      row[m] = -1;
      lp.add_constraint(row, Relation::LessEqual, Rational(0));
    }
    std::vector<Rational> objective(m + 1, Rational(0));
    objective[m] = 1;
    auto r = lp_minimize(lp, objective);
    if (r.status != LpStatus::Optimal) {
      cert = "min-max program not optimal";
      return false;
    }
    if (r.value == sup_inf) return true;
    cert = "max-min " + format_rational(sup_inf) + " vs min-max " + format_rational(r.value);
    return false;
  });
  return s.finish();
}

LawReport check_discrete_degeneracy(std::size_t points, std::size_t max_atom, unsigned max_den) {
  auto space = share(antichain(points));
  HarnessOptions opts;
  Suite s("degeneracy/antichain-" + std::to_string(points), space, opts);
  std::vector<PointSet> atoms;
  for (const auto& l : enumerate_lenses(*space))
    if (l.count() <= max_atom) atoms.push_back(l);
  std::vector<Rational> splits;
  for (unsigned d = 2; d <= max_den; ++d)
    for (unsigned k = 1; k < d; ++k) {
      Rational r(k, d);
      r.canonicalize();
      splits.push_back(r);
    }
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

  auto check = [&](std::vector<std::pair<Rational, PointSet>> parts) {
    return [&, parts](Rng&, Json& inst, std::string& cert) {
      std::vector<Atom<HyperElement>> hatoms;
      for (const auto& [w, l] : parts) hatoms.push_back({w, lens_element(*space, l)});
      HyperValuation mu(hatoms, ValuationKind::Prob);
      inst["mu"] = hyper_valuation_to_json(*space, mu);
      auto image = lambda_apply(LawKind::Lens, space, mu);
      std::vector<Rational> weights;
      std::vector<std::vector<std::size_t>> choices;
      for (const auto& a : mu.atoms()) {
        weights.push_back(a.weight);
        choices.push_back(lens_members(a.carrier).indices());
      }
      std::vector<Valuation> combos;
      for (const auto& c : choice_combinations(weights, choices, ValuationKind::Prob))
        combos.push_back(from_simple(space, c));
      auto hull = convex_hull_vertices(combos);
      if (image.up->generators() != hull || image.down->generators() != hull) {
        cert = "up " + convex_set_to_json(*image.up).dump() + ", down " + convex_set_to_json(*image.down).dump();
        return false;
      }
      return true;
    };
  };
  std::size_t i = 0;
  for (const auto& a : atoms) s.run(instance_seed(0, s.report().law, i++), check({{Rational(1), a}}));
  for (std::size_t a = 0; a < atoms.size(); ++a)
    for (std::size_t b = a + 1; b < atoms.size(); ++b)
      for (const auto& w : splits)
        s.run(instance_seed(0, s.report().law, i++), check({{w, atoms[a]}, {1 - w, atoms[b]}}));
  s.note("all one- and two-atom valuations, atoms of at most " + std::to_string(max_atom) +
         " points, denominators <= " + std::to_string(max_den));
  return s.finish();
}

std::vector<LawReport> run_all_suites(const PosetRef& space, const HarnessOptions& opts) {
  std::vector<LawReport> out;
  auto add = [&](std::vector<LawReport> more) { out.insert(out.end(), more.begin(), more.end()); };
  for (auto m : all_monads()) add(check_monad_laws(m, space, opts));
  for (auto law : {LawKind::Sharp, LawKind::Flat, LawKind::Natural}) add(check_weak_laws(law, space, opts));
  for (auto law : {LawKind::Sharp, LawKind::Flat, LawKind::Natural, LawKind::Lens}) {
    out.push_back(check_cross_characterization(law, space, opts));
    out.push_back(check_transform_consistency(law, space, opts));
  }
  add(check_retraction(space, opts));
  add(check_walley(space, opts));
  for (std::size_t n = 1; n <= 3; ++n) {
    add(check_inverse_image(InverseImageLemma::Demonic, space, n, opts));
    add(check_inverse_image(InverseImageLemma::Angelic, space, n, opts));
    out.push_back(check_minimax(space, n, opts));
  }
  return out;
}

LawReport check_mutation(Mutation m, const HarnessOptions& opts) {
  LawReport report;
  report.law = std::string("mutation/") + mutation_name(m);
  report.seed = opts.seed;
  const auto start = Clock::now();
  ScopedMutation guard(m);
  HarnessOptions small_opts = opts;
  small_opts.budget = std::min<std::size_t>(opts.budget, 20);
  small_opts.grid_validation_points = 0;
  const std::vector<PosetRef> spaces = {
      make_poset({"b", "t", "f"}, {{"b", "t"}, {"b", "f"}}),
      make_poset({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}),
      share(antichain(2)),
      share(chain(3)),
  };
  // Suites in rough order of cost; stop at the first failing report.
  std::vector<std::function<std::vector<LawReport>(const PosetRef&)>> suites = {
      [&](const PosetRef& p) { return check_monad_laws(MonadKind::Valuation, p, small_opts); },
      [&](const PosetRef& p) { return check_monad_laws(MonadKind::Hoare, p, small_opts); },
      [&](const PosetRef& p) {
        std::vector<LawReport> r;
        for (auto law : {LawKind::Sharp, LawKind::Flat, LawKind::Natural})
          r.push_back(check_cross_characterization(law, p, small_opts));
        return r;
      },
      [&](const PosetRef& p) {
        std::vector<LawReport> r;
        for (auto law : {LawKind::Sharp, LawKind::Natural}) r.push_back(check_transform_consistency(law, p, small_opts));
        return r;
      },
      [&](const PosetRef& p) { return check_retraction(p, small_opts); },
      [&](const PosetRef& p) { return check_walley(p, small_opts); },
      [&](const PosetRef& p) { return check_weak_laws(LawKind::Sharp, p, small_opts); },
  };
  std::size_t checked = 0;
  for (const auto& suite : suites) {
    for (const auto& p : spaces) {
      for (const auto& r : suite(p)) {
        ++checked;
        if (r.verdict == Verdict::Fail) {
          report.verdict = Verdict::Pass;
          report.instances = checked;
          report.certificate = "caught by " + r.law;
          report.instance = r.instance;
          report.note = r.certificate;
          report.micros = static_cast<std::uint64_t>(
              std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count());
          return report;
        }
      }
    }
  }
  report.verdict = Verdict::Fail;
  report.instances = checked;
  report.certificate = "no suite failed under the mutation";
  report.micros =
      static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count());
  return report;
}

}  // namespace mforge
