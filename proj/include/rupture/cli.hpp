#pragma once

// Command implementations behind tools/rupture. Each command renders its
// report into a string so it can be tested without spawning a process.
// Exit codes: 0 clean, 1 semantic violation or negative finding, 2 parse or
// I/O error.

#include <fstream>
#include <sstream>

#include "rupture/document.hpp"

namespace rupture::cli {

using nlohmann::json;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

enum ExitCode : int { kOk = 0, kFinding = 1, kInputError = 2 };

/// Thrown inside commands; carries the exit code.
struct Failure {
  int code;
  std::string message;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInputError, path + ": cannot open file"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline io::Document load(const std::string& path) {
  auto text = read_file(path);
  try {
    return io::parse_document(text);
  } catch (const io::ParseError& e) {
    throw Failure{kInputError, path + ": " + e.what()};
  }
}

inline RupturedComplex load_ruptured(const std::string& path) {
  auto doc = load(path);
  if (auto* x = std::get_if<TruncatedComplex>(&doc.body)) return RupturedComplex(*x);
  if (auto* r = std::get_if<RupturedComplex>(&doc.body)) return *r;
  throw Failure{kInputError, path + ": expected a complex or ruptured document, got " + io::kind_name(doc.kind)};
}

inline RupturedFibrationData load_fibration(const std::string& path) {
  auto doc = load(path);
  if (auto* f = std::get_if<RupturedFibrationData>(&doc.body)) return *f;
  throw Failure{kInputError, path + ": expected a fibration document, got " + io::kind_name(doc.kind)};
}

template <class T>
T load_kind(const std::string& path, io::DocumentKind kind) {
  auto doc = load(path);
  if (doc.kind != kind)
    throw Failure{kInputError, path + ": expected a " + std::string(io::kind_name(kind)) + " document, got " +
                                   io::kind_name(doc.kind)};
  return std::get<T>(doc.body);
}

inline void require_valid(const Report& r, const std::string& what) {
  if (!r.ok()) throw Failure{kFinding, what + " is invalid:\n" + r.str()};
}

template <class F>
CliResult run(F&& body) {
  CliResult res;
  try {
    std::ostringstream os;
    res.code = body(os);
    res.out = os.str();
  } catch (const Failure& f) {
    res.code = f.code;
    res.err = f.message;
    if (!res.err.empty() && res.err.back() != '\n') res.err += '\n';
  } catch (const ExclusionConflict& e) {
    res.code = kFinding;
    res.err = std::string("exclusion conflict: ") + e.what() + "\n";
  } catch (const Error& e) {
    res.code = kFinding;
    res.err = std::string(e.what()) + "\n";
  }
  return res;
}

// ------------------------------------------------------------- rendering

inline std::string describe_mode(const std::optional<GapMode>& m) {
  if (!m) return "plain";
  std::string s = m->kind;
  if (auto* p = std::get_if<Permutation>(&m->payload)) s += " " + p->cycles();
  if (auto* c = std::get_if<UsageCounts>(&m->payload)) {
    std::string parts;
    for (const auto& [v, n] : *c) parts += (parts.empty() ? "" : ", ") + v + "=" + std::to_string(n);
    s += " {" + parts + "}";
  }
  if (auto* f = std::get_if<FeatureList>(&m->payload)) {
    std::string parts;
    for (const auto& x : *f) parts += (parts.empty() ? "" : "; ") + x;
    s += ": " + parts;
  }
  return s;
}

inline json mode_json(const std::optional<GapMode>& m) { return m ? io::gap_mode_json(*m) : json(nullptr); }

inline std::string named(const TruncatedComplex& x, SimplexId s) {
  const auto& l = x.label(s);
  return l.empty() ? to_string(s) : to_string(s) + " (" + l + ")";
}

inline json ids_json(const std::vector<SimplexId>& ids) {
  json out = json::array();
  for (auto s : ids) out.push_back(to_string(s));
  return out;
}

inline json report_json(const Report& r) {
  json v = json::array();
  for (const auto& item : r.items()) v.push_back({{"code", item.code}, {"message", item.message}});
  return v;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json trichotomy_json(const Trichotomy& t) {
  json j = {{"outcome", outcome_name(t)}};
  if (auto* c = std::get_if<CoherentlyFilled>(&t)) j["fillers"] = ids_json(c->fillers);
  if (auto* g = std::get_if<GapWitnessed>(&t)) j["mode"] = mode_json(g->mode);
  return j;
}

inline std::string trichotomy_text(const Trichotomy& t) {
  if (auto* c = std::get_if<CoherentlyFilled>(&t)) {
    std::string s = "coherent";
    for (auto f : c->fillers) s += " " + to_string(f);
    return s;
  }
  if (auto* g = std::get_if<GapWitnessed>(&t)) return "gapped (" + describe_mode(g->mode) + ")";
  return "open";
}

inline json counts_json(const TruncatedComplex& x) { return x.counts(); }

inline std::string counts_text(const TruncatedComplex& x) {
  std::string s;
  for (std::size_t n = 0; n <= x.dim_bound(); ++n) s += (n ? " " : "") + std::to_string(x.count(n));
  return s;
}

// ------------------------------------------------------------- validate

inline Report validate_any(const io::Document& doc) {
  Report r;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, TruncatedComplex>) r = validate_complex(b);
        else if constexpr (std::is_same_v<T, RupturedComplex>) r = validate_ruptured(b);
        else if constexpr (std::is_same_v<T, RupturedFibrationData>) r = validate_fibration(b);
        else if constexpr (std::is_same_v<T, io::DeriveTask>) {
          std::vector<std::string> vars;
          deriv::detail::collect_vars(b.term, vars);
          for (const auto& v : vars)
            if (!b.gamma.find(v)) r.add("unbound", "term variable '" + v + "' is not bound in gamma");
          if (!deriv::well_formed(b.goal)) r.add("goal", "malformed goal type");
          if (b.delta) r.append(deriv::validate_substitution(b.gamma, *b.delta, *b.sigma));
        }
      },
      doc.body);
  return r;
}

inline CliResult cmd_validate(const std::string& path, bool as_json) {
  return run([&](std::ostream& os) {
    auto doc = load(path);
    auto r = validate_any(doc);
    if (as_json) {
      os << dump({{"kind", io::kind_name(doc.kind)}, {"ok", r.ok()}, {"violations", report_json(r)}});
    } else if (r.ok()) {
      os << "ok: " << io::kind_name(doc.kind) << "\n";
    } else {
      os << r.str();
    }
    return r.ok() ? kOk : kFinding;
  });
}

// ------------------------------------------------------------- horns

inline CliResult cmd_horns(const std::string& path, std::size_t n, std::size_t k, bool as_json) {
  return run([&](std::ostream& os) {
    auto r = load_ruptured(path);
    require_valid(validate_ruptured(r), path);
    if (n < 1 || n > r.dim_bound() || k > n)
      throw Failure{kFinding, "horn index out of range: need 1 <= dim <= " + std::to_string(r.dim_bound()) +
                                  " and 0 <= missing <= dim"};
    json list = json::array();
    for (const auto& h : enumerate_horns(r.underlying, n, k)) {
      auto t = classify_horn(r, h);
      if (as_json) {
        json j = trichotomy_json(t);
        j["horn"] = io::horn_json(h);
        list.push_back(std::move(j));
      } else {
        os << to_string(h) << "  " << trichotomy_text(t) << "\n";
      }
    }
    if (as_json) os << dump({{"n", n}, {"k", k}, {"horns", list}});
    return kOk;
  });
}

// ------------------------------------------------------------- kan

inline CliResult cmd_kan(const std::string& path, std::size_t max_dim, bool as_json) {
  return run([&](std::ostream& os) {
    auto r = load_ruptured(path);
    require_valid(validate_complex(r.underlying), path);
    auto res = is_kan_up_to(r.underlying, max_dim);
    if (as_json) {
      os << dump({{"max_dim", max_dim},
                  {"kan", res.kan},
                  {"witness", res.unfilled ? io::horn_json(*res.unfilled) : json(nullptr)}});
    } else if (res.kan) {
      os << "kan up to dimension " << max_dim << ": yes\n";
    } else {
      os << "kan up to dimension " << max_dim << ": no\n";
      os << "unfilled horn: " << to_string(*res.unfilled) << "\n";
    }
    return res.kan ? kOk : kFinding;
  });
}

// ------------------------------------------------------------- transport

inline json transport_json(const TransportOutcome& t) {
  json j = {{"outcome", outcome_name(t)}};
  if (auto* c = std::get_if<TransportCoherent>(&t)) {
    j["target"] = c->target;
    j["lift"] = c->lift;
    j["multiplicity"] = c->multiplicity;
  }
  if (auto* g = std::get_if<TransportGapped>(&t)) j["mode"] = mode_json(g->mode);
  return j;
}

inline std::string transport_text(const RupturedFibrationData& f, const TransportOutcome& t) {
  if (auto* c = std::get_if<TransportCoherent>(&t))
    return "coherent -> " + named(f.total.underlying, {0, c->target}) + " via " + to_string(SimplexId{1, c->lift}) +
           (c->multiplicity > 1 ? " (" + std::to_string(c->multiplicity) + " coherent lifts)" : "");
  if (auto* g = std::get_if<TransportGapped>(&t)) {
    std::string s = "gapped (" + std::string(g->mode ? g->mode->kind : "plain") + ")";
    if (g->mode && !std::holds_alternative<std::monostate>(g->mode->payload)) s += "\n  witness: " + describe_mode(g->mode);
    return s;
  }
  return "open";
}

/// `path` is one edge, or several edges transported stepwise; for two edges
/// with a designated composite the functoriality horn is also reported.
inline CliResult cmd_transport(const std::string& path, Index term, const std::vector<Index>& edges, bool as_json) {
  return run([&](std::ostream& os) {
    auto f = load_fibration(path);
    require_valid(validate_fibration(f), path);
    if (edges.empty()) throw Failure{kFinding, "transport: --path needs at least one edge"};
    json steps = json::array();
    Index at = term;
    for (auto gamma : edges) {
      auto t = transport(f, at, gamma);
      json j = transport_json(t);
      j["term"] = at;
      j["edge"] = gamma;
      if (auto h = detect_transport_horn(f, at, gamma)) j["transport_horn"] = true;
      else j["transport_horn"] = false;
      if (!as_json) {
        os << "transport " << named(f.total.underlying, {0, at}) << " along " << named(f.base.underlying, {1, gamma})
           << ": " << transport_text(f, t) << "\n";
        if (std::holds_alternative<TransportGapped>(t)) os << "transport horn: inhabited\n";
      }
      steps.push_back(std::move(j));
      auto* c = std::get_if<TransportCoherent>(&t);
      if (!c) break;
      at = c->target;
    }
    json out = {{"steps", steps}};
    if (edges.size() == 2) {
      auto it = std::find_if(f.composites.begin(), f.composites.end(), [&](const CompositeDesignation& c) {
        return c.first == edges[0] && c.second == edges[1];
      });
      if (it != f.composites.end()) {
        auto direct = transport(f, term, it->composite);
        auto horn = detect_functoriality_horn(f, term, edges[0], edges[1]);
        json c = transport_json(direct);
        c["edge"] = it->composite;
        out["composite"] = c;
        out["functoriality_horn"] = horn.has_value();
        if (!as_json) {
          os << "composite " << named(f.base.underlying, {1, it->composite}) << ": " << transport_text(f, direct)
             << "\n";
          os << "functoriality horn: " << (horn ? "inhabited" : "not inhabited") << "\n";
        }
      }
    }
    if (as_json) os << dump(out);
    return kOk;
  });
}

// ------------------------------------------------------------- monodromy

inline CliResult cmd_monodromy(const std::string& fib_path, const std::string& task_path, bool as_json) {
  return run([&](std::ostream& os) {
    auto f = load_fibration(fib_path);
    auto task = load_kind<io::CoveringTask>(task_path, io::DocumentKind::CoveringTask);
    require_valid(validate_fibration(f), fib_path);
    require_valid(check_covering(f), fib_path);
    auto m = monodromy_ruptured(f, task.basepoint, task.loops);
    const auto& E = f.total.underlying;
    json loops = json::array();
    json registry = json::array();
    if (!as_json) {
      os << "basepoint: " << named(f.base.underlying, {0, m.basepoint}) << "\n";
      os << "fiber:";
      for (auto e : m.fiber) os << " " << e;
      os << "\n";
    }
    for (std::size_t l = 0; l < m.loops.size(); ++l) {
      loops.push_back({{"path", to_string(m.loops[l])},
                       {"permutation", m.monodromies[l].cycles()},
                       {"images", m.monodromies[l].images()}});
      if (!as_json) {
        os << "loop " << l << ": " << to_string(m.loops[l]) << "\n";
        os << "  permutation: " << m.monodromies[l].cycles() << "\n";
      }
      for (const auto& p : m.registry) {
        if (p.loop != l) continue;
        auto end = path_end(E, p.lift);
        registry.push_back({{"loop", p.loop},
                            {"start", p.start},
                            {"end", end},
                            {"outcome", p.gapped ? "gapped" : "coherent"},
                            {"mode", mode_json(p.mode)},
                            {"lift", to_string(p.lift)}});
        if (!as_json) {
          os << "  start " << p.start << ": ";
          if (p.gapped) os << "gapped (" << describe_mode(p.mode) << "), lift ends at " << end << "\n";
          else os << "coherent, lift closes\n";
        }
      }
    }
    if (as_json) {
      os << dump({{"basepoint", m.basepoint},
                  {"fiber", m.fiber},
                  {"loops", loops},
                  {"registry", registry},
                  {"gapped", m.gapped_count()}});
    } else {
      os << "gapped based-loop problems: " << m.gapped_count() << "\n";
    }
    return kOk;
  });
}

// ------------------------------------------------------------- core

inline json map_json(const SimplicialMap& m) {
  json j = json::object();
  for (std::size_t n = 0; n < m.per_dim.size(); ++n) j[std::to_string(n)] = m.per_dim[n];
  return j;
}

inline CliResult cmd_core(const std::string& path, bool as_json) {
  return run([&](std::ostream& os) {
    auto r = load_ruptured(path);
    require_valid(validate_ruptured(r), path);
    auto core = coherent_core(r);
    if (as_json) {
      os << dump({{"core", io::to_json(io::make_document(core.complex))}, {"inclusion", map_json(core.inclusion)}});
      return kOk;
    }
    os << "coherent core simplices: " << counts_text(core.complex) << "\n";
    for (std::size_t n = 0; n < core.inclusion.per_dim.size(); ++n) {
      os << "dim " << n << ":";
      for (std::size_t i = 0; i < core.inclusion.per_dim[n].size(); ++i)
        os << " " << named(r.underlying, {n, core.inclusion.per_dim[n][i]});
      os << "\n";
    }
    return kOk;
  });
}

// ------------------------------------------------------------- product

inline CliResult cmd_product(const std::string& a, const std::string& b, bool as_json) {
  return run([&](std::ostream& os) {
    auto r = load_ruptured(a);
    auto s = load_ruptured(b);
    require_valid(validate_ruptured(r), a);
    require_valid(validate_ruptured(s), b);
    auto p = product(r, s);
    if (as_json) {
      os << io::serialize(io::make_document(p));
      return kOk;
    }
    os << "product simplices: " << counts_text(p.underlying) << "\n";
    std::size_t coh = 0;
    for (const auto& c : p.coh) coh += c.size();
    os << "coherent simplices: " << coh << "\n";
    os << "gapped horns: " << p.gap.size() << "\n";
    for (const auto& [h, mode] : p.gap) os << "  " << to_string(h) << "  " << describe_mode(mode) << "\n";
    return kOk;
  });
}

// ------------------------------------------------------------- compose

inline CliResult cmd_compose(const std::string& fpath, const std::string& gpath, bool as_json) {
  return run([&](std::ostream& os) {
    auto f = load_fibration(fpath);
    auto g = load_fibration(gpath);
    require_valid(validate_fibration(f), fpath);
    require_valid(validate_fibration(g), gpath);
    auto c = compose_fibrations(f, g);
    if (as_json) {
      os << io::serialize(io::make_document(c));
      return kOk;
    }
    os << "composite total simplices: " << counts_text(c.total.underlying) << "\n";
    os << "composite base simplices: " << counts_text(c.base.underlying) << "\n";
    os << "gapped lifting problems: " << c.gap_lifts.size() << "\n";
    for (const auto& [key, mode] : c.gap_lifts) {
      auto step = decompose_lift(f, g, key);
      os << "  " << to_string(key) << "  " << describe_mode(mode) << "  (steps: " << outcome_name(step.first) << ", "
         << outcome_name(step.second) << ")\n";
    }
    return kOk;
  });
}

// ------------------------------------------------------------- derive

inline json certificate_json(const deriv::DerivabilityResult& r) {
  json cert = json::object();
  for (const auto& [v, verdict] : r.certificate.verdicts)
    cert[v] = {{"annotation", deriv::annotation_name(verdict.annotation)},
               {"count", verdict.count},
               {"satisfied", verdict.satisfied}};
  return {{"verdict", r.derivable() ? "derivable" : "underivable"},
          {"certificate", cert},
          {"type_errors", r.type_errors}};
}

inline void certificate_text(std::ostream& os, const char* ctx, const deriv::Term& t, const deriv::Type& goal,
                             const deriv::DerivabilityResult& r) {
  os << ctx << " |- " << deriv::to_string(t) << " : " << deriv::to_string(goal) << "  "
     << (r.derivable() ? "derivable" : "underivable") << "\n";
  for (const auto& [v, verdict] : r.certificate.verdicts)
    os << "  " << v << "  " << deriv::annotation_name(verdict.annotation) << "  count " << verdict.count << "  "
       << (verdict.satisfied ? "ok" : "violated") << "\n";
  for (const auto& e : r.type_errors) os << "  type error: " << e << "\n";
}

inline CliResult cmd_derive(const std::string& path, bool as_json) {
  return run([&](std::ostream& os) {
    auto task = load_kind<io::DeriveTask>(path, io::DocumentKind::DeriveTask);
    require_valid(validate_any({io::DocumentKind::DeriveTask, task}), path);
    auto before = deriv::check_derivable(task.gamma, task.term, task.goal);
    json out = {{"gamma", certificate_json(before)}};
    if (!as_json) certificate_text(os, "gamma", task.term, task.goal, before);
    if (task.delta) {
      auto moved = deriv::apply_substitution(task.term, *task.sigma);
      auto after = deriv::check_derivable(*task.delta, moved, task.goal);
      auto horn = deriv::detect_derivability_horn(task.gamma, *task.delta, *task.sigma, task.term, task.goal);
      out["substituted"] = io::term_json(moved);
      out["delta"] = certificate_json(after);
      out["horn"] = horn.has_value();
      if (!as_json) {
        certificate_text(os, "delta", moved, task.goal, after);
        os << "derivability horn: " << (horn ? "inhabited" : "not inhabited") << "\n";
      }
    }
    if (as_json) os << dump(out);
    return kOk;
  });
}

// ------------------------------------------------------------- judgments

inline json store_json(const judg::WitnessStore& s) {
  json entries = json::array();
  for (const auto& e : s.entries())
    entries.push_back({{"id", e.id},
                       {"judgment", io::atom_json(e.judgment)},
                       {"polarity", judg::polarity_name(e.polarity)},
                       {"payload", e.payload}});
  json j = {{"level", s.level()}, {"entries", entries}};
  if (s.universe()) j["universe"] = *s.universe();
  return j;
}

inline CliResult cmd_judgments(const std::string& path, bool as_json) {
  return run([&](std::ostream& os) {
    auto script = load_kind<std::vector<io::JudgmentCommand>>(path, io::DocumentKind::JudgmentScript);
    judg::WitnessStore store;
    json log = json::array();
    json violations = json::array();
    std::ostringstream text;
    using Op = io::JudgmentCommand::Op;
    for (std::size_t i = 0; i < script.size(); ++i) {
      const auto& c = script[i];
      json entry = {{"index", i}};
      std::string line;
      switch (c.op) {
        case Op::Add: {
          const auto label = "add " + judg::to_string(c.judgment) + " " + judg::polarity_name(c.polarity);
          entry["op"] = "add";
          try {
            auto res = store.add_witness(c.judgment, c.polarity, c.payload);
            if (auto* v = std::get_if<judg::ExclusionViolation>(&res)) {
              entry["result"] = "rejected";
              entry["conflict"] = v->conflicting_id;
              violations.push_back({{"index", i}, {"code", "exclusion"}, {"conflict", v->conflicting_id}});
              line = label + ": rejected, exclusion conflict with " + v->conflicting_id;
            } else {
              store = std::get<judg::WitnessStore>(std::move(res));
              entry["result"] = store.entries().back().id;
              line = label + ": " + store.entries().back().id;
            }
          } catch (const judg::UnknownAtom& e) {
            entry["result"] = "rejected";
            violations.push_back({{"index", i}, {"code", "unknown-atom"}, {"message", e.what()}});
            line = label + ": rejected, " + e.what();
          }
          break;
        }
        case Op::Query: {
          auto ws = store.witnesses(c.judgment);
          std::string state = ws.empty() ? "open" : judg::polarity_name(ws.front()->polarity);
          json ids = json::array();
          line = "query " + judg::to_string(c.judgment) + ": " + state;
          for (auto* w : ws) {
            ids.push_back(w->id);
            line += " " + w->id;
          }
          entry["op"] = "query";
          entry["state"] = state;
          entry["witnesses"] = ids;
          break;
        }
        case Op::IsOpen: {
          bool open = judg::is_open(store, c.judgment);
          entry["op"] = "is_open";
          entry["result"] = open;
          line = "is_open " + judg::to_string(c.judgment) + ": " + (open ? "true" : "false");
          break;
        }
        case Op::Horn: {
          entry["op"] = "horn";
          const auto label = "horn " + c.first + " " + c.second + " " + c.gap;
          try {
            judg::make_horn(store, c.first, c.second, c.gap);
            entry["result"] = "inhabited";
            line = label + ": inhabited";
          } catch (const judg::HornError& e) {
            entry["result"] = "rejected";
            entry["error"] = judg::horn_error_name(e.kind());
            line = label + ": rejected (" + judg::horn_error_name(e.kind()) + "), " + e.what();
          }
          break;
        }
        case Op::LevelUp: {
          store = store.level_up();
          entry["op"] = "level_up";
          entry["result"] = store.level();
          line = "level_up: level " + std::to_string(store.level()) + ", " +
                 std::to_string(store.universe()->size()) + " base atoms";
          break;
        }
        case Op::CoherentFragment: {
          bool frag = judg::is_coherent_fragment(store);
          entry["op"] = "coherent_fragment";
          entry["result"] = frag;
          line = std::string("coherent_fragment: ") + (frag ? "true" : "false");
          break;
        }
      }
      log.push_back(std::move(entry));
      text << line << "\n";
    }
    if (as_json) {
      os << dump({{"log", log}, {"store", store_json(store)}, {"violations", violations}});
    } else {
      os << text.str();
      os << "store: level " << store.level() << ", " << store.entries().size() << " entries\n";
      for (const auto& e : store.entries()) {
        os << "  " << e.id << "  " << judg::to_string(e.judgment) << "  " << judg::polarity_name(e.polarity);
        if (!e.payload.is_null()) os << "  " << e.payload.dump();
        os << "\n";
      }
      os << "violations: " << violations.size() << "\n";
    }
    return violations.empty() ? kOk : kFinding;
  });
}

// ------------------------------------------------------------- format

/// Canonical re-serialization of any document.
inline CliResult cmd_format(const std::string& path) {
  return run([&](std::ostream& os) {
    os << io::serialize(load(path));
    return kOk;
  });
}

}  // namespace rupture::cli
