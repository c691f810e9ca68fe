#pragma once

// JSON document format "rupture-kit/1". Every document carries
//   {"format": "rupture-kit/1", "kind": <kind>, ...body}
// with kind one of complex | ruptured | fibration | covering-task |
// derive-task | judgment-script. Simplices are referenced by (dimension,
// index); face rows list d_0..d_n.

#include <set>
#include <string>
#include <variant>

#include <json.hpp>

#include "rupture/covering.hpp"
#include "rupture/derivability.hpp"
#include "rupture/judgments.hpp"

namespace rupture::io {

using nlohmann::json;

inline constexpr const char* kFormat = "rupture-kit/1";

/// Malformed input; `where` is a line:column position or a JSON pointer.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what) : Error(where + ": " + what), where_(where) {}
  [[nodiscard]] const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// ------------------------------------------------------------- helpers

namespace detail {

inline std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

inline void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path.empty() ? "/" : path, "expected an object");
}

inline void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  expect_object(j, path);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(join(path, key), "unexpected key");
  }
}

inline const json& require(const json& j, const std::string& path, const char* key) {
  expect_object(j, path);
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(join(path, key), "missing required key");
  return *it;
}

inline std::size_t as_index(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

inline std::size_t as_dim_key(const std::string& key, const std::string& path) {
  if (key.empty() || key.size() > 6 || key.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(path, "dimension keys must be decimal integers");
  return static_cast<std::size_t>(std::stoul(key));
}

inline std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

// ------------------------------------------------------------- complexes

inline TruncatedComplex parse_complex_body(const json& j, const std::string& path) {
  using namespace detail;
  const auto dim_bound = as_index(require(j, path, "dim_bound"), join(path, "dim_bound"));
  if (dim_bound > 16) throw ParseError(join(path, "dim_bound"), "dimension bound too large");
  std::vector<std::size_t> counts(dim_bound + 1, 0);
  TruncatedComplex::LabelTable labels(dim_bound + 1);
  const auto& simplices = require(j, path, "simplices");
  expect_object(simplices, join(path, "simplices"));
  for (const auto& [key, value] : simplices.items()) {
    const auto sp = join(join(path, "simplices"), key);
    const auto n = as_dim_key(key, sp);
    if (n > dim_bound) throw ParseError(sp, "dimension exceeds dim_bound");
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) labels[n].push_back(as_string(value[i], sp + "/" + std::to_string(i)));
      counts[n] = value.size();
    } else {
      counts[n] = as_index(value, sp);
    }
  }
  TruncatedComplex::FaceTable faces(dim_bound + 1);
  if (auto it = j.find("faces"); it != j.end()) {
    expect_object(*it, join(path, "faces"));
    for (const auto& [key, rows] : it->items()) {
      const auto fp = join(join(path, "faces"), key);
      const auto n = as_dim_key(key, fp);
      if (n == 0 || n > dim_bound) throw ParseError(fp, "face rows are only allowed for dimensions 1..dim_bound");
      if (!rows.is_array()) throw ParseError(fp, "expected an array of face rows");
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto rp = fp + "/" + std::to_string(r);
        if (!rows[r].is_array()) throw ParseError(rp, "expected a face row");
        std::vector<Index> row;
        for (std::size_t i = 0; i < rows[r].size(); ++i) row.push_back(as_index(rows[r][i], rp + "/" + std::to_string(i)));
        faces[n].push_back(std::move(row));
      }
    }
  }
  return TruncatedComplex(dim_bound, std::move(counts), std::move(faces), std::move(labels));
}

inline json complex_body(const TruncatedComplex& x) {
  json simplices = json::object();
  json faces = json::object();
  for (std::size_t n = 0; n <= x.dim_bound(); ++n) {
    const auto& labels = x.label_table()[n];
    bool labelled = std::any_of(labels.begin(), labels.end(), [](const std::string& l) { return !l.empty(); });
    simplices[std::to_string(n)] = labelled ? json(labels) : json(x.count(n));
    if (n > 0 && !x.face_table()[n].empty()) faces[std::to_string(n)] = x.face_table()[n];
  }
  return {{"dim_bound", x.dim_bound()}, {"simplices", simplices}, {"faces", faces}};
}

// ------------------------------------------------------------- gap modes and horns

inline GapMode parse_gap_mode(const json& j, const std::string& path) {
  using namespace detail;
  only_keys(j, path, {"kind", "payload"});
  GapMode m;
  m.kind = as_string(require(j, path, "kind"), join(path, "kind"));
  const auto pp = join(path, "payload");
  json payload = j.contains("payload") ? j["payload"] : json::object();
  expect_object(payload, pp);
  if (m.kind == "plain") {
    if (!payload.empty()) throw ParseError(pp, "plain gap modes carry no payload");
  } else if (m.kind == "monodromy") {
    only_keys(payload, pp, {"permutation"});
    const auto& perm = require(payload, pp, "permutation");
    if (!perm.is_array()) throw ParseError(join(pp, "permutation"), "expected an array");
    std::vector<std::size_t> images;
    for (std::size_t i = 0; i < perm.size(); ++i) images.push_back(as_index(perm[i], join(pp, "permutation") + "/" + std::to_string(i)));
    m.payload = Permutation(std::move(images));
  } else if (m.kind == "resource") {
    only_keys(payload, pp, {"counts"});
    const auto& counts = require(payload, pp, "counts");
    expect_object(counts, join(pp, "counts"));
    UsageCounts c;
    for (const auto& [v, n] : counts.items()) c[v] = as_index(n, join(join(pp, "counts"), v));
    m.payload = std::move(c);
  } else if (m.kind == "semantic") {
    only_keys(payload, pp, {"features"});
    const auto& feats = require(payload, pp, "features");
    if (!feats.is_array()) throw ParseError(join(pp, "features"), "expected an array");
    FeatureList f;
    for (std::size_t i = 0; i < feats.size(); ++i) f.push_back(as_string(feats[i], join(pp, "features") + "/" + std::to_string(i)));
    m.payload = std::move(f);
  } else {
    throw ParseError(join(path, "kind"), "unknown gap mode kind '" + m.kind + "'");
  }
  if (auto r = validate_gap_mode(m); !r.ok()) throw ParseError(path, r.items().front().message);
  return m;
}

inline json gap_mode_json(const GapMode& m) {
  json payload = json::object();
  if (auto* p = std::get_if<Permutation>(&m.payload)) payload["permutation"] = p->images();
  if (auto* c = std::get_if<UsageCounts>(&m.payload)) payload["counts"] = *c;
  if (auto* f = std::get_if<FeatureList>(&m.payload)) payload["features"] = *f;
  return {{"kind", m.kind}, {"payload", payload}};
}

/// {"n", "k", "faces": {"<i>": index}}, extra keys allowed by the caller.
inline HornSpec parse_horn(const json& j, const std::string& path) {
  using namespace detail;
  const auto n = as_index(require(j, path, "n"), join(path, "n"));
  const auto k = as_index(require(j, path, "k"), join(path, "k"));
  if (n < 1 || n > 16) throw ParseError(join(path, "n"), "horn dimension must be in 1..16");
  if (k > n) throw ParseError(join(path, "k"), "missing-face index exceeds n");
  const auto& faces = require(j, path, "faces");
  expect_object(faces, join(path, "faces"));
  std::map<std::size_t, Index> fm;
  for (const auto& [key, v] : faces.items()) {
    const auto fp = join(join(path, "faces"), key);
    const auto i = as_dim_key(key, fp);
    if (i > n || i == k) throw ParseError(fp, "face position must be in 0..n and differ from k");
    fm[i] = as_index(v, fp);
  }
  if (fm.size() != n) throw ParseError(join(path, "faces"), "a horn assigns exactly n faces");
  return make_horn_spec(n, k, fm);
}

inline json horn_json(const HornSpec& h) {
  json faces = json::object();
  for (std::size_t i = 0; i <= h.n; ++i)
    if (i != h.k) faces[std::to_string(i)] = h.faces[i];
  return {{"n", h.n}, {"k", h.k}, {"faces", faces}};
}

// ------------------------------------------------------------- ruptured

inline RupturedComplex parse_ruptured_body(const json& j, const std::string& path) {
  using namespace detail;
  RupturedComplex r(parse_complex_body(j, path));
  if (auto it = j.find("coh"); it != j.end()) {
    expect_object(*it, join(path, "coh"));
    for (const auto& [key, idx] : it->items()) {
      const auto cp = join(join(path, "coh"), key);
      const auto n = as_dim_key(key, cp);
      if (n > r.dim_bound()) throw ParseError(cp, "dimension exceeds dim_bound");
      if (!idx.is_array()) throw ParseError(cp, "expected an index array");
      for (std::size_t i = 0; i < idx.size(); ++i) r.coh[n].insert(as_index(idx[i], cp + "/" + std::to_string(i)));
    }
  }
  if (auto it = j.find("gap"); it != j.end()) {
    if (!it->is_array()) throw ParseError(join(path, "gap"), "expected an array");
    for (std::size_t g = 0; g < it->size(); ++g) {
      const auto gp = join(path, "gap") + "/" + std::to_string(g);
      const auto& entry = (*it)[g];
      only_keys(entry, gp, {"n", "k", "faces", "mode"});
      auto h = parse_horn(entry, gp);
      std::optional<GapMode> mode;
      if (entry.contains("mode")) mode = parse_gap_mode(entry["mode"], join(gp, "mode"));
      if (!r.gap.emplace(h, std::move(mode)).second) throw ParseError(gp, "duplicate gapped horn");
    }
  }
  return r;
}

inline json ruptured_body(const RupturedComplex& r) {
  json j = complex_body(r.underlying);
  json coh = json::object();
  for (std::size_t n = 0; n < r.coh.size(); ++n)
    if (!r.coh[n].empty()) coh[std::to_string(n)] = std::vector<Index>(r.coh[n].begin(), r.coh[n].end());
  json gap = json::array();
  for (const auto& [h, mode] : r.gap) {
    json e = horn_json(h);
    if (mode) e["mode"] = gap_mode_json(*mode);
    gap.push_back(std::move(e));
  }
  j["coh"] = coh;
  j["gap"] = gap;
  return j;
}

// ------------------------------------------------------------- fibrations

inline RupturedFibrationData parse_fibration_body(const json& j, const std::string& path) {
  using namespace detail;
  RupturedFibrationData f;
  auto embedded = [&](const char* key) {
    const auto& body = require(j, path, key);
    only_keys(body, join(path, key), {"format", "kind", "dim_bound", "simplices", "faces", "coh", "gap"});
    return parse_ruptured_body(body, join(path, key));
  };
  f.total = embedded("total");
  f.base = embedded("base");
  const auto& map = require(j, path, "map");
  expect_object(map, join(path, "map"));
  const auto top = std::min(f.total.dim_bound(), f.base.dim_bound());
  f.proj.per_dim.resize(top + 1);
  for (const auto& [key, row] : map.items()) {
    const auto mp = join(join(path, "map"), key);
    const auto n = as_dim_key(key, mp);
    if (n > top) throw ParseError(mp, "map dimension exceeds both bounds");
    if (!row.is_array()) throw ParseError(mp, "expected an index array");
    for (std::size_t i = 0; i < row.size(); ++i) f.proj.per_dim[n].push_back(as_index(row[i], mp + "/" + std::to_string(i)));
  }
  if (auto it = j.find("gap_lifts"); it != j.end()) {
    if (!it->is_array()) throw ParseError(join(path, "gap_lifts"), "expected an array");
    for (std::size_t g = 0; g < it->size(); ++g) {
      const auto gp = join(path, "gap_lifts") + "/" + std::to_string(g);
      const auto& entry = (*it)[g];
      only_keys(entry, gp, {"horn", "base_simplex", "mode"});
      const auto& horn = require(entry, gp, "horn");
      only_keys(horn, join(gp, "horn"), {"n", "k", "faces"});
      LiftingProblemKey key{parse_horn(horn, join(gp, "horn")),
                            as_index(require(entry, gp, "base_simplex"), join(gp, "base_simplex"))};
      std::optional<GapMode> mode;
      if (entry.contains("mode")) mode = parse_gap_mode(entry["mode"], join(gp, "mode"));
      if (!f.gap_lifts.emplace(std::move(key), std::move(mode)).second) throw ParseError(gp, "duplicate lifting problem");
    }
  }
  if (auto it = j.find("composites"); it != j.end()) {
    if (!it->is_array()) throw ParseError(join(path, "composites"), "expected an array");
    for (std::size_t c = 0; c < it->size(); ++c) {
      const auto cp = join(path, "composites") + "/" + std::to_string(c);
      const auto& e = (*it)[c];
      only_keys(e, cp, {"first", "second", "composite"});
      f.composites.push_back({as_index(require(e, cp, "first"), join(cp, "first")),
                              as_index(require(e, cp, "second"), join(cp, "second")),
                              as_index(require(e, cp, "composite"), join(cp, "composite"))});
    }
  }
  return f;
}

inline json fibration_body(const RupturedFibrationData& f) {
  json map = json::object();
  for (std::size_t n = 0; n < f.proj.per_dim.size(); ++n) map[std::to_string(n)] = f.proj.per_dim[n];
  json lifts = json::array();
  for (const auto& [key, mode] : f.gap_lifts) {
    json e = {{"horn", horn_json(key.horn)}, {"base_simplex", key.base_simplex}};
    if (mode) e["mode"] = gap_mode_json(*mode);
    lifts.push_back(std::move(e));
  }
  json composites = json::array();
  for (const auto& c : f.composites)
    composites.push_back({{"first", c.first}, {"second", c.second}, {"composite", c.composite}});
  return {{"total", ruptured_body(f.total)},
          {"base", ruptured_body(f.base)},
          {"map", map},
          {"gap_lifts", lifts},
          {"composites", composites}};
}

// ------------------------------------------------------------- covering tasks

struct CoveringTask {
  Index basepoint = 0;
  std::vector<EdgePath> loops;

  friend bool operator==(const CoveringTask&, const CoveringTask&) = default;
};

inline CoveringTask parse_covering_task_body(const json& j, const std::string& path) {
  using namespace detail;
  CoveringTask t;
  t.basepoint = as_index(require(j, path, "basepoint"), join(path, "basepoint"));
  const auto& loops = require(j, path, "loops");
  if (!loops.is_array()) throw ParseError(join(path, "loops"), "expected an array of loops");
  for (std::size_t l = 0; l < loops.size(); ++l) {
    const auto lp = join(path, "loops") + "/" + std::to_string(l);
    if (!loops[l].is_array()) throw ParseError(lp, "expected an array of steps");
    EdgePath p{t.basepoint, {}};
    for (std::size_t s = 0; s < loops[l].size(); ++s) {
      const auto sp = lp + "/" + std::to_string(s);
      only_keys(loops[l][s], sp, {"edge", "dir"});
      auto edge = as_index(require(loops[l][s], sp, "edge"), join(sp, "edge"));
      std::string dir = loops[l][s].contains("dir") ? as_string(loops[l][s]["dir"], join(sp, "dir")) : "+";
      if (dir != "+" && dir != "-") throw ParseError(join(sp, "dir"), "direction must be \"+\" or \"-\"");
      p.steps.push_back({edge, dir == "+"});
    }
    t.loops.push_back(std::move(p));
  }
  return t;
}

inline json covering_task_body(const CoveringTask& t) {
  json loops = json::array();
  for (const auto& p : t.loops) {
    json steps = json::array();
    for (auto s : p.steps) steps.push_back({{"edge", s.edge}, {"dir", s.forward ? "+" : "-"}});
    loops.push_back(std::move(steps));
  }
  return {{"basepoint", t.basepoint}, {"loops", loops}};
}

// ------------------------------------------------------------- derive tasks

inline deriv::Type parse_type(const json& j, const std::string& path) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "Unit") return deriv::Type::unit();
    if (s.empty()) throw ParseError(path, "empty type name");
    return deriv::Type::named(std::move(s));
  }
  if (j.is_array() && j.size() == 2)
    return deriv::Type::product(parse_type(j[0], path + "/0"), parse_type(j[1], path + "/1"));
  throw ParseError(path, "a type is a name or a two-element product array");
}

inline json type_json(const deriv::Type& t) {
  switch (t.kind) {
    case deriv::Type::Kind::Name: return t.name;
    case deriv::Type::Kind::Unit: return "Unit";
    case deriv::Type::Kind::Product: return json::array({type_json(t.parts[0]), type_json(t.parts[1])});
  }
  return nullptr;
}

inline deriv::Term parse_term(const json& j, const std::string& path) {
  if (j.is_null()) return deriv::Term::unit();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s.empty()) throw ParseError(path, "empty variable name");
    return deriv::Term::variable(std::move(s));
  }
  if (j.is_array() && j.size() == 2)
    return deriv::Term::pair(parse_term(j[0], path + "/0"), parse_term(j[1], path + "/1"));
  throw ParseError(path, "a term is a variable name, null (unit), or a two-element pair array");
}

inline json term_json(const deriv::Term& t) {
  switch (t.kind) {
    case deriv::Term::Kind::Var: return t.var;
    case deriv::Term::Kind::Unit: return nullptr;
    case deriv::Term::Kind::Pair: return json::array({term_json(t.parts[0]), term_json(t.parts[1])});
  }
  return nullptr;
}

inline deriv::ResourceContext parse_context(const json& j, const std::string& path) {
  using namespace detail;
  if (!j.is_array()) throw ParseError(path, "expected an array of bindings");
  std::vector<deriv::Binding> bindings;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto bp = path + "/" + std::to_string(i);
    only_keys(j[i], bp, {"var", "type", "annotation"});
    deriv::Binding b;
    b.var = as_string(require(j[i], bp, "var"), join(bp, "var"));
    b.type = parse_type(require(j[i], bp, "type"), join(bp, "type"));
    auto ann = as_string(require(j[i], bp, "annotation"), join(bp, "annotation"));
    auto a = deriv::parse_annotation(ann);
    if (!a) throw ParseError(join(bp, "annotation"), "annotation must be linear, affine, relevant or exponential");
    b.annotation = *a;
    bindings.push_back(std::move(b));
  }
  try {
    return deriv::ResourceContext(std::move(bindings));
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

inline json context_json(const deriv::ResourceContext& c) {
  json out = json::array();
  for (const auto& b : c.bindings())
    out.push_back({{"var", b.var}, {"type", type_json(b.type)}, {"annotation", deriv::annotation_name(b.annotation)}});
  return out;
}

struct DeriveTask {
  deriv::ResourceContext gamma;
  std::optional<deriv::ResourceContext> delta;
  std::optional<deriv::Substitution> sigma;
  deriv::Term term;
  deriv::Type goal;

  friend bool operator==(const DeriveTask&, const DeriveTask&) = default;
};

inline DeriveTask parse_derive_task_body(const json& j, const std::string& path) {
  using namespace detail;
  DeriveTask t;
  t.gamma = parse_context(require(j, path, "gamma"), join(path, "gamma"));
  if (j.contains("delta")) t.delta = parse_context(j["delta"], join(path, "delta"));
  if (j.contains("sigma")) {
    const auto sp = join(path, "sigma");
    expect_object(j["sigma"], sp);
    deriv::Substitution s;
    for (const auto& [from, to] : j["sigma"].items()) s.mapping[from] = as_string(to, join(sp, from));
    t.sigma = std::move(s);
  }
  if (t.delta.has_value() != t.sigma.has_value()) throw ParseError(path, "delta and sigma must be given together");
  t.term = parse_term(require(j, path, "term"), join(path, "term"));
  t.goal = parse_type(require(j, path, "goal"), join(path, "goal"));
  return t;
}

inline json derive_task_body(const DeriveTask& t) {
  json j = {{"gamma", context_json(t.gamma)}, {"term", term_json(t.term)}, {"goal", type_json(t.goal)}};
  if (t.delta) j["delta"] = context_json(*t.delta);
  if (t.sigma) j["sigma"] = t.sigma->mapping;
  return j;
}

// ------------------------------------------------------------- judgment scripts

struct JudgmentCommand {
  enum class Op { Add, Query, IsOpen, Horn, LevelUp, CoherentFragment } op = Op::Add;
  judg::JudgmentAtom judgment;
  judg::Polarity polarity = judg::Polarity::Coherent;
  json payload;  // null when absent
  std::string first, second, gap;

  friend bool operator==(const JudgmentCommand&, const JudgmentCommand&) = default;
};

inline judg::JudgmentAtom parse_atom(const json& j, const std::string& path) {
  if (j.is_string() && !j.get<std::string>().empty()) return judg::JudgmentAtom::base(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_string() && j[1].is_string() && !j[0].get<std::string>().empty() &&
      !j[1].get<std::string>().empty())
    return judg::JudgmentAtom::arrow(j[0].get<std::string>(), j[1].get<std::string>());
  throw ParseError(path, "a judgment is a non-empty label or a [source, target] arrow");
}

inline json atom_json(const judg::JudgmentAtom& a) {
  return a.is_arrow() ? json::array({a.source, *a.target}) : json(a.source);
}

inline std::vector<JudgmentCommand> parse_judgment_script_body(const json& commands, const std::string& path) {
  using namespace detail;
  if (!commands.is_array()) throw ParseError(path, "expected an array of commands");
  std::vector<JudgmentCommand> out;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto cp = path + "/" + std::to_string(i);
    const auto& c = commands[i];
    auto op = as_string(require(c, cp, "op"), join(cp, "op"));
    JudgmentCommand cmd;
    if (op == "add") {
      only_keys(c, cp, {"op", "judgment", "polarity", "payload"});
      cmd.op = JudgmentCommand::Op::Add;
      cmd.judgment = parse_atom(require(c, cp, "judgment"), join(cp, "judgment"));
      auto pol = as_string(require(c, cp, "polarity"), join(cp, "polarity"));
      if (pol != "coherent" && pol != "gapped") throw ParseError(join(cp, "polarity"), "polarity must be coherent or gapped");
      cmd.polarity = pol == "coherent" ? judg::Polarity::Coherent : judg::Polarity::Gapped;
      if (c.contains("payload")) cmd.payload = c["payload"];
    } else if (op == "query" || op == "is_open") {
      only_keys(c, cp, {"op", "judgment"});
      cmd.op = op == "query" ? JudgmentCommand::Op::Query : JudgmentCommand::Op::IsOpen;
      cmd.judgment = parse_atom(require(c, cp, "judgment"), join(cp, "judgment"));
    } else if (op == "horn") {
      only_keys(c, cp, {"op", "first", "second", "gap"});
      cmd.op = JudgmentCommand::Op::Horn;
      cmd.first = as_string(require(c, cp, "first"), join(cp, "first"));
      cmd.second = as_string(require(c, cp, "second"), join(cp, "second"));
      cmd.gap = as_string(require(c, cp, "gap"), join(cp, "gap"));
    } else if (op == "level_up") {
      only_keys(c, cp, {"op"});
      cmd.op = JudgmentCommand::Op::LevelUp;
    } else if (op == "coherent_fragment") {
      only_keys(c, cp, {"op"});
      cmd.op = JudgmentCommand::Op::CoherentFragment;
    } else {
      throw ParseError(join(cp, "op"), "unknown command '" + op + "'");
    }
    out.push_back(std::move(cmd));
  }
  return out;
}

inline json judgment_script_body(const std::vector<JudgmentCommand>& cmds) {
  json out = json::array();
  for (const auto& c : cmds) {
    switch (c.op) {
      case JudgmentCommand::Op::Add: {
        json e = {{"op", "add"}, {"judgment", atom_json(c.judgment)}, {"polarity", judg::polarity_name(c.polarity)}};
        if (!c.payload.is_null()) e["payload"] = c.payload;
        out.push_back(std::move(e));
        break;
      }
      case JudgmentCommand::Op::Query: out.push_back({{"op", "query"}, {"judgment", atom_json(c.judgment)}}); break;
      case JudgmentCommand::Op::IsOpen: out.push_back({{"op", "is_open"}, {"judgment", atom_json(c.judgment)}}); break;
      case JudgmentCommand::Op::Horn:
        out.push_back({{"op", "horn"}, {"first", c.first}, {"second", c.second}, {"gap", c.gap}});
        break;
      case JudgmentCommand::Op::LevelUp: out.push_back({{"op", "level_up"}}); break;
      case JudgmentCommand::Op::CoherentFragment: out.push_back({{"op", "coherent_fragment"}}); break;
    }
  }
  return {{"commands", out}};
}

// ------------------------------------------------------------- documents

enum class DocumentKind { Complex, Ruptured, Fibration, CoveringTask, DeriveTask, JudgmentScript };

inline const char* kind_name(DocumentKind k) {
  switch (k) {
    case DocumentKind::Complex: return "complex";
    case DocumentKind::Ruptured: return "ruptured";
    case DocumentKind::Fibration: return "fibration";
    case DocumentKind::CoveringTask: return "covering-task";
    case DocumentKind::DeriveTask: return "derive-task";
    case DocumentKind::JudgmentScript: return "judgment-script";
  }
  return "?";
}

using DocumentBody = std::variant<TruncatedComplex, RupturedComplex, RupturedFibrationData, CoveringTask, DeriveTask,
                                  std::vector<JudgmentCommand>>;

struct Document {
  DocumentKind kind = DocumentKind::Complex;
  DocumentBody body;

  friend bool operator==(const Document&, const Document&) = default;
};

inline Document parse_document_json(const json& j) {
  using namespace detail;
  if (j.is_array()) return {DocumentKind::JudgmentScript, parse_judgment_script_body(j, "")};
  expect_object(j, "");
  const auto format = as_string(require(j, "", "format"), "/format");
  if (format != kFormat) throw ParseError("/format", "unsupported format '" + format + "'");
  const auto kind = as_string(require(j, "", "kind"), "/kind");
  if (kind == "complex") {
    only_keys(j, "", {"format", "kind", "dim_bound", "simplices", "faces"});
    return {DocumentKind::Complex, parse_complex_body(j, "")};
  }
  if (kind == "ruptured") {
    only_keys(j, "", {"format", "kind", "dim_bound", "simplices", "faces", "coh", "gap"});
    return {DocumentKind::Ruptured, parse_ruptured_body(j, "")};
  }
  if (kind == "fibration") {
    only_keys(j, "", {"format", "kind", "total", "base", "map", "gap_lifts", "composites"});
    return {DocumentKind::Fibration, parse_fibration_body(j, "")};
  }
  if (kind == "covering-task") {
    only_keys(j, "", {"format", "kind", "basepoint", "loops"});
    return {DocumentKind::CoveringTask, parse_covering_task_body(j, "")};
  }
  if (kind == "derive-task") {
    only_keys(j, "", {"format", "kind", "gamma", "delta", "sigma", "term", "goal"});
    return {DocumentKind::DeriveTask, parse_derive_task_body(j, "")};
  }
  if (kind == "judgment-script") {
    only_keys(j, "", {"format", "kind", "commands"});
    return {DocumentKind::JudgmentScript, parse_judgment_script_body(require(j, "", "commands"), "/commands")};
  }
  throw ParseError("/kind", "unrecognized document kind '" + kind + "'");
}

inline Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(detail::position(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  return parse_document_json(j);
}

inline json to_json(const Document& d) {
  json body = std::visit(
      [](const auto& b) -> json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, TruncatedComplex>) return complex_body(b);
        else if constexpr (std::is_same_v<T, RupturedComplex>) return ruptured_body(b);
        else if constexpr (std::is_same_v<T, RupturedFibrationData>) return fibration_body(b);
        else if constexpr (std::is_same_v<T, CoveringTask>) return covering_task_body(b);
        else if constexpr (std::is_same_v<T, DeriveTask>) return derive_task_body(b);
        else return judgment_script_body(b);
      },
      d.body);
  json out = {{"format", kFormat}, {"kind", kind_name(d.kind)}};
  for (auto& [k, v] : body.items()) out[k] = v;
  return out;
}

namespace detail {

inline bool has_object(const json& j) {
  if (j.is_object()) return true;
  if (j.is_array())
    for (const auto& e : j)
      if (has_object(e)) return true;
  return false;
}

inline std::string inline_array(const json& j) {
  if (!j.is_array()) return j.dump();
  std::string s = "[";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_array(j[i]);
  return s + "]";
}

inline void write_pretty(const json& j, std::size_t indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  if (j.is_array()) {
    if (!has_object(j)) {
      auto line = inline_array(j);
      if (line.size() + indent <= 100) {
        out += line;
        return;
      }
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += inner;
      write_pretty(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "]";
    return;
  }
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    std::vector<std::string> keys;
    for (const char* lead : {"format", "kind"})
      if (j.contains(lead)) keys.emplace_back(lead);
    for (const auto& [k, v] : j.items())
      if (k != "format" && k != "kind") keys.push_back(k);
    out += "{\n";
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out += inner + json(keys[i]).dump() + ": ";
      write_pretty(j[keys[i]], indent + 2, out);
      out += i + 1 < keys.size() ? ",\n" : "\n";
    }
    out += pad + "}";
    return;
  }
  out += j.dump();
}

}  // namespace detail

/// Two-space indentation; short arrays without objects stay on one line.
inline std::string pretty(const json& j) {
  std::string out;
  detail::write_pretty(j, 0, out);
  return out + "\n";
}

inline std::string serialize(const Document& d) { return pretty(to_json(d)); }

inline Document make_document(TruncatedComplex x) { return {DocumentKind::Complex, std::move(x)}; }
inline Document make_document(RupturedComplex r) { return {DocumentKind::Ruptured, std::move(r)}; }
inline Document make_document(RupturedFibrationData f) { return {DocumentKind::Fibration, std::move(f)}; }

}  // namespace rupture::io
