#pragma once

// Ruptured fibrations: maps E -> B with gap-marked lifting problems.
// Every coherent lifting problem is exactly one of coherent lift, gapped
// lift, or open. Transport is the (n=1) case with the source vertex given.
//
// Edge orientation: d_1 is the source vertex, d_0 the target.

#include <optional>
#include <variant>

#include "rupture/ruptured.hpp"

namespace rupture {

struct PathStep {
  Index edge = 0;
  bool forward = true;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Edge path from `start`; each step traverses an edge forward (d_1 -> d_0)
/// or backward.
struct EdgePath {
  Index start = 0;
  std::vector<PathStep> steps;

  friend bool operator==(const EdgePath&, const EdgePath&) = default;
};

inline Index edge_source(const TruncatedComplex& x, Index edge) { return x.face({1, edge}, 1).index; }
inline Index edge_target(const TruncatedComplex& x, Index edge) { return x.face({1, edge}, 0).index; }

inline Index step_from(const TruncatedComplex& x, PathStep s) {
  return s.forward ? edge_source(x, s.edge) : edge_target(x, s.edge);
}
inline Index step_to(const TruncatedComplex& x, PathStep s) {
  return s.forward ? edge_target(x, s.edge) : edge_source(x, s.edge);
}

/// Empty iff every edge exists and consecutive steps chain.
inline Report validate_edge_path(const TruncatedComplex& x, const EdgePath& p) {
  Report r;
  if (p.start >= x.count(0)) {
    r.add("path", "start vertex " + std::to_string(p.start) + " does not exist");
    return r;
  }
  Index at = p.start;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto s = p.steps[i];
    if (x.dim_bound() < 1 || s.edge >= x.count(1)) {
      r.add("path", "step " + std::to_string(i) + " uses missing edge " + std::to_string(s.edge));
      return r;
    }
    if (step_from(x, s) != at) {
      r.add("path", "step " + std::to_string(i) + " does not start at vertex " + std::to_string(at));
      return r;
    }
    at = step_to(x, s);
  }
  return r;
}

/// Assumes a valid path.
inline Index path_end(const TruncatedComplex& x, const EdgePath& p) {
  Index at = p.start;
  for (auto s : p.steps) at = step_to(x, s);
  return at;
}

inline EdgePath concat(const EdgePath& a, const EdgePath& b) {
  EdgePath out = a;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

inline std::string to_string(const EdgePath& p) {
  std::string s = "@" + std::to_string(p.start);
  for (auto st : p.steps) s += (st.forward ? " +" : " -") + std::to_string(st.edge);
  return s;
}

// ------------------------------------------------------------- data

/// Lifting problem: horn in E plus the base simplex (dimension horn.n) it
/// should lift.
struct LiftingProblemKey {
  HornSpec horn;
  Index base_simplex = 0;

  auto operator<=>(const LiftingProblemKey&) const = default;
};

inline std::string to_string(const LiftingProblemKey& k) {
  return to_string(k.horn) + " over " + to_string(SimplexId{k.horn.n, k.base_simplex});
}

/// Designated composite edge for a composable base edge pair.
struct CompositeDesignation {
  Index first = 0;
  Index second = 0;
  Index composite = 0;

  friend bool operator==(const CompositeDesignation&, const CompositeDesignation&) = default;
};

struct RupturedFibrationData {
  RupturedComplex total;
  RupturedComplex base;
  SimplicialMap proj;
  std::map<LiftingProblemKey, std::optional<GapMode>> gap_lifts;
  std::vector<CompositeDesignation> composites;

  friend bool operator==(const RupturedFibrationData&, const RupturedFibrationData&) = default;
};

/// The (n=1, k=0) problem: lift γ with source face d_1 = e.
inline LiftingProblemKey transport_key(Index e, Index gamma) {
  return {HornSpec{1, 0, {kNoFace, e}}, gamma};
}

// ------------------------------------------------------------- validation

/// Structural check of a key: horn valid in E, base simplex exists, and
/// proj(horn face i) = d_i(base simplex).
inline Report validate_lifting_key(const RupturedFibrationData& f, const LiftingProblemKey& key) {
  Report r = validate_horn(f.total.underlying, key.horn);
  if (!r.ok()) return r;
  const auto n = key.horn.n;
  if (n > f.base.dim_bound() || key.base_simplex >= f.base.underlying.count(n)) {
    r.add("lift-key", to_string(key) + ": base simplex does not exist");
    return r;
  }
  if (n >= f.proj.per_dim.size()) {
    r.add("lift-key", to_string(key) + ": projection undefined in dimension " + std::to_string(n));
    return r;
  }
  for (std::size_t i = 0; i <= n; ++i) {
    if (i == key.horn.k) continue;
    auto img = f.proj({n - 1, key.horn.faces[i]});
    auto want = f.base.underlying.face({n, key.base_simplex}, i);
    if (img != want)
      r.add("lift-compatibility", to_string(key) + ": proj(face " + std::to_string(i) + ") = " +
                                      to_string(img) + " but d_" + std::to_string(i) + " = " + to_string(want));
  }
  return r;
}

/// All simplices of E (any coherence) filling the horn over the base simplex.
inline std::vector<SimplexId> lift_candidates(const RupturedFibrationData& f, const LiftingProblemKey& key) {
  std::vector<SimplexId> out;
  for (auto tau : find_fillers(f.total.underlying, key.horn))
    if (f.proj(tau).index == key.base_simplex) out.push_back(tau);
  return out;
}

inline std::vector<SimplexId> coherent_lifts(const RupturedFibrationData& f, const LiftingProblemKey& key) {
  std::vector<SimplexId> out;
  for (auto tau : lift_candidates(f, key))
    if (f.total.is_coherent(tau)) out.push_back(tau);
  return out;
}

inline Report validate_fibration(const RupturedFibrationData& f) {
  Report r;
  auto total = validate_ruptured(f.total);
  auto base = validate_ruptured(f.base);
  for (const auto& v : total.items()) r.add("total/" + v.code, v.message);
  for (const auto& v : base.items()) r.add("base/" + v.code, v.message);
  if (!r.ok()) return r;
  r.append(check_simplicial_map(f.proj, f.total.underlying, f.base.underlying));
  if (!r.ok()) return r;
  for (const auto& [key, mode] : f.gap_lifts) {
    auto kr = validate_lifting_key(f, key);
    if (!kr.ok()) {
      r.append(kr);
      continue;
    }
    for (std::size_t i = 0; i <= key.horn.n; ++i)
      if (i != key.horn.k && !f.total.is_coherent({key.horn.n - 1, key.horn.faces[i]}))
        r.add("lift-key", to_string(key) + ": horn face " + std::to_string(i) + " is not coherent");
    if (mode) r.append(validate_gap_mode(*mode));
    for (auto tau : coherent_lifts(f, key))
      r.add("lifting-exclusion", "gapped problem " + to_string(key) + " has coherent lift " + to_string(tau));
  }
  const auto& b = f.base.underlying;
  for (const auto& c : f.composites) {
    if (b.dim_bound() < 1 || c.first >= b.count(1) || c.second >= b.count(1) || c.composite >= b.count(1)) {
      r.add("composite", "composite designation references a missing edge");
      continue;
    }
    if (edge_target(b, c.first) != edge_source(b, c.second))
      r.add("composite", "edges " + std::to_string(c.first) + " and " + std::to_string(c.second) + " are not composable");
    if (edge_source(b, c.composite) != edge_source(b, c.first) || edge_target(b, c.composite) != edge_target(b, c.second))
      r.add("composite", "edge " + std::to_string(c.composite) + " does not span the pair");
  }
  return r;
}

// ------------------------------------------------------------- lifting

inline Trichotomy classify_lift(const RupturedFibrationData& f, const LiftingProblemKey& key) {
  if (auto rep = validate_lifting_key(f, key); !rep.ok())
    throw Error("classify_lift: " + rep.items().front().message);
  if (auto lifts = coherent_lifts(f, key); !lifts.empty()) return CoherentlyFilled{std::move(lifts)};
  if (auto it = f.gap_lifts.find(key); it != f.gap_lifts.end()) return GapWitnessed{it->second};
  return Open{};
}

/// Coherent problems: horn faces in Coh^E, base simplex in Coh^B.
inline std::vector<LiftingProblemKey> enumerate_lifting_problems(const RupturedFibrationData& f) {
  std::vector<LiftingProblemKey> out;
  if (f.proj.per_dim.empty()) return out;
  const auto top = std::min({f.total.dim_bound(), f.base.dim_bound(), f.proj.per_dim.size() - 1});
  for (std::size_t n = 1; n <= top; ++n)
    for (std::size_t k = 0; k <= n; ++k)
      for (const auto& h : enumerate_horns(f.total.underlying, n, k)) {
        bool coherent = true;
        for (std::size_t i = 0; i <= n && coherent; ++i)
          coherent = i == k || f.total.is_coherent({n - 1, h.faces[i]});
        if (!coherent) continue;
        for (auto b : f.base.coh[n]) {
          LiftingProblemKey key{h, b};
          if (validate_lifting_key(f, key).ok()) out.push_back(std::move(key));
        }
      }
  return out;
}

// ------------------------------------------------------------- fibers

struct Fiber {
  RupturedComplex complex;
  /// Inclusion of the fiber into E.
  SimplicialMap inclusion;
};

/// Simplices of E all of whose vertices lie over b, with Coh and Gap
/// restricted.
inline Fiber fiber(const RupturedFibrationData& f, Index b) {
  if (b >= f.base.underlying.count(0) || !f.base.is_coherent({0, b}))
    throw Error("fiber: base vertex " + std::to_string(b) + " is not a coherent vertex");
  if (f.proj.per_dim.empty()) throw Error("fiber: projection is empty");
  const auto& e = f.total.underlying;
  const auto top = std::min(e.dim_bound(), f.proj.per_dim.size() - 1);
  std::vector<std::set<Index>> keep(e.dim_bound() + 1);
  for (std::size_t n = 0; n <= top; ++n)
    for (Index i = 0; i < e.count(n); ++i) {
      bool over = true;
      for (auto v : e.vertices({n, i})) over = over && f.proj.per_dim[0][v] == b;
      if (over) keep[n].insert(i);
    }
  auto sub = restrict_to(e, keep);
  std::vector<std::map<Index, Index>> local(e.dim_bound() + 1);
  for (std::size_t n = 0; n < sub.inclusion.per_dim.size(); ++n)
    for (Index i = 0; i < sub.inclusion.per_dim[n].size(); ++i) local[n][sub.inclusion.per_dim[n][i]] = i;

  RupturedComplex out(sub.complex);
  for (std::size_t n = 0; n <= e.dim_bound(); ++n)
    for (auto i : f.total.coh[n])
      if (local[n].contains(i)) out.coh[n].insert(local[n][i]);
  for (const auto& [h, mode] : f.total.gap) {
    HornSpec lh = h;
    bool inside = true;
    for (std::size_t i = 0; i <= h.n && inside; ++i) {
      if (i == h.k) continue;
      auto it = local[h.n - 1].find(h.faces[i]);
      inside = it != local[h.n - 1].end();
      if (inside) lh.faces[i] = it->second;
    }
    if (inside) out.gap.emplace(lh, mode);
  }
  return {std::move(out), std::move(sub.inclusion)};
}

/// Classification of a horn of E lying over b as a lifting problem with
/// constant base: coherent fillers must lie entirely over b.
inline Trichotomy classify_over_vertex(const RupturedFibrationData& f, Index b, const HornSpec& h) {
  const auto& e = f.total.underlying;
  std::vector<SimplexId> lifts;
  for (auto tau : find_fillers(e, h)) {
    if (!f.total.is_coherent(tau)) continue;
    bool over = true;
    for (auto v : e.vertices(tau)) over = over && f.proj.per_dim[0][v] == b;
    if (over) lifts.push_back(tau);
  }
  if (!lifts.empty()) return CoherentlyFilled{std::move(lifts)};
  if (auto it = f.total.gap.find(h); it != f.total.gap.end()) return GapWitnessed{it->second};
  return Open{};
}

// ------------------------------------------------------------- transport

struct TransportCoherent {
  Index target = 0;
  /// Least coherent lift and how many coherent lifts exist.
  Index lift = 0;
  std::size_t multiplicity = 1;
  friend bool operator==(const TransportCoherent&, const TransportCoherent&) = default;
};
struct TransportGapped {
  std::optional<GapMode> mode;
  friend bool operator==(const TransportGapped&, const TransportGapped&) = default;
};
struct TransportOpen {
  friend bool operator==(const TransportOpen&, const TransportOpen&) = default;
};
using TransportOutcome = std::variant<TransportCoherent, TransportGapped, TransportOpen>;

inline const char* outcome_name(const TransportOutcome& t) {
  return std::holds_alternative<TransportCoherent>(t) ? "coherent"
         : std::holds_alternative<TransportGapped>(t) ? "gapped"
                                                       : "open";
}

inline void check_transport_input(const RupturedFibrationData& f, Index e, Index gamma) {
  const auto& E = f.total.underlying;
  const auto& B = f.base.underlying;
  if (e >= E.count(0) || !f.total.is_coherent({0, e}))
    throw Error("transport: term " + std::to_string(e) + " is not a coherent vertex of the total space");
  if (B.dim_bound() < 1 || gamma >= B.count(1) || !f.base.is_coherent({1, gamma}))
    throw Error("transport: path " + std::to_string(gamma) + " is not a coherent base edge");
  if (f.proj.per_dim[0][e] != edge_source(B, gamma))
    throw Error("transport: term does not lie over the source of the path");
}

inline TransportOutcome transport(const RupturedFibrationData& f, Index e, Index gamma) {
  check_transport_input(f, e, gamma);
  auto key = transport_key(e, gamma);
  auto t = classify_lift(f, key);
  if (auto* c = std::get_if<CoherentlyFilled>(&t)) {
    auto lift = c->fillers.front().index;
    return TransportCoherent{edge_target(f.total.underlying, lift), lift, c->fillers.size()};
  }
  if (auto* g = std::get_if<GapWitnessed>(&t)) return TransportGapped{g->mode};
  return TransportOpen{};
}

/// (coherent term, coherent path, gap witness).
struct TransportHornInhabitant {
  Index term = 0;
  EdgePath path;
  std::optional<GapMode> gap;

  friend bool operator==(const TransportHornInhabitant&, const TransportHornInhabitant&) = default;
};

inline std::optional<TransportHornInhabitant> detect_transport_horn(const RupturedFibrationData& f, Index e,
                                                                    Index gamma) {
  auto t = transport(f, e, gamma);
  if (auto* g = std::get_if<TransportGapped>(&t))
    return TransportHornInhabitant{e, EdgePath{f.base.underlying.face({1, gamma}, 1).index, {{gamma, true}}}, g->mode};
  return std::nullopt;
}

struct FunctorialityHornInhabitant {
  Index term = 0;
  Index first = 0, second = 0, composite = 0;
  /// Stepwise targets: after the first edge, after the second.
  Index midpoint = 0, endpoint = 0;
  std::optional<GapMode> gap;

  friend bool operator==(const FunctorialityHornInhabitant&, const FunctorialityHornInhabitant&) = default;
};

/// Stepwise transport along γ1 then γ2 coherent while transport along the
/// designated composite is gapped.
inline std::optional<FunctorialityHornInhabitant> detect_functoriality_horn(const RupturedFibrationData& f,
                                                                            Index e, Index first, Index second) {
  auto it = std::find_if(f.composites.begin(), f.composites.end(),
                         [&](const CompositeDesignation& c) { return c.first == first && c.second == second; });
  if (it == f.composites.end())
    throw Error("detect_functoriality_horn: no composite designated for edges " + std::to_string(first) + ", " +
                std::to_string(second));
  auto step1 = transport(f, e, first);
  auto* c1 = std::get_if<TransportCoherent>(&step1);
  if (!c1) return std::nullopt;
  auto step2 = transport(f, c1->target, second);
  auto* c2 = std::get_if<TransportCoherent>(&step2);
  if (!c2) return std::nullopt;
  auto direct = transport(f, e, it->composite);
  auto* g = std::get_if<TransportGapped>(&direct);
  if (!g) return std::nullopt;
  return FunctorialityHornInhabitant{e, first, second, it->composite, c1->target, c2->target, g->mode};
}

// ------------------------------------------------------------- composition

enum class Outcome { Coherent, Gapped, Open };

inline const char* outcome_name(Outcome o) {
  return o == Outcome::Coherent ? "coherent" : o == Outcome::Gapped ? "gapped" : "open";
}

inline Outcome outcome_of(const Trichotomy& t) {
  return is_coherent(t) ? Outcome::Coherent : is_gapped(t) ? Outcome::Gapped : Outcome::Open;
}

/// Gapped if either step is gapped; coherent if both are coherent; open
/// otherwise.
constexpr Outcome compose_outcomes(Outcome first, Outcome second) {
  if (first == Outcome::Gapped || second == Outcome::Gapped) return Outcome::Gapped;
  if (first == Outcome::Coherent && second == Outcome::Coherent) return Outcome::Coherent;
  return Outcome::Open;
}

struct TwoStepLift {
  Outcome first = Outcome::Open;   // lift through G: B -> A
  Outcome second = Outcome::Open;  // lift through F: E -> B
  Outcome composite = Outcome::Open;
  std::optional<GapMode> mode;
  /// Intermediate base simplices the second step was evaluated on.
  std::vector<Index> intermediates;
};

/// Decomposes a lifting problem for G∘F (horn in E, simplex of A). The second
/// step runs over the coherent first-step fillers when the first step is
/// coherent, otherwise over every intermediate simplex of B filling the
/// projected horn over the target simplex.
inline TwoStepLift decompose_lift(const RupturedFibrationData& f, const RupturedFibrationData& g,
                                  const LiftingProblemKey& key) {
  TwoStepLift out;
  LiftingProblemKey outer{map_horn(f.proj, key.horn), key.base_simplex};
  auto t1 = classify_lift(g, outer);
  out.first = outcome_of(t1);
  if (auto* c = std::get_if<CoherentlyFilled>(&t1)) {
    for (auto s : c->fillers) out.intermediates.push_back(s.index);
  } else {
    for (auto s : lift_candidates(g, outer)) out.intermediates.push_back(s.index);
  }
  std::optional<GapMode> second_mode;
  out.second = Outcome::Open;
  for (auto beta : out.intermediates) {
    LiftingProblemKey inner{key.horn, beta};
    if (!coherent_lifts(f, inner).empty()) {
      out.second = Outcome::Coherent;
      break;
    }
    if (auto it = f.gap_lifts.find(inner); it != f.gap_lifts.end() && out.second == Outcome::Open) {
      out.second = Outcome::Gapped;
      second_mode = it->second;
    }
  }
  out.composite = compose_outcomes(out.first, out.second);
  if (out.composite == Outcome::Gapped) {
    if (auto* gw = std::get_if<GapWitnessed>(&t1)) out.mode = gw->mode;
    else out.mode = second_mode;
  }
  return out;
}

/// G∘F with gap marks materialized from the two-step rule over every coherent
/// problem within the truncation. Throws ExclusionConflict if a problem the
/// rule gaps has a direct coherent lift.
inline RupturedFibrationData compose_fibrations(const RupturedFibrationData& f, const RupturedFibrationData& g) {
  if (!(f.base == g.total)) throw Error("compose_fibrations: base of the first is not the total of the second");
  RupturedFibrationData out;
  out.total = f.total;
  out.base = g.base;
  out.proj = compose(g.proj, f.proj);
  out.composites = g.composites;
  for (const auto& key : enumerate_lifting_problems(out)) {
    auto step = decompose_lift(f, g, key);
    if (step.composite != Outcome::Gapped) continue;
    if (auto lifts = coherent_lifts(out, key); !lifts.empty())
      throw ExclusionConflict("composite problem " + to_string(key) + " is gapped by a step but has coherent lift " +
                              to_string(lifts.front()));
    out.gap_lifts.emplace(key, step.mode);
  }
  return out;
}

}  // namespace rupture
