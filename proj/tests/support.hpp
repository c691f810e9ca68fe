#pragma once

// Shared generators, brute-force oracles and fixture builders for the test
// suites and the acceptance runner. Oracles deliberately avoid the library's
// own search routines.

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "rupture/cli.hpp"

namespace rt {

using namespace rupture;
using Rng = std::mt19937;

// ------------------------------------------------------------- fixtures on disk

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline io::Document load_fixture(const std::string& name) { return io::parse_document(slurp(fixture_path(name))); }

inline RupturedFibrationData load_fibration_fixture(const std::string& name) {
  return std::get<RupturedFibrationData>(load_fixture(name).body);
}

inline const std::vector<std::string>& document_fixtures() {
  static const std::vector<std::string> names = {
      "bank.json",          "crane.json",          "cycle3.json",       "cycle3_gapped.json",
      "delta2.json",        "double_cover3.json",  "double_cover3_loops.json", "exclusion_conflict.json",
      "judgments.json",     "linear_horn.json",    "triangle_complex.json"};
  return names;
}

// ------------------------------------------------------------- generators

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Random valid complex of bound 2 with at most `max_simplices` simplices.
/// 2-cells are built from a chain f2: a -> b, f0: b -> c and a spanning edge
/// f1: a -> c, so the simplicial identities hold by construction.
inline TruncatedComplex random_complex(Rng& rng, std::size_t max_simplices = 40) {
  ComplexBuilder b(2);
  const auto nv = uniform(rng, 1, 6);
  for (std::size_t i = 0; i < nv; ++i) b.add_vertex();
  std::vector<std::pair<Index, Index>> edges;
  const auto ne = uniform(rng, 0, std::min<std::size_t>(14, max_simplices - nv));
  for (std::size_t i = 0; i < ne; ++i) {
    Index s = uniform(rng, 0, nv - 1), t = uniform(rng, 0, nv - 1);
    edges.emplace_back(s, t);
    b.add_edge(s, t);
  }
  std::size_t budget = max_simplices - nv - ne;
  const auto attempts = uniform(rng, 0, 20);
  for (std::size_t a = 0; a < attempts && budget > 0 && !edges.empty(); ++a) {
    Index f2 = uniform(rng, 0, edges.size() - 1);
    std::vector<Index> f0s, f1s;
    for (Index e = 0; e < edges.size(); ++e)
      if (edges[e].first == edges[f2].second) f0s.push_back(e);
    if (f0s.empty()) continue;
    Index f0 = f0s[uniform(rng, 0, f0s.size() - 1)];
    for (Index e = 0; e < edges.size(); ++e)
      if (edges[e].first == edges[f2].first && edges[e].second == edges[f0].second) f1s.push_back(e);
    if (f1s.empty()) continue;
    Index f1 = f1s[uniform(rng, 0, f1s.size() - 1)];
    b.add(2, {f0, f1, f2});
    --budget;
  }
  return b.build();
}

/// Random Coh (each simplex with probability p_coh) and a random subset of
/// the enumerable horns as Gap, with no regard for Exclusion.
inline RupturedComplex random_ruptured(Rng& rng, const TruncatedComplex& x, double p_coh, double p_gap) {
  RupturedComplex r(x);
  for (std::size_t n = 0; n <= x.dim_bound(); ++n)
    for (Index i = 0; i < x.count(n); ++i)
      if (coin(rng, p_coh)) r.coh[n].insert(i);
  for (const auto& h : enumerate_all_horns(x, x.dim_bound()))
    if (coin(rng, p_gap)) r.gap.emplace(h, std::nullopt);
  return r;
}

// ------------------------------------------------------------- oracles

/// d_i of an (n)-simplex straight from the face table.
inline Index raw_face(const TruncatedComplex& x, std::size_t n, Index s, std::size_t i) {
  return x.face_table()[n][s][i];
}

inline bool oracle_fills(const TruncatedComplex& x, Index s, const HornSpec& h) {
  for (std::size_t i = 0; i <= h.n; ++i)
    if (i != h.k && raw_face(x, h.n, s, i) != h.faces[i]) return false;
  return true;
}

inline std::vector<SimplexId> oracle_fillers(const TruncatedComplex& x, const HornSpec& h) {
  std::vector<SimplexId> out;
  for (Index s = 0; s < x.count(h.n); ++s)
    if (oracle_fills(x, s, h)) out.push_back({h.n, s});
  return out;
}

inline bool oracle_compatible(const TruncatedComplex& x, const HornSpec& h) {
  if (h.n < 2) return true;
  for (std::size_t i = 0; i <= h.n; ++i)
    for (std::size_t j = i + 1; j <= h.n; ++j) {
      if (i == h.k || j == h.k) continue;
      if (raw_face(x, h.n - 1, h.faces[j], i) != raw_face(x, h.n - 1, h.faces[i], j - 1)) return false;
    }
  return true;
}

/// Full cartesian product of face choices, filtered by compatibility.
inline std::vector<HornSpec> oracle_horns(const TruncatedComplex& x, std::size_t n, std::size_t k) {
  std::vector<HornSpec> out;
  const auto m = x.count(n - 1);
  if (m == 0) return out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;
  for (std::size_t code = 0; code < total; ++code) {
    HornSpec h{n, k, std::vector<Index>(n + 1, kNoFace)};
    std::size_t c = code;
    // Most significant digit first so the result is lexicographic.
    std::vector<Index> digits(n);
    for (std::size_t d = n; d-- > 0;) {
      digits[d] = c % m;
      c /= m;
    }
    for (std::size_t i = 0, d = 0; i <= n; ++i)
      if (i != k) h.faces[i] = digits[d++];
    if (oracle_compatible(x, h)) out.push_back(std::move(h));
  }
  return out;
}

inline std::size_t oracle_exclusion_violations(const RupturedComplex& r) {
  std::size_t n = 0;
  for (const auto& [h, mode] : r.gap)
    for (Index s = 0; s < r.underlying.count(h.n); ++s)
      if (r.coh[h.n].count(s) && oracle_fills(r.underlying, s, h)) ++n;
  return n;
}

/// Least face-closed superset of Coh, by fixpoint iteration.
inline std::vector<std::set<Index>> oracle_closure(const RupturedComplex& r) {
  auto keep = r.coh;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t n = 1; n < keep.size(); ++n)
      for (auto s : std::set<Index>(keep[n]))
        for (std::size_t i = 0; i <= n; ++i)
          changed = keep[n - 1].insert(raw_face(r.underlying, n, s, i)).second || changed;
  }
  return keep;
}

// ------------------------------------------------------------- fixture complexes

/// Nerve of Z/3 truncated at 2: one vertex, edges g, 2-cells (a, b) with
/// d_0 = b, d_1 = a + b, d_2 = a. Kan in every dimension.
inline TruncatedComplex z3_nerve() {
  ComplexBuilder b(2);
  b.add_vertex("*");
  for (int g = 0; g < 3; ++g) b.add(1, {0, 0}, "g" + std::to_string(g));
  for (Index a = 0; a < 3; ++a)
    for (Index c = 0; c < 3; ++c) b.add(2, {c, (a + c) % 3, a});
  return b.build();
}

/// Two 2-cells with the same boundary.
inline TruncatedComplex doubled_triangle() {
  ComplexBuilder b(2);
  for (int i = 0; i < 3; ++i) b.add_vertex();
  b.add_edge(0, 1);
  b.add_edge(0, 2);
  b.add_edge(1, 2);
  b.add(2, {2, 1, 0});
  b.add(2, {2, 1, 0});
  return b.build();
}

/// Removes gap marks that have a coherent filler.
inline void drop_conflicts(RupturedComplex& r) {
  for (auto it = r.gap.begin(); it != r.gap.end();) {
    bool conflict = false;
    for (auto s : oracle_fillers(r.underlying, it->first)) conflict = conflict || r.is_coherent(s);
    it = conflict ? r.gap.erase(it) : std::next(it);
  }
}

/// Twenty ruptured complexes covering the shapes the suites care about.
inline std::vector<std::pair<std::string, RupturedComplex>> twenty_fixtures() {
  std::vector<std::pair<std::string, RupturedComplex>> out;
  auto delta2 = standard_simplex(2, 2);
  auto cycle3 = build_cycle(3);
  out.emplace_back("delta2/kan", from_kan(delta2));
  out.emplace_back("delta2/gapped", fully_gapped(delta2));
  out.emplace_back("delta2/bare", RupturedComplex(delta2));
  out.emplace_back("cycle3/kan", from_kan(cycle3));
  out.emplace_back("cycle3/gapped", fully_gapped(cycle3));
  out.emplace_back("cycle4/kan", from_kan(build_cycle(4)));
  out.emplace_back("cycle5/gapped", fully_gapped(build_cycle(5)));
  out.emplace_back("simplex3/kan", from_kan(standard_simplex(3, 2)));
  out.emplace_back("horn21", from_kan(horn_complex(2, 1)));
  out.emplace_back("horn20", fully_gapped(horn_complex(2, 0)));
  out.emplace_back("terminal2", from_kan(terminal_complex(2)));
  out.emplace_back("z3", from_kan(z3_nerve()));
  out.emplace_back("doubled", from_kan(doubled_triangle()));
  {
    // Δ² with its outer horn Λ^2_0 gapped and everything else coherent.
    auto r = from_kan(delta2);
    r.gap.emplace(make_horn_spec(2, 0, {{1, 0}, {2, 1}}), GapMode::plain());
    out.emplace_back("delta2/outer-gap", r);
  }
  Rng rng(20260101);
  while (out.size() < 20) {
    auto x = random_complex(rng);
    auto r = random_ruptured(rng, x, 0.6, 0.3);
    drop_conflicts(r);
    out.emplace_back("random" + std::to_string(out.size()), r);
  }
  return out;
}

// ------------------------------------------------------------- composition cells

/// G: B -> A and F: E -> B over a single edge α: a0 -> a1, arranged so the
/// first step (through G, lifting α to B from b0) and the second step
/// (through F, lifting the intermediate β to E from e0) have the requested
/// outcomes. `key` is the composite problem: the horn {e0} over α.
struct CompositionCell {
  RupturedFibrationData f;
  RupturedFibrationData g;
  LiftingProblemKey key;
};

inline CompositionCell composition_cell(Outcome first, Outcome second) {
  ComplexBuilder ab(1);
  ab.add_vertex("a0");
  ab.add_vertex("a1");
  ab.add_edge(0, 1, "alpha");
  auto A = from_kan(ab.build());

  ComplexBuilder bb(1);
  bb.add_vertex("b0");
  bb.add_vertex("b1");
  bb.add_edge(0, 1, "beta");
  RupturedComplex B(bb.build());
  B.coh[0] = {0, 1};
  if (first == Outcome::Coherent) B.coh[1] = {0};

  ComplexBuilder eb(1);
  eb.add_vertex("e0");
  eb.add_vertex("e1");
  if (second == Outcome::Coherent) eb.add_edge(0, 1, "epsilon");
  RupturedComplex E(eb.build());
  E.coh[0] = {0, 1};
  if (second == Outcome::Coherent) E.coh[1] = {0};

  CompositionCell c;
  c.g = {B, A, SimplicialMap{{{0, 1}, {0}}}, {}, {}};
  if (first == Outcome::Gapped) c.g.gap_lifts.emplace(transport_key(0, 0), GapMode::semantic({"first step"}));
  c.f = {E, B, SimplicialMap{{{0, 1}, second == Outcome::Coherent ? std::vector<Index>{0} : std::vector<Index>{}}},
         {}, {}};
  if (second == Outcome::Gapped) c.f.gap_lifts.emplace(transport_key(0, 0), GapMode::semantic({"second step"}));
  c.key = transport_key(0, 0);
  return c;
}

inline constexpr Outcome kOutcomes[] = {Outcome::Coherent, Outcome::Gapped, Outcome::Open};

}  // namespace rt
