#pragma once

// Finite covering spaces over simplicial circles: unique edge-path lifting,
// the monodromy action on the fiber, and the monodromy-ruptured structure in
// which a based-loop closure problem is gapped exactly when monodromy moves
// its start point. The gap witness is the permutation itself.
//
// Composition convention: paths are written left to right, and
// monodromy(α·β) = monodromy(β) ∘ monodromy(α).

#include "rupture/fibration.hpp"

namespace rupture {

using FiberPermutation = Permutation;

/// m vertices and m edges v_i -> v_{i+1 mod m}; bound 2, no 2-cells.
inline TruncatedComplex build_cycle(std::size_t m, const std::string& vertex_prefix = "v",
                                    const std::string& edge_prefix = "e") {
  if (m < 3) throw Error("build_cycle: a simplicial circle needs at least 3 vertices");
  ComplexBuilder b(2);
  for (std::size_t i = 0; i < m; ++i) b.add_vertex(vertex_prefix + std::to_string(i));
  for (std::size_t i = 0; i < m; ++i) b.add_edge(i, (i + 1) % m, edge_prefix + std::to_string(i));
  return b.build();
}

/// The connected double cover of the m-cycle: w_j -> v_{j mod m}.
inline RupturedFibrationData build_double_cover(std::size_t m) {
  if (m < 3) throw Error("build_double_cover: m must be at least 3");
  auto total = build_cycle(2 * m, "w", "f");
  auto base = build_cycle(m);
  SimplicialMap proj;
  proj.per_dim.resize(3);
  for (std::size_t j = 0; j < 2 * m; ++j) {
    proj.per_dim[0].push_back(j % m);
    proj.per_dim[1].push_back(j % m);
  }
  return {from_kan(total), from_kan(base), std::move(proj), {}, {}};
}

/// base × {0..sheets-1}: simplex (σ, s) has index σ * sheets + s and faces
/// (d_i σ, s). Fully coherent.
inline RupturedFibrationData build_trivial_cover(const TruncatedComplex& base, std::size_t sheets) {
  if (sheets == 0) throw Error("build_trivial_cover: need at least one sheet");
  ComplexBuilder b(base.dim_bound());
  SimplicialMap proj;
  for (std::size_t n = 0; n <= base.dim_bound(); ++n) {
    proj.per_dim.emplace_back();
    for (Index sigma = 0; sigma < base.count(n); ++sigma)
      for (std::size_t s = 0; s < sheets; ++s) {
        std::vector<Index> faces;
        for (auto f : base.faces_of({n, sigma})) faces.push_back(f * sheets + s);
        b.add(n, std::move(faces), "(" + base.name({n, sigma}) + "," + std::to_string(s) + ")");
        proj.per_dim[n].push_back(sigma);
      }
  }
  return {from_kan(b.build()), from_kan(base), std::move(proj), {}, {}};
}

/// Exact-lift property: every (total vertex, incident base edge, direction)
/// has exactly one lifted edge.
inline Report check_covering(const RupturedFibrationData& f) {
  Report r = check_simplicial_map(f.proj, f.total.underlying, f.base.underlying);
  if (!r.ok()) return r;
  const auto& E = f.total.underlying;
  const auto& B = f.base.underlying;
  if (E.dim_bound() < 1 || B.dim_bound() < 1) {
    r.add("covering", "covering needs edges in both complexes");
    return r;
  }
  for (Index x = 0; x < E.count(0); ++x) {
    const auto b = f.proj.per_dim[0][x];
    for (Index eps = 0; eps < B.count(1); ++eps) {
      for (bool forward : {true, false}) {
        const auto base_end = forward ? edge_source(B, eps) : edge_target(B, eps);
        if (base_end != b) continue;
        std::size_t lifts = 0;
        for (Index t = 0; t < E.count(1); ++t) {
          if (f.proj.per_dim[1][t] != eps) continue;
          lifts += (forward ? edge_source(E, t) : edge_target(E, t)) == x ? 1 : 0;
        }
        if (lifts != 1)
          r.add("covering", "vertex " + std::to_string(x) + " has " + std::to_string(lifts) + " lifts of edge " +
                                std::to_string(eps) + (forward ? " forward" : " backward"));
      }
    }
  }
  return r;
}

namespace detail {

inline void require_covering(const RupturedFibrationData& f) {
  if (auto r = check_covering(f); !r.ok()) throw Error("not a covering: " + r.items().front().message);
}

inline PathStep lift_step(const RupturedFibrationData& f, Index at, PathStep s) {
  const auto& E = f.total.underlying;
  for (Index t = 0; t < E.count(1); ++t) {
    if (f.proj.per_dim[1][t] != s.edge) continue;
    if ((s.forward ? edge_source(E, t) : edge_target(E, t)) == at) return {t, s.forward};
  }
  throw Error("lift_edge_path: no lift");  // unreachable on coverings
}

}  // namespace detail

/// The unique lift of `path` starting at total vertex e0.
inline EdgePath lift_edge_path(const RupturedFibrationData& f, Index e0, const EdgePath& path) {
  detail::require_covering(f);
  if (auto r = validate_edge_path(f.base.underlying, path); !r.ok())
    throw Error("lift_edge_path: " + r.items().front().message);
  if (e0 >= f.total.underlying.count(0) || f.proj.per_dim[0][e0] != path.start)
    throw Error("lift_edge_path: start vertex does not lie over the path source");
  EdgePath out{e0, {}};
  Index at = e0;
  for (auto s : path.steps) {
    auto lifted = detail::lift_step(f, at, s);
    out.steps.push_back(lifted);
    at = step_to(f.total.underlying, lifted);
  }
  return out;
}

/// Fiber vertices over b in index order; permutation positions refer to it.
inline std::vector<Index> fiber_vertices(const RupturedFibrationData& f, Index b) {
  std::vector<Index> out;
  for (Index x = 0; x < f.total.underlying.count(0); ++x)
    if (f.proj.per_dim[0][x] == b) out.push_back(x);
  return out;
}

inline FiberPermutation monodromy(const RupturedFibrationData& f, Index basepoint, const EdgePath& loop) {
  detail::require_covering(f);
  if (loop.start != basepoint) throw Error("monodromy: loop does not start at the basepoint");
  if (auto r = validate_edge_path(f.base.underlying, loop); !r.ok())
    throw Error("monodromy: " + r.items().front().message);
  if (path_end(f.base.underlying, loop) != basepoint) throw Error("monodromy: path is not a loop");
  auto fib = fiber_vertices(f, basepoint);
  std::vector<std::size_t> images;
  for (auto e : fib) {
    auto end = path_end(f.total.underlying, lift_edge_path(f, e, loop));
    images.push_back(static_cast<std::size_t>(std::find(fib.begin(), fib.end(), end) - fib.begin()));
  }
  return FiberPermutation(std::move(images));
}

/// Closure problem "lift the loop to a loop at `start`".
struct BasedLoopProblem {
  std::size_t loop = 0;
  Index start = 0;
  bool gapped = false;
  /// Monodromy gap witness when gapped.
  std::optional<GapMode> mode;
  /// The unique lift; it closes iff the problem is coherent.
  EdgePath lift;
};

struct MonodromyRupturedCover {
  RupturedFibrationData fibration;
  Index basepoint = 0;
  std::vector<Index> fiber;
  std::vector<EdgePath> loops;
  std::vector<FiberPermutation> monodromies;
  /// Ordered by (loop, fiber position).
  std::vector<BasedLoopProblem> registry;

  [[nodiscard]] std::size_t gapped_count() const {
    std::size_t n = 0;
    for (const auto& p : registry) n += p.gapped ? 1 : 0;
    return n;
  }
};

inline MonodromyRupturedCover monodromy_ruptured(const RupturedFibrationData& f, Index basepoint,
                                                 const std::vector<EdgePath>& loops) {
  MonodromyRupturedCover out;
  out.fibration = f;
  out.basepoint = basepoint;
  out.fiber = fiber_vertices(f, basepoint);
  out.loops = loops;
  for (std::size_t l = 0; l < loops.size(); ++l) {
    auto mu = monodromy(f, basepoint, loops[l]);
    for (std::size_t pos = 0; pos < out.fiber.size(); ++pos) {
      BasedLoopProblem p;
      p.loop = l;
      p.start = out.fiber[pos];
      p.lift = lift_edge_path(f, p.start, loops[l]);
      p.gapped = mu(pos) != pos;
      if (p.gapped) p.mode = GapMode::monodromy(mu);
      out.registry.push_back(std::move(p));
    }
    out.monodromies.push_back(std::move(mu));
  }
  return out;
}

/// Transport horn for a based-loop problem: the start point, the loop, and
/// the monodromy witness. Nothing when the lift closes.
inline std::optional<TransportHornInhabitant> detect_transport_horn(const MonodromyRupturedCover& m,
                                                                    std::size_t loop, Index e) {
  if (loop >= m.loops.size()) throw Error("detect_transport_horn: no such loop");
  for (const auto& p : m.registry) {
    if (p.loop != loop || p.start != e) continue;
    if (!p.gapped) return std::nullopt;
    return TransportHornInhabitant{e, m.loops[loop], p.mode};
  }
  throw Error("detect_transport_horn: vertex is not in the fiber over the basepoint");
}

}  // namespace rupture
