#pragma once

// Ruptured complexes: a truncated complex annotated with coherent simplices
// (Coh) and gap-witnessed horns (Gap), subject to Exclusion: no gapped horn
// has a coherent filler.

#include <optional>
#include <set>
#include <variant>

#include "rupture/gap_mode.hpp"
#include "rupture/simplicial.hpp"

namespace rupture {

struct RupturedComplex {
  TruncatedComplex underlying;
  /// coh[n] is Coh_n. Not required to be face-closed.
  std::vector<std::set<Index>> coh;
  /// Gap, keyed by exact horn equality. nullopt is a bare (plain) mark.
  std::map<HornSpec, std::optional<GapMode>> gap;

  RupturedComplex() : coh(1) {}
  RupturedComplex(TruncatedComplex x, std::vector<std::set<Index>> coherent = {},
                  std::map<HornSpec, std::optional<GapMode>> gapped = {})
      : underlying(std::move(x)), coh(std::move(coherent)), gap(std::move(gapped)) {
    coh.resize(underlying.dim_bound() + 1);
  }

  [[nodiscard]] std::size_t dim_bound() const { return underlying.dim_bound(); }

  [[nodiscard]] bool is_coherent(SimplexId s) const {
    return s.dim < coh.size() && coh[s.dim].contains(s.index);
  }

  [[nodiscard]] bool is_gapped(const HornSpec& h) const { return gap.contains(h); }

  friend bool operator==(const RupturedComplex&, const RupturedComplex&) = default;
};

struct CoherentlyFilled {
  std::vector<SimplexId> fillers;  // non-empty
  friend bool operator==(const CoherentlyFilled&, const CoherentlyFilled&) = default;
};
struct GapWitnessed {
  std::optional<GapMode> mode;
  friend bool operator==(const GapWitnessed&, const GapWitnessed&) = default;
};
struct Open {
  friend bool operator==(const Open&, const Open&) = default;
};

using Trichotomy = std::variant<CoherentlyFilled, GapWitnessed, Open>;

inline bool is_coherent(const Trichotomy& t) { return std::holds_alternative<CoherentlyFilled>(t); }
inline bool is_gapped(const Trichotomy& t) { return std::holds_alternative<GapWitnessed>(t); }
inline bool is_open(const Trichotomy& t) { return std::holds_alternative<Open>(t); }

inline const char* outcome_name(const Trichotomy& t) {
  return is_coherent(t) ? "coherent" : is_gapped(t) ? "gapped" : "open";
}

inline std::string mode_kind(const std::optional<GapMode>& m) { return m ? m->kind : "plain"; }

// ------------------------------------------------------------- validation

/// Exclusion only: one entry per (gapped horn, coherent filler) pair.
/// Assumes the underlying complex and the gapped horns are valid.
inline Report validate_exclusion(const RupturedComplex& r) {
  Report report;
  for (const auto& [h, mode] : r.gap) {
    for (auto sigma : find_fillers(r.underlying, h)) {
      if (r.is_coherent(sigma))
        report.add("exclusion", "gapped horn " + to_string(h) + " has coherent filler " + to_string(sigma));
    }
  }
  return report;
}

/// Full structural check: complex, Coh membership, gap horns and modes,
/// then Exclusion.
inline Report validate_ruptured(const RupturedComplex& r) {
  Report report = validate_complex(r.underlying);
  if (!report.ok()) return report;
  if (r.coh.size() != r.dim_bound() + 1) report.add("coh", "Coh has the wrong number of dimensions");
  for (std::size_t n = 0; n < r.coh.size(); ++n)
    for (auto i : r.coh[n])
      if (i >= r.underlying.count(n)) report.add("coh", "coherent " + to_string(SimplexId{n, i}) + " does not exist");
  for (const auto& [h, mode] : r.gap) {
    report.append(validate_horn(r.underlying, h));
    if (mode) report.append(validate_gap_mode(*mode));
  }
  if (!report.ok()) return report;
  report.append(validate_exclusion(r));
  return report;
}

// ------------------------------------------------------------- classification

inline Trichotomy classify_horn(const RupturedComplex& r, const HornSpec& h) {
  if (auto rep = validate_horn(r.underlying, h); !rep.ok())
    throw Error("classify_horn: " + rep.items().front().message);
  std::vector<SimplexId> coherent;
  for (auto sigma : find_fillers(r.underlying, h))
    if (r.is_coherent(sigma)) coherent.push_back(sigma);
  if (!coherent.empty()) return CoherentlyFilled{std::move(coherent)};
  if (auto it = r.gap.find(h); it != r.gap.end()) return GapWitnessed{it->second};
  return Open{};
}

/// Adds σ to Coh; rejects σ if it fills a gapped horn.
inline RupturedComplex with_coherent(RupturedComplex r, SimplexId sigma) {
  if (!r.underlying.contains(sigma)) throw Error("with_coherent: " + to_string(sigma) + " does not exist");
  for (const auto& [h, mode] : r.gap)
    if (fills(r.underlying, sigma, h))
      throw ExclusionConflict(to_string(sigma) + " fills gapped horn " + to_string(h));
  r.coh[sigma.dim].insert(sigma.index);
  return r;
}

/// Adds h to Gap; rejects h if it already has a coherent filler.
inline RupturedComplex with_gap(RupturedComplex r, const HornSpec& h, std::optional<GapMode> mode = {}) {
  if (auto rep = validate_horn(r.underlying, h); !rep.ok()) throw Error("with_gap: " + rep.items().front().message);
  for (auto sigma : find_fillers(r.underlying, h))
    if (r.is_coherent(sigma))
      throw ExclusionConflict("horn " + to_string(h) + " has coherent filler " + to_string(sigma));
  r.gap[h] = std::move(mode);
  return r;
}

// ------------------------------------------------------------- constructions

inline RupturedComplex from_kan(const TruncatedComplex& x) {
  std::vector<std::set<Index>> coh(x.dim_bound() + 1);
  for (std::size_t n = 0; n <= x.dim_bound(); ++n)
    for (Index i = 0; i < x.count(n); ++i) coh[n].insert(i);
  return RupturedComplex(x, std::move(coh));
}

/// Coh = ∅ and every enumerable horn gapped.
inline RupturedComplex fully_gapped(const TruncatedComplex& x) {
  std::map<HornSpec, std::optional<GapMode>> gap;
  for (auto& h : enumerate_all_horns(x, x.dim_bound())) gap.emplace(std::move(h), std::nullopt);
  return RupturedComplex(x, {}, std::move(gap));
}

struct SubComplex {
  TruncatedComplex complex;
  /// Injective map into the ambient complex.
  SimplicialMap inclusion;
};

/// Sub-complex on the given (face-closed) simplex sets, indices kept in
/// ambient order.
inline SubComplex restrict_to(const TruncatedComplex& x, const std::vector<std::set<Index>>& keep) {
  ComplexBuilder b(x.dim_bound());
  SimplicialMap inclusion;
  std::vector<std::map<Index, Index>> reindex(x.dim_bound() + 1);
  for (std::size_t n = 0; n <= x.dim_bound(); ++n) {
    inclusion.per_dim.emplace_back();
    for (auto i : keep[n]) {
      std::vector<Index> faces;
      for (auto f : x.faces_of({n, i})) faces.push_back(reindex[n - 1].at(f));
      reindex[n][i] = b.add(n, std::move(faces), x.label({n, i})).index;
      inclusion.per_dim[n].push_back(i);
    }
  }
  return {b.build(), std::move(inclusion)};
}

/// The face-closure of Coh, with its inclusion.
inline SubComplex coherent_core(const RupturedComplex& r) {
  auto keep = r.coh;
  for (std::size_t n = r.dim_bound(); n >= 1; --n)
    for (auto i : keep[n])
      for (auto f : r.underlying.faces_of({n, i})) keep[n - 1].insert(f);
  return restrict_to(r.underlying, keep);
}

// ------------------------------------------------------------- products

/// Degreewise product indexing: (x, y) in dimension n is x * |Y_n| + y.
struct ProductLayout {
  std::vector<std::size_t> right_counts;

  [[nodiscard]] Index pair(std::size_t n, Index left, Index right) const {
    return left * right_counts[n] + right;
  }
  [[nodiscard]] Index left(std::size_t n, Index p) const { return p / right_counts[n]; }
  [[nodiscard]] Index right(std::size_t n, Index p) const { return p % right_counts[n]; }
};

inline ProductLayout product_layout(const TruncatedComplex& y, std::size_t dim_bound) {
  ProductLayout l;
  for (std::size_t n = 0; n <= dim_bound; ++n) l.right_counts.push_back(y.count(n));
  return l;
}

/// Underlying degreewise product X × Y (the categorical product of
/// face-only complexes), truncated at the smaller bound.
inline TruncatedComplex product_complex(const TruncatedComplex& x, const TruncatedComplex& y) {
  const auto d = std::min(x.dim_bound(), y.dim_bound());
  auto layout = product_layout(y, d);
  const bool labelled = x.has_labels() || y.has_labels();
  ComplexBuilder b(d);
  for (std::size_t n = 0; n <= d; ++n) {
    for (Index i = 0; i < x.count(n); ++i) {
      for (Index j = 0; j < y.count(n); ++j) {
        std::vector<Index> faces;
        for (std::size_t f = 0; n > 0 && f <= n; ++f)
          faces.push_back(layout.pair(n - 1, x.face({n, i}, f).index, y.face({n, j}, f).index));
        std::string label =
            labelled ? "(" + x.name({n, i}) + "," + y.name({n, j}) + ")" : std::string();
        b.add(n, std::move(faces), std::move(label));
      }
    }
  }
  return b.build();
}

inline std::pair<SimplicialMap, SimplicialMap> product_projections(const TruncatedComplex& x,
                                                                 const TruncatedComplex& y) {
  const auto d = std::min(x.dim_bound(), y.dim_bound());
  auto layout = product_layout(y, d);
  SimplicialMap left, right;
  for (std::size_t n = 0; n <= d; ++n) {
    left.per_dim.emplace_back();
    right.per_dim.emplace_back();
    for (Index p = 0; p < x.count(n) * y.count(n); ++p) {
      left.per_dim[n].push_back(layout.left(n, p));
      right.per_dim[n].push_back(layout.right(n, p));
    }
  }
  return {left, right};
}

/// Coh componentwise; a horn is gapped iff a projection is gapped (the left
/// factor's mode wins). Exclusion is re-checked and a conflict throws.
inline RupturedComplex product(const RupturedComplex& r, const RupturedComplex& s) {
  const auto& x = r.underlying;
  const auto& y = s.underlying;
  const auto d = std::min(x.dim_bound(), y.dim_bound());
  auto layout = product_layout(y, d);
  RupturedComplex out(product_complex(x, y));
  for (std::size_t n = 0; n <= d; ++n)
    for (auto i : r.coh[n])
      for (auto j : s.coh[n]) out.coh[n].insert(layout.pair(n, i, j));

  auto pair_horn = [&](const HornSpec& hx, const HornSpec& hy) {
    HornSpec h{hx.n, hx.k, std::vector<Index>(hx.n + 1, kNoFace)};
    for (std::size_t i = 0; i <= hx.n; ++i)
      if (i != hx.k) h.faces[i] = layout.pair(hx.n - 1, hx.faces[i], hy.faces[i]);
    return h;
  };
  for (const auto& [hx, mode] : r.gap) {
    if (hx.n > d) continue;
    for (const auto& hy : enumerate_horns(y, hx.n, hx.k)) out.gap.emplace(pair_horn(hx, hy), mode);
  }
  for (const auto& [hy, mode] : s.gap) {
    if (hy.n > d) continue;
    for (const auto& hx : enumerate_horns(x, hy.n, hy.k)) out.gap.emplace(pair_horn(hx, hy), mode);
  }
  if (auto rep = validate_exclusion(out); !rep.ok())
    throw ExclusionConflict("product violates Exclusion: " + rep.items().front().message);
  return out;
}

// ------------------------------------------------------------- morphisms

/// Coherence and gap preservation of an underlying simplicial map.
inline Report check_morphism(const SimplicialMap& f, const RupturedComplex& r, const RupturedComplex& s) {
  Report report;
  const auto top = std::min(r.dim_bound(), s.dim_bound());
  for (std::size_t n = 0; n <= top; ++n)
    for (auto i : r.coh[n]) {
      auto img = f({n, i});
      if (!s.is_coherent(img))
        report.add("coherence", "coherent " + to_string(SimplexId{n, i}) + " maps to non-coherent " + to_string(img));
    }
  for (const auto& [h, mode] : r.gap) {
    if (h.n > top) continue;
    auto img = map_horn(f, h);
    if (!s.is_gapped(img))
      report.add("gap", "gapped horn " + to_string(h) + " maps to non-gapped " + to_string(img));
  }
  return report;
}

}  // namespace rupture
