#pragma once

// Finite face-map-only (semisimplicial) complexes truncated at a dimension
// bound: standard simplices, horns, filler search and Kan checking.
//
// Simplices are identified by (dimension, index). Faces of an n-simplex are
// stored as n+1 indices into dimension n-1, entry i being d_i. Degeneracies
// are not represented.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rupture/report.hpp"

namespace rupture {

using Index = std::size_t;
inline constexpr Index kNoFace = std::numeric_limits<Index>::max();

struct SimplexId {
  std::size_t dim = 0;
  Index index = 0;

  auto operator<=>(const SimplexId&) const = default;
};

inline std::string to_string(SimplexId s) {
  return std::to_string(s.dim) + ":" + std::to_string(s.index);
}

class TruncatedComplex {
 public:
  using FaceTable = std::vector<std::vector<std::vector<Index>>>;
  using LabelTable = std::vector<std::vector<std::string>>;

  /// The empty complex with bound 0.
  TruncatedComplex() : counts_(1, 0), faces_(1), labels_(1) {}

  /// Face references are not checked here; see validate_complex.
  TruncatedComplex(std::size_t dim_bound, std::vector<std::size_t> counts,
                   FaceTable faces, LabelTable labels = {})
      : dim_bound_(dim_bound),
        counts_(std::move(counts)),
        faces_(std::move(faces)),
        labels_(std::move(labels)) {
    counts_.resize(dim_bound_ + 1, 0);
    faces_.resize(dim_bound_ + 1);
    labels_.resize(dim_bound_ + 1);
    faces_[0].clear();
    for (std::size_t n = 0; n <= dim_bound_; ++n) labels_[n].resize(counts_[n]);
  }

  [[nodiscard]] std::size_t dim_bound() const { return dim_bound_; }

  [[nodiscard]] std::size_t count(std::size_t n) const {
    return n <= dim_bound_ ? counts_[n] : 0;
  }

  [[nodiscard]] std::size_t total_simplices() const {
    std::size_t total = 0;
    for (auto c : counts_) total += c;
    return total;
  }

  [[nodiscard]] bool contains(SimplexId s) const { return s.index < count(s.dim); }

  /// Face list of an n-simplex (n >= 1). Empty if the table has no entry.
  [[nodiscard]] std::span<const Index> faces_of(SimplexId s) const {
    if (s.dim == 0 || s.dim > dim_bound_ || s.index >= faces_[s.dim].size()) return {};
    return faces_[s.dim][s.index];
  }

  /// d_i(s). Assumes a validated complex.
  [[nodiscard]] SimplexId face(SimplexId s, std::size_t i) const {
    return {s.dim - 1, faces_[s.dim][s.index][i]};
  }

  [[nodiscard]] const std::string& label(SimplexId s) const { return labels_[s.dim][s.index]; }

  [[nodiscard]] std::string name(SimplexId s) const {
    const auto& l = label(s);
    return l.empty() ? to_string(s) : l;
  }

  [[nodiscard]] const std::vector<std::size_t>& counts() const { return counts_; }
  [[nodiscard]] const FaceTable& face_table() const { return faces_; }
  [[nodiscard]] const LabelTable& label_table() const { return labels_; }

  [[nodiscard]] bool has_labels() const {
    for (const auto& row : labels_)
      for (const auto& l : row)
        if (!l.empty()) return true;
    return false;
  }

  /// Vertex indices reachable from s by iterated faces.
  [[nodiscard]] std::set<Index> vertices(SimplexId s) const {
    std::set<SimplexId> frontier{s};
    for (std::size_t d = s.dim; d > 0; --d) {
      std::set<SimplexId> next;
      for (auto t : frontier)
        for (auto f : faces_of(t)) next.insert({d - 1, f});
      frontier = std::move(next);
    }
    std::set<Index> out;
    for (auto t : frontier) out.insert(t.index);
    return out;
  }

  friend bool operator==(const TruncatedComplex&, const TruncatedComplex&) = default;

 private:
  std::size_t dim_bound_ = 0;
  std::vector<std::size_t> counts_;
  FaceTable faces_;
  LabelTable labels_;
};

/// Incremental construction of a complex, mostly for fixtures.
class ComplexBuilder {
 public:
  explicit ComplexBuilder(std::size_t dim_bound)
      : dim_bound_(dim_bound), counts_(dim_bound + 1, 0), faces_(dim_bound + 1),
        labels_(dim_bound + 1) {}

  SimplexId add_vertex(std::string label = {}) { return add(0, {}, std::move(label)); }

  SimplexId add(std::size_t dim, std::vector<Index> faces, std::string label = {}) {
    if (dim > dim_bound_) throw Error("simplex dimension exceeds the bound");
    if (dim > 0 && faces.size() != dim + 1) throw Error("an n-simplex needs n+1 faces");
    SimplexId id{dim, counts_[dim]++};
    if (dim > 0) faces_[dim].push_back(std::move(faces));
    labels_[dim].push_back(std::move(label));
    return id;
  }

  /// Edge with d_1 = source, d_0 = target.
  SimplexId add_edge(Index source, Index target, std::string label = {}) {
    return add(1, {target, source}, std::move(label));
  }

  [[nodiscard]] TruncatedComplex build() const {
    return TruncatedComplex(dim_bound_, counts_, faces_, labels_);
  }

 private:
  std::size_t dim_bound_;
  std::vector<std::size_t> counts_;
  TruncatedComplex::FaceTable faces_;
  TruncatedComplex::LabelTable labels_;
};

// ------------------------------------------------------------- validation

/// Checks face arity, face resolution and the simplicial identities
/// d_i d_j = d_{j-1} d_i (i < j).
inline Report validate_complex(const TruncatedComplex& x) {
  Report report;
  const auto& table = x.face_table();
  bool resolved = true;
  for (std::size_t n = 1; n <= x.dim_bound(); ++n) {
    if (table[n].size() != x.count(n)) {
      report.add("face-table", "dimension " + std::to_string(n) + " lists " +
                                   std::to_string(table[n].size()) + " face rows for " +
                                   std::to_string(x.count(n)) + " simplices");
      resolved = false;
    }
    for (Index s = 0; s < table[n].size(); ++s) {
      const auto& row = table[n][s];
      SimplexId id{n, s};
      if (row.size() != n + 1) {
        report.add("arity", to_string(id) + " has " + std::to_string(row.size()) +
                                " faces, expected " + std::to_string(n + 1));
        resolved = false;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (row[i] >= x.count(n - 1)) {
          report.add("unresolved-face", "d_" + std::to_string(i) + "(" + to_string(id) +
                                            ") = " + to_string({n - 1, row[i]}) +
                                            " does not exist");
          resolved = false;
        }
      }
    }
  }
  if (!resolved) return report;

  for (std::size_t n = 2; n <= x.dim_bound(); ++n) {
    for (Index s = 0; s < x.count(n); ++s) {
      SimplexId sigma{n, s};
      for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
          auto lhs = x.face(x.face(sigma, j), i);
          auto rhs = x.face(x.face(sigma, i), j - 1);
          if (lhs != rhs) {
            report.add("simplicial-identity",
                       to_string(sigma) + " i=" + std::to_string(i) + " j=" + std::to_string(j) +
                           ": d_i d_j = " + to_string(lhs) + " but d_{j-1} d_i = " +
                           to_string(rhs));
          }
        }
      }
    }
  }
  return report;
}

// ------------------------------------------------------------- constructors

/// dim_bound = D; one simplex per dimension, every face equal to the unique
/// simplex below. The terminal object and the unit of products.
inline TruncatedComplex terminal_complex(std::size_t dim_bound) {
  ComplexBuilder b(dim_bound);
  b.add_vertex("*");
  for (std::size_t n = 1; n <= dim_bound; ++n) b.add(n, std::vector<Index>(n + 1, 0));
  return b.build();
}

namespace detail {

inline std::string vertex_label(const std::vector<int>& verts) {
  std::string s = "[";
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(verts[i]);
  }
  return s + "]";
}

inline void subsets_of_size(int n_vertices, std::size_t size, std::vector<int>& cur, int start,
                            std::vector<std::vector<int>>& out) {
  if (cur.size() == size) {
    out.push_back(cur);
    return;
  }
  for (int v = start; v < n_vertices; ++v) {
    cur.push_back(v);
    subsets_of_size(n_vertices, size, cur, v + 1, out);
    cur.pop_back();
  }
}

/// Builds a complex from a face-closed family of vertex sets, ordered by
/// dimension then lexicographically.
inline TruncatedComplex from_vertex_sets(std::size_t dim_bound,
                                         const std::vector<std::vector<std::vector<int>>>& by_dim) {
  ComplexBuilder b(dim_bound);
  std::vector<std::map<std::vector<int>, Index>> index(by_dim.size());
  for (std::size_t m = 0; m < by_dim.size() && m <= dim_bound; ++m) {
    for (const auto& verts : by_dim[m]) {
      std::vector<Index> faces;
      if (m > 0) {
        for (std::size_t i = 0; i <= m; ++i) {
          auto f = verts;
          f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
          faces.push_back(index[m - 1].at(f));
        }
      }
      index[m][verts] = b.add(m, std::move(faces), vertex_label(verts)).index;
    }
  }
  return b.build();
}

}  // namespace detail

/// Standard n-simplex: the m-simplices are the increasing (m+1)-subsequences
/// of {0..n}, d_i deleting the i-th vertex; truncated at dim_bound.
inline TruncatedComplex standard_simplex(std::size_t n, std::size_t dim_bound) {
  const auto top = std::min(n, dim_bound);
  std::vector<std::vector<std::vector<int>>> by_dim(top + 1);
  for (std::size_t m = 0; m <= top; ++m) {
    std::vector<int> cur;
    detail::subsets_of_size(static_cast<int>(n) + 1, m + 1, cur, 0, by_dim[m]);
  }
  return detail::from_vertex_sets(dim_bound, by_dim);
}

/// Horn Λ^n_k: the boundary of Δ^n without its k-th face d_k (the face
/// opposite vertex k). dim_bound is n so filling problems stay representable.
inline TruncatedComplex horn_complex(std::size_t n, std::size_t k) {
  if (n < 1) throw Error("horn_complex: n must be at least 1");
  if (k > n) throw Error("horn_complex: missing-face index out of range");
  std::vector<std::vector<std::vector<int>>> by_dim(n);
  for (std::size_t m = 0; m + 1 <= n; ++m) {
    std::vector<std::vector<int>> all;
    std::vector<int> cur;
    detail::subsets_of_size(static_cast<int>(n) + 1, m + 1, cur, 0, all);
    for (auto& s : all) {
      // Keep s iff it lies in some face d_i with i != k, i.e. some i != k is absent.
      bool kept = false;
      for (int i = 0; i <= static_cast<int>(n) && !kept; ++i)
        kept = i != static_cast<int>(k) && std::find(s.begin(), s.end(), i) == s.end();
      if (kept) by_dim[m].push_back(std::move(s));
    }
  }
  return detail::from_vertex_sets(n, by_dim);
}

// ------------------------------------------------------------- horns

struct HornSpec {
  std::size_t n = 1;
  std::size_t k = 0;
  /// n+1 entries; faces[i] indexes dimension n-1; faces[k] == kNoFace.
  std::vector<Index> faces;

  auto operator<=>(const HornSpec&) const = default;
};

inline HornSpec make_horn_spec(std::size_t n, std::size_t k, const std::map<std::size_t, Index>& faces) {
  HornSpec h{n, k, std::vector<Index>(n + 1, kNoFace)};
  for (auto [i, f] : faces) {
    if (i > n || i == k) throw Error("horn face position out of range");
    h.faces[i] = f;
  }
  return h;
}

inline std::string to_string(const HornSpec& h) {
  std::string s = "(" + std::to_string(h.n) + "," + std::to_string(h.k) + ")[";
  for (std::size_t i = 0; i < h.faces.size(); ++i) {
    if (i) s += ",";
    s += i == h.k ? std::string("-") : std::to_string(h.faces[i]);
  }
  return s + "]";
}

/// Face-compatibility of an (n,k) assignment: d_i(faces[j]) = d_{j-1}(faces[i])
/// for i < j, both != k. Faces are assumed to exist.
inline bool horn_compatible(const TruncatedComplex& x, const HornSpec& h) {
  if (h.n < 2) return true;
  for (std::size_t j = 1; j <= h.n; ++j) {
    if (j == h.k) continue;
    for (std::size_t i = 0; i < j; ++i) {
      if (i == h.k) continue;
      auto lhs = x.face({h.n - 1, h.faces[j]}, i);
      auto rhs = x.face({h.n - 1, h.faces[i]}, j - 1);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

/// Empty iff h is a well-shaped, resolvable, compatible horn of x.
inline Report validate_horn(const TruncatedComplex& x, const HornSpec& h) {
  Report r;
  if (h.n < 1 || h.k > h.n || h.faces.size() != h.n + 1) {
    r.add("horn-shape", "malformed horn " + to_string(h));
    return r;
  }
  if (h.n > x.dim_bound()) {
    r.add("horn-dimension", to_string(h) + " exceeds dim_bound " + std::to_string(x.dim_bound()));
    return r;
  }
  for (std::size_t i = 0; i <= h.n; ++i) {
    if (i == h.k) {
      if (h.faces[i] != kNoFace) r.add("horn-shape", to_string(h) + " assigns the missing face");
      continue;
    }
    if (h.faces[i] >= x.count(h.n - 1))
      r.add("unresolved-face", to_string(h) + " face " + std::to_string(i) + " does not exist");
  }
  if (r.ok() && !horn_compatible(x, h))
    r.add("horn-compatibility", to_string(h) + " violates boundary compatibility");
  return r;
}

/// A horn that a degenerate simplex would fill. The face-only model omits
/// those fillers: every 1-horn, and 2-horns whose two faces coincide in the
/// adjacent positions {1,2} (k = 0) or {0,1} (k = 2).
inline bool is_degenerate_horn(const HornSpec& h) {
  if (h.n == 1) return true;
  if (h.n == 2) {
    if (h.k == 0) return h.faces[1] == h.faces[2];
    if (h.k == 2) return h.faces[0] == h.faces[1];
  }
  return false;
}

namespace detail {

inline void extend_horn(const TruncatedComplex& x, HornSpec& h, std::size_t pos,
                        std::vector<HornSpec>& out) {
  if (pos > h.n) {
    out.push_back(h);
    return;
  }
  if (pos == h.k) {
    extend_horn(x, h, pos + 1, out);
    return;
  }
  for (Index f = 0; f < x.count(h.n - 1); ++f) {
    h.faces[pos] = f;
    bool ok = true;
    // Check the pairs (i, pos) with i < pos already assigned.
    for (std::size_t i = 0; i < pos && ok; ++i) {
      if (i == h.k) continue;
      ok = x.face({h.n - 1, f}, i) == x.face({h.n - 1, h.faces[i]}, pos - 1);
    }
    if (ok) extend_horn(x, h, pos + 1, out);
  }
  h.faces[pos] = kNoFace;
}

}  // namespace detail

/// Every boundary-compatible (n,k) face assignment, lexicographic on faces.
inline std::vector<HornSpec> enumerate_horns(const TruncatedComplex& x, std::size_t n, std::size_t k) {
  if (n < 1 || n > x.dim_bound()) throw Error("enumerate_horns: dimension out of range");
  if (k > n) throw Error("enumerate_horns: missing-face index out of range");
  std::vector<HornSpec> out;
  HornSpec h{n, k, std::vector<Index>(n + 1, kNoFace)};
  detail::extend_horn(x, h, 0, out);
  return out;
}

/// All horns of dimension 1..max_dim, ordered by (n, k, faces).
inline std::vector<HornSpec> enumerate_all_horns(const TruncatedComplex& x, std::size_t max_dim) {
  std::vector<HornSpec> out;
  for (std::size_t n = 1; n <= std::min(max_dim, x.dim_bound()); ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      auto hs = enumerate_horns(x, n, k);
      out.insert(out.end(), hs.begin(), hs.end());
    }
  return out;
}

inline bool fills(const TruncatedComplex& x, SimplexId sigma, const HornSpec& h) {
  if (sigma.dim != h.n) return false;
  for (std::size_t i = 0; i <= h.n; ++i)
    if (i != h.k && x.face(sigma, i).index != h.faces[i]) return false;
  return true;
}

/// n-simplices whose faces match the horn, in index order.
inline std::vector<SimplexId> find_fillers(const TruncatedComplex& x, const HornSpec& h) {
  if (auto r = validate_horn(x, h); !r.ok()) throw Error("find_fillers: " + r.items().front().message);
  std::vector<SimplexId> out;
  for (Index s = 0; s < x.count(h.n); ++s)
    if (fills(x, {h.n, s}, h)) out.push_back({h.n, s});
  return out;
}

struct KanResult {
  bool kan = true;
  std::optional<HornSpec> unfilled;
};

/// Kan condition for non-degenerate horns of dimension <= max_dim. Horns
/// above the truncation are outside the model; degenerate horns are filled
/// by omitted degenerate simplices.
inline KanResult is_kan_up_to(const TruncatedComplex& x, std::size_t max_dim) {
  if (max_dim > x.dim_bound()) throw Error("is_kan_up_to: max_dim exceeds dim_bound");
  for (const auto& h : enumerate_all_horns(x, max_dim)) {
    if (is_degenerate_horn(h)) continue;
    if (find_fillers(x, h).empty()) return {false, h};
  }
  return {};
}

// ------------------------------------------------------------- maps

/// per_dim[n][i] is the image of the n-simplex i, for n = 0..min(D_src, D_tgt).
struct SimplicialMap {
  std::vector<std::vector<Index>> per_dim;

  [[nodiscard]] SimplexId operator()(SimplexId s) const { return {s.dim, per_dim[s.dim][s.index]}; }

  friend bool operator==(const SimplicialMap&, const SimplicialMap&) = default;
};

inline SimplicialMap identity_map(const TruncatedComplex& x) {
  SimplicialMap f;
  for (std::size_t n = 0; n <= x.dim_bound(); ++n) {
    std::vector<Index> row(x.count(n));
    for (Index i = 0; i < row.size(); ++i) row[i] = i;
    f.per_dim.push_back(std::move(row));
  }
  return f;
}

/// g ∘ f.
inline SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f) {
  SimplicialMap out;
  const auto dims = std::min(f.per_dim.size(), g.per_dim.size());
  for (std::size_t n = 0; n < dims; ++n) {
    std::vector<Index> row;
    row.reserve(f.per_dim[n].size());
    for (auto v : f.per_dim[n]) row.push_back(g.per_dim[n].at(v));
    out.per_dim.push_back(std::move(row));
  }
  return out;
}

/// Totality over dimensions 0..min(D_x, D_y) and face commutation.
inline Report check_simplicial_map(const SimplicialMap& f, const TruncatedComplex& x,
                                   const TruncatedComplex& y) {
  Report r;
  const auto top = std::min(x.dim_bound(), y.dim_bound());
  if (f.per_dim.size() != top + 1) {
    r.add("map-dimensions", "map covers " + std::to_string(f.per_dim.size()) +
                                " dimensions, expected " + std::to_string(top + 1));
    return r;
  }
  bool total = true;
  for (std::size_t n = 0; n <= top; ++n) {
    if (f.per_dim[n].size() != x.count(n)) {
      r.add("map-totality", "dimension " + std::to_string(n) + " maps " +
                                std::to_string(f.per_dim[n].size()) + " of " +
                                std::to_string(x.count(n)) + " simplices");
      total = false;
      continue;
    }
    for (Index i = 0; i < x.count(n); ++i) {
      if (f.per_dim[n][i] >= y.count(n)) {
        r.add("map-target", to_string(SimplexId{n, i}) + " maps to missing " +
                                to_string(SimplexId{n, f.per_dim[n][i]}));
        total = false;
      }
    }
  }
  if (!total) return r;
  for (std::size_t n = 1; n <= top; ++n) {
    for (Index s = 0; s < x.count(n); ++s) {
      SimplexId sigma{n, s};
      for (std::size_t i = 0; i <= n; ++i) {
        auto lhs = f(x.face(sigma, i));
        auto rhs = y.face(f(sigma), i);
        if (lhs != rhs)
          r.add("face-commutation", "f(d_" + std::to_string(i) + " " + to_string(sigma) + ") = " +
                                        to_string(lhs) + " but d_" + std::to_string(i) + " f(" +
                                        to_string(sigma) + ") = " + to_string(rhs));
      }
    }
  }
  return r;
}

/// Image of a horn under a map (faces mapped one dimension down).
inline HornSpec map_horn(const SimplicialMap& f, const HornSpec& h) {
  HornSpec out = h;
  for (std::size_t i = 0; i <= h.n; ++i)
    if (i != h.k) out.faces[i] = f.per_dim[h.n - 1][h.faces[i]];
  return out;
}

}  // namespace rupture
