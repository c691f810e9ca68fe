#include <gtest/gtest.h>

#include "support.hpp"

using namespace rt;

namespace {

/// k-sheeted cyclic cover of the m-cycle: vertex s*m+i over v_i, and the
/// lift of e_{m-1} shifts the sheet by `shift`.
RupturedFibrationData cyclic_cover(std::size_t m, std::size_t k, std::size_t shift) {
  ComplexBuilder b(2);
  SimplicialMap proj;
  proj.per_dim.resize(3);
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t i = 0; i < m; ++i) {
      b.add_vertex();
      proj.per_dim[0].push_back(i);
    }
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t t = i + 1 == m ? (s + shift) % k : s;
      b.add_edge(s * m + i, t * m + (i + 1) % m);
      proj.per_dim[1].push_back(i);
    }
  return {from_kan(b.build()), from_kan(build_cycle(m)), std::move(proj), {}, {}};
}

/// All edge paths of exactly `len` steps from `start`.
std::vector<EdgePath> paths_of_length(const TruncatedComplex& x, Index start, std::size_t len) {
  std::vector<EdgePath> out{{start, {}}};
  for (std::size_t step = 0; step < len; ++step) {
    std::vector<EdgePath> next;
    for (const auto& p : out) {
      Index at = p.start;
      for (auto s : p.steps) at = s.forward ? raw_face(x, 1, s.edge, 0) : raw_face(x, 1, s.edge, 1);
      for (Index e = 0; e < x.count(1); ++e)
        for (bool fwd : {true, false})
          if ((fwd ? raw_face(x, 1, e, 1) : raw_face(x, 1, e, 0)) == at) {
            auto q = p;
            q.steps.push_back({e, fwd});
            next.push_back(std::move(q));
          }
    }
    out = std::move(next);
  }
  return out;
}

Index oracle_end(const TruncatedComplex& x, const EdgePath& p) {
  Index at = p.start;
  for (auto s : p.steps) at = s.forward ? raw_face(x, 1, s.edge, 0) : raw_face(x, 1, s.edge, 1);
  return at;
}

std::vector<EdgePath> loops_up_to(const TruncatedComplex& x, Index base, std::size_t max_len) {
  std::vector<EdgePath> out;
  for (std::size_t len = 0; len <= max_len; ++len)
    for (auto& p : paths_of_length(x, base, len))
      if (oracle_end(x, p) == base) out.push_back(std::move(p));
  return out;
}

/// Net number of times the loop winds forward around the m-cycle.
long winding(const RupturedFibrationData& f, const EdgePath& loop) {
  long w = 0;
  const auto m = f.base.underlying.count(0);
  for (auto s : loop.steps)
    if (s.edge == m - 1) w += s.forward ? 1 : -1;
  return w;
}

EdgePath generator(std::size_t m, std::size_t times = 1) {
  EdgePath p{0, {}};
  for (std::size_t t = 0; t < times; ++t)
    for (Index i = 0; i < m; ++i) p.steps.push_back({i, true});
  return p;
}

}  // namespace

TEST(Covering, DoubleCoverIsACovering) {
  EXPECT_TRUE(check_covering(build_double_cover(3)).ok());
  EXPECT_TRUE(check_covering(build_trivial_cover(build_cycle(3), 2)).ok());
  EXPECT_TRUE(check_covering(cyclic_cover(4, 3, 1)).ok());
}

TEST(Covering, MissingLiftIsReported) {
  auto f = build_double_cover(3);
  // Fold edge f5 onto base edge 1 so e2 loses a lift and e1 gains one.
  f.proj.per_dim[1][5] = 1;
  EXPECT_FALSE(check_covering(f).ok());
  EXPECT_THROW(monodromy(f, 0, generator(3)), Error);
}

TEST(Covering, DoubleCoverFiberAndLifts) {
  auto f = build_double_cover(3);
  EXPECT_EQ(fiber_vertices(f, 0), (std::vector<Index>{0, 3}));
  auto loop = generator(3);
  auto up0 = lift_edge_path(f, 0, loop);
  auto up3 = lift_edge_path(f, 3, loop);
  EXPECT_EQ(path_end(f.total.underlying, up0), 3u);
  EXPECT_EQ(path_end(f.total.underlying, up3), 0u);
  EXPECT_EQ(up0.steps, (std::vector<PathStep>{{0, true}, {1, true}, {2, true}}));
  EXPECT_EQ(up3.steps, (std::vector<PathStep>{{3, true}, {4, true}, {5, true}}));
  // One step from w1 along e1 ends at w2; backward along e0 ends at w0.
  EXPECT_EQ(path_end(f.total.underlying, lift_edge_path(f, 1, EdgePath{1, {{1, true}}})), 2u);
  EXPECT_EQ(path_end(f.total.underlying, lift_edge_path(f, 1, EdgePath{1, {{0, false}}})), 0u);
}

TEST(Covering, LiftRejectsBadStart) {
  auto f = build_double_cover(3);
  EXPECT_THROW(lift_edge_path(f, 1, generator(3)), Error);
  EXPECT_THROW(lift_edge_path(f, 0, EdgePath{0, {{1, true}}}), Error);
}

TEST(Monodromy, GeneratorSwapsTheFiber) {
  auto f = build_double_cover(3);
  auto mu = monodromy(f, 0, generator(3));
  EXPECT_EQ(mu.images(), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(mu.cycles(), "(0 1)");
  EXPECT_TRUE(monodromy(f, 0, generator(3, 2)).is_identity());
  EXPECT_TRUE(monodromy(f, 0, EdgePath{0, {}}).is_identity());
}

TEST(Monodromy, ReversedLoopInvertsTheAction) {
  auto f = cyclic_cover(3, 3, 1);
  auto fwd = monodromy(f, 0, generator(3));
  auto back = monodromy(f, 0, EdgePath{0, {{2, false}, {1, false}, {0, false}}});
  EXPECT_EQ(fwd.cycles(), "(0 1 2)");
  EXPECT_TRUE(back.after(fwd).is_identity());
}

TEST(Monodromy, RejectsNonLoops) {
  auto f = build_double_cover(3);
  EXPECT_THROW(monodromy(f, 0, EdgePath{0, {{0, true}}}), Error);
  EXPECT_THROW(monodromy(f, 1, generator(3)), Error);
}

TEST(Monodromy, RupturedRegistryForTheDoubleCover) {
  auto f = build_double_cover(3);
  auto m = monodromy_ruptured(f, 0, {generator(3), generator(3, 2)});
  ASSERT_EQ(m.registry.size(), 4u);
  EXPECT_EQ(m.gapped_count(), 2u);
  for (const auto& p : m.registry) {
    EXPECT_EQ(p.gapped, p.loop == 0);
    EXPECT_EQ(p.gapped, path_end(f.total.underlying, p.lift) != p.start);
    if (p.gapped) {
      ASSERT_TRUE(p.mode);
      EXPECT_EQ(*p.mode, GapMode::monodromy(Permutation({1, 0})));
      EXPECT_TRUE(validate_gap_mode(*p.mode).ok());
    } else {
      EXPECT_FALSE(p.mode);
    }
  }
  auto h = detect_transport_horn(m, 0, 3);
  ASSERT_TRUE(h);
  EXPECT_EQ(h->term, 3u);
  EXPECT_EQ(h->path, generator(3));
  EXPECT_EQ(h->gap->kind, "monodromy");
  EXPECT_FALSE(detect_transport_horn(m, 1, 0));
  EXPECT_THROW(detect_transport_horn(m, 0, 1), Error);
  EXPECT_THROW(detect_transport_horn(m, 2, 0), Error);
}

TEST(Monodromy, TrivialCoverHasNoGaps) {
  auto f = build_trivial_cover(build_cycle(3), 2);
  auto m = monodromy_ruptured(f, 0, {generator(3), generator(3, 2)});
  EXPECT_EQ(m.gapped_count(), 0u);
  for (const auto& mu : m.monodromies) EXPECT_TRUE(mu.is_identity());
}

// ------------------------------------------------------------- properties

TEST(CoveringProperty, MonodromyIsAnAntiHomomorphism) {
  for (auto [m, k, shift] : {std::tuple{3u, 2u, 1u}, {4u, 3u, 1u}, {3u, 3u, 2u}}) {
    auto f = cyclic_cover(m, k, shift);
    auto loops = loops_up_to(f.base.underlying, 0, 2 * m);
    ASSERT_GT(loops.size(), 2u);
    for (const auto& a : loops)
      for (const auto& b : loops) {
        auto lhs = monodromy(f, 0, concat(a, b));
        auto rhs = monodromy(f, 0, b).after(monodromy(f, 0, a));
        ASSERT_EQ(lhs, rhs) << to_string(a) << " then " << to_string(b);
      }
  }
}

TEST(CoveringProperty, MonodromyMatchesWinding) {
  for (auto [m, k, shift] : {std::tuple{3u, 2u, 1u}, {4u, 3u, 1u}, {3u, 4u, 3u}}) {
    auto f = cyclic_cover(m, k, shift);
    for (const auto& loop : loops_up_to(f.base.underlying, 0, 2 * m)) {
      auto mu = monodromy(f, 0, loop);
      const long w = winding(f, loop);
      for (std::size_t s = 0; s < k; ++s) {
        const long want = ((static_cast<long>(s) + w * static_cast<long>(shift)) % static_cast<long>(k) +
                           static_cast<long>(k)) %
                          static_cast<long>(k);
        EXPECT_EQ(mu(s), static_cast<std::size_t>(want)) << to_string(loop);
      }
    }
  }
}

TEST(CoveringProperty, LiftsAreUnique) {
  for (auto f : {build_double_cover(3), cyclic_cover(4, 3, 2), build_trivial_cover(build_cycle(3), 2)}) {
    const auto& B = f.base.underlying;
    const auto& E = f.total.underlying;
    for (Index b = 0; b < B.count(0); ++b)
      for (std::size_t len = 0; len <= 4; ++len)
        for (const auto& path : paths_of_length(B, b, len))
          for (auto e0 : fiber_vertices(f, b)) {
            std::size_t matches = 0;
            EdgePath found;
            for (const auto& up : paths_of_length(E, e0, len)) {
              bool over = true;
              for (std::size_t i = 0; i < len; ++i)
                over = over && f.proj.per_dim[1][up.steps[i].edge] == path.steps[i].edge &&
                       up.steps[i].forward == path.steps[i].forward;
              if (over) {
                ++matches;
                found = up;
              }
            }
            ASSERT_EQ(matches, 1u);
            EXPECT_EQ(lift_edge_path(f, e0, path), found);
          }
  }
}

TEST(CoveringProperty, GappedExactlyWhenTheLiftDoesNotClose) {
  auto f = cyclic_cover(3, 4, 2);
  auto loops = loops_up_to(f.base.underlying, 0, 6);
  auto m = monodromy_ruptured(f, 0, loops);
  ASSERT_EQ(m.registry.size(), loops.size() * 4);
  std::size_t gapped = 0;
  for (const auto& p : m.registry) {
    const bool closes = oracle_end(f.total.underlying, p.lift) == p.start;
    EXPECT_EQ(p.gapped, !closes);
    gapped += closes ? 0 : 1;
  }
  EXPECT_EQ(m.gapped_count(), gapped);
  EXPECT_GT(gapped, 0u);
}
