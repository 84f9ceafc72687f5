#include <gtest/gtest.h>

#include "fenceinfer/explicit.h"
#include "fenceinfer/generators.h"
#include "test_support.h"

using namespace fenceinfer;
using fenceinfer::testing::all_states;
using fenceinfer::testing::BruteGraph;
using fenceinfer::testing::make_rng;
using fenceinfer::testing::random_system;

namespace {

unsigned false_in_j(const State & s, const std::vector<unsigned> & J)
{
  unsigned c = 0;
  for (unsigned j : J) c += !s[j - 1];
  return c;
}

}  // namespace

TEST(Reach, MatchesBruteForce)
{
  auto rng = make_rng(1);
  for (int i = 0; i < 30; ++i) {
    auto ts = random_system({4, 3, i % 2 == 0, false}, rng);
    BruteGraph g(ts);
    ExplicitSystem es(ts);
    auto fd = g.forward_dist(), bd = g.backward_dist();
    for (Bound k : {0U, 1U, 2U, 3U, unbounded}) {
      auto f = es.forward_reach(k), b = es.backward_reach(k);
      for (Bits s = 0; s < 16; ++s) {
        const int kk = k == unbounded ? -1 : static_cast<int>(k);
        EXPECT_EQ(f.contains(s), fd[s] >= 0 && (kk < 0 || fd[s] <= kk));
        EXPECT_EQ(b.contains(s), bd[s] >= 0 && (kk < 0 || bd[s] <= kk));
      }
    }
    EXPECT_EQ(es.forward_reach(0), es.init());
    EXPECT_EQ(es.backward_reach(0), es.bad());
    EXPECT_EQ(es.forward_reach(unbounded), ExplicitSystem(dualize(ts)).backward_reach(unbounded));
    EXPECT_TRUE(es.forward_reach(1).subset_of(es.forward_reach(2)));
  }
}

TEST(Reach, Traces)
{
  auto rng = make_rng(2);
  for (int i = 0; i < 20; ++i) {
    auto ts = random_system({4, 3, true, false}, rng);
    ExplicitSystem es(ts);
    for (const State & s : es.forward_reach(unbounded).states()) {
      auto t = es.trace_from_init(s);
      EXPECT_TRUE(is_execution(ts, t));
      EXPECT_TRUE(ts.init().eval(t.front()));
      EXPECT_EQ(t.back(), s);
      EXPECT_EQ(t.size(), es.forward_distance(s.bits()) + 1);
    }
    for (const State & s : es.backward_reach(unbounded).states()) {
      auto t = es.trace_to_bad(s);
      EXPECT_TRUE(is_execution(ts, t));
      EXPECT_TRUE(ts.bad().eval(t.back()));
    }
  }
}

TEST(Reach, ParityBackwardReachIsOddParity)
{
  std::vector<unsigned> J{1, 2};
  auto ts = gen_parity(4, J);
  ExplicitSystem es(ts);
  auto b = es.backward_reach(unbounded);
  for (const State & s : all_states(4)) EXPECT_EQ(b.contains(s), false_in_j(s, J) % 2 == 1);
}

TEST(Gfp, InductiveAndFencedAtCoDiameter)
{
  auto rng = make_rng(3);
  int safe = 0;
  for (int i = 0; i < 60; ++i) {
    auto ts = random_system({4, 2, true, i % 2 == 0}, rng);
    ExplicitSystem es(ts);
    try {
      auto g = gfp(es);
      auto k = co_diameter(es);
      ++safe;
      EXPECT_TRUE(verify_invariant(es, g));
      EXPECT_TRUE(BruteGraph(ts).is_inductive([&](const State & s) { return g.contains(s); }));
      EXPECT_TRUE(check_fence(es, g, k, Direction::Backwards).holds);
      EXPECT_EQ(es.backward_reach(k), es.backward_reach(unbounded));
      if (k > 0) EXPECT_NE(es.backward_reach(k - 1), es.backward_reach(unbounded));
    } catch (const UnsafeSystem & u) {
      EXPECT_TRUE(is_execution(ts, u.trace()));
      EXPECT_TRUE(ts.init().eval(u.trace().front()));
      EXPECT_TRUE(ts.bad().eval(u.trace().back()));
    }
  }
  EXPECT_GT(safe, 5);
}

TEST(Gfp, ParityCoDiameter)
{
  for (unsigned size : {2U, 4U, 6U}) {
    std::vector<unsigned> J;
    for (unsigned j = 1; j <= size; ++j) J.push_back(j);
    ExplicitSystem es(gen_parity(8, J));
    EXPECT_EQ(co_diameter(es), (size - 2) / 2 + 2) << "|J| = " << size;
  }
}

TEST(Boundary, Examples)
{
  auto cube3 = StateSet::of(f_and({Formula::var(0), Formula::var(1), Formula::var(2)}), 3);
  auto outer = boundary(cube3, Side::Outer);
  std::vector<State> expect{State::parse("110"), State::parse("101"), State::parse("011")};
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(outer.states(), expect);
  EXPECT_EQ(boundary(cube3, Side::Inner).states(), std::vector<State>{State::all_true(3)});
  EXPECT_TRUE(boundary(StateSet::full(3), Side::Inner).empty());
  EXPECT_TRUE(boundary(StateSet::full(3), Side::Outer).empty());

  std::vector<unsigned> J{1, 2, 3, 5};
  auto ts = gen_parity(8, J);
  auto ob = boundary(StateSet::of(*ts.def("inv"), 8), Side::Outer);
  for (const State & s : all_states(8)) EXPECT_EQ(ob.contains(s), false_in_j(s, J) == 1);
}

TEST(Boundary, NonemptyForProperSubsets)
{
  auto rng = make_rng(4);
  for (int i = 0; i < 200; ++i) {
    StateSet s(4);
    const int m = 1 + static_cast<int>(rng() % 14);
    for (int j = 0; j < m; ++j) s.insert(rng() & 15);
    if (s.empty() || s.is_full()) continue;
    EXPECT_FALSE(boundary(s, Side::Inner).empty());
    EXPECT_FALSE(boundary(s, Side::Outer).empty());
  }
}

TEST(Fence, Parity)
{
  auto ts = gen_parity(8, {1, 2, 3, 5});
  Formula inv = *ts.def("inv");
  auto back = check_fence(ts, inv, 2, Direction::Backwards);
  EXPECT_TRUE(back.holds);
  EXPECT_TRUE(back.inductive);
  EXPECT_EQ(back.boundary_size, 4U * 16U);
  EXPECT_TRUE(check_fence(ts, inv, 1, Direction::Forwards).holds);
  auto j = to_json(back);
  EXPECT_EQ(j["direction"], "backwards");
  EXPECT_EQ(j["k"], 2);
  EXPECT_EQ(j["holds"], true);
  EXPECT_TRUE(j["violations"].empty());
  auto inf = to_json(check_fence(ts, inv, unbounded, Direction::Backwards));
  EXPECT_EQ(inf["k"], "inf");
}

TEST(Fence, ViolationsAreExactlyUnreachedBoundary)
{
  auto rng = make_rng(5);
  for (int i = 0; i < 30; ++i) {
    auto ts = random_system({4, 3, true, false}, rng);
    ExplicitSystem es(ts);
    BruteGraph g(ts);
    StateSet inv(4);
    for (int j = 0; j < 7; ++j) inv.insert(rng() & 15);
    for (Bound k : {0U, 1U, unbounded}) {
      auto r = check_fence(es, inv, k, Direction::Backwards);
      std::vector<State> expect;
      for (const State & s : all_states(4)) {
        if (inv.contains(s)) continue;
        bool adj = false;
        for (const State & t : hamming_neighbors(s)) adj = adj || inv.contains(t);
        if (adj && !g.backward_within(s.bits(), k == unbounded ? -1 : static_cast<int>(k))) {
          expect.push_back(s);
        }
      }
      EXPECT_EQ(r.violations, expect);
      EXPECT_EQ(r.holds, expect.empty());
    }
  }
}

TEST(VerifyInvariant, AgreesWithBruteForce)
{
  auto rng = make_rng(6);
  int agree_true = 0;
  for (int i = 0; i < 200; ++i) {
    auto ts = random_system({3 + i % 2, 2, true, false}, rng);
    auto inv = fenceinfer::testing::random_formula(ts.n(), 3, rng);
    const bool brute = BruteGraph(ts).is_inductive([&](const State & s) { return inv.eval(s); });
    EXPECT_EQ(verify_invariant(ts, inv), brute);
    agree_true += brute;
  }
  EXPECT_GT(agree_true, 0);
  auto ts = gen_parity(4, {1, 2});
  EXPECT_FALSE(verify_invariant(ts, f_and(Formula::var(0), f_not(Formula::var(0)))));
  ExplicitSystem es(ts);
  EXPECT_TRUE(verify_invariant(es, gfp(es)));
}

TEST(Bounds, Parse)
{
  EXPECT_EQ(parse_bound("3"), 3U);
  EXPECT_EQ(parse_bound("inf"), unbounded);
  EXPECT_THROW(parse_bound("x"), UsageError);
  EXPECT_THROW(parse_bound("-1"), UsageError);
  EXPECT_EQ(bound_to_string(unbounded), "inf");
}
