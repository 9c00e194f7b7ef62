#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "tightpow/embed.hpp"

using namespace tightpow;

namespace {

const PowerParams k32(3, 2);
const double kRegimeP = std::pow(60.0, -(1.0 / 3 - 0.1));

bool is_tight_path(const Hypergraph& h, std::span<const Vertex> seq) {
  for (std::size_t i = 0; i + h.k() <= seq.size(); ++i)
    if (!h.contains(seq.subspan(i, h.k()))) return false;
  return true;
}

}  // namespace

TEST(ExtendTightPath, Examples) {
  const auto k10 = complete_graph(10, 3);
  Rng rng(1);
  const OrderedTuple end{0, 1, 2};
  const auto added = extend_tight_path(k10, k32, end, VertexSet::range(10), 5, {7}, rng);
  EXPECT_EQ(added.size(), 5u);
  for (Vertex v : added) {
    EXPECT_NE(v, 7u);
    EXPECT_GT(v, 2u);
  }
  EXPECT_EQ(std::set<Vertex>(added.begin(), added.end()).size(), 5u);
  try {
    extend_tight_path(k10, k32, end, VertexSet{}, 2, {}, rng);
    FAIL();
  } catch (const ExtensionFailed& e) {
    EXPECT_EQ(e.progress(), 0u);
  }
  EXPECT_THROW(extend_tight_path(k10, k32, OrderedTuple{0}, VertexSet::range(10), 1, {}, rng), InvalidArgument);
}

// intersecting_host(12,3,6) from an end inside A: 20/20 seeds reach 6 steps (9 steps: 10/20).
TEST(ExtendTightPath, IntersectingHostPinned) {
  const auto h = intersecting_host(12, 3, 6);
  int six = 0, nine = 0;
  for (int t = 0; t < 20; ++t) {
    const OrderedTuple end{0, 1, 2};
    for (std::size_t steps : {6, 9}) {
      Rng rng(trial_seed(5, t));
      try {
        const auto added = extend_tight_path(h, k32, end, VertexSet::range(12), steps, {}, rng);
        OrderedTuple seq = end;
        seq.insert(seq.end(), added.begin(), added.end());
        EXPECT_TRUE(is_tight_path(h, seq));
        (steps == 6 ? six : nine)++;
      } catch (const ExtensionFailed&) {
      }
    }
  }
  EXPECT_EQ(six, 20);
  EXPECT_EQ(nine, 10);
}

TEST(AbsorberCandidates, Examples) {
  const auto k12 = complete_graph(12, 3);
  Rng rng(2);
  const VertexSet y = VertexSet::range(12).minus({0});
  const auto c = sample_absorber_candidates(k12, k32, 0, y, 10, 10, rng);
  EXPECT_TRUE(c.complete);
  EXPECT_EQ(c.tuples.size(), 10u);
  EXPECT_EQ(c.attempts, 10u);
  for (const auto& t : c.tuples) EXPECT_TRUE(is_absorber(k12, k32, {0, t}));
  EXPECT_TRUE(sample_absorber_candidates(k12, k32, 0, VertexSet{1, 2, 3, 4, 5}, 5, 100, rng).tuples.empty());
  EXPECT_THROW(sample_absorber_candidates(k12, k32, 0, VertexSet::range(12), 5, 100, rng), InvalidArgument);
}

// Every returned tuple spans the host pattern of A around v; bernoulli_host(60,3,0.5),
// want=50, budget=5000: 100/100 seeds reach 50.
TEST(AbsorberCandidates, BernoulliHostPinned) {
  const auto a = absorber_gadget(k32);
  int full = 0;
  for (int t = 0; t < 100; ++t) {
    const auto h = bernoulli_host(60, 3, 0.5, trial_seed(6, t));
    Rng rng(trial_seed(7, t));
    const auto c = sample_absorber_candidates(h, k32, 0, VertexSet::range(60).minus({0}), 50, 5000, rng);
    full += c.tuples.size() >= 50;
    for (const auto& tuple : c.tuples) {
      const auto at = place_gadget(a, OrderedTuple{0}, tuple);
      for (const auto& e : a.host_pattern) ASSERT_TRUE(h.contains(map_edge(e, at)));
    }
  }
  EXPECT_EQ(full, 100);
}

TEST(PhaseSchedule, Shapes) {
  const auto all = PhaseSchedule::attempt_all(3);
  EXPECT_EQ(all.phases(), 3u);
  EXPECT_NO_THROW(all.validate(3));
  EXPECT_THROW(all.validate(2), InvalidArgument);
  const auto sched = PhaseSchedule::shrinking(3, 60, 0.1);
  EXPECT_EQ(sched.phases(), 4u);
  for (std::size_t j = 0; j < sched.phases(); ++j) {
    EXPECT_GE(sched.attempts[j], 1u);
    if (j) {
      EXPECT_LE(sched.attempts[j], sched.attempts[j - 1]);
    }
  }
  PhaseSchedule bad{{0, 1}, {1, 2}};
  EXPECT_THROW(bad.validate(2), InvalidArgument);
}

TEST(GreedyEmbed, SingleTaskFromRoundOne) {
  const auto a = absorber_gadget(k32);
  // candidate tuple whose gadget edges all lie in round 1; the host supplies the link path
  const OrderedTuple tuple{1, 2, 3, 4, 5, 6};
  const auto at = place_gadget(a, OrderedTuple{0}, tuple);
  HypergraphBuilder host(8, 3), round(8, 3);
  for (const auto& e : a.host_pattern) host.add(map_edge(e, at));
  for (const auto& e : a.graph.edges()) round.add(map_edge(e, at));
  const auto h = std::move(host).build();
  const std::vector<Hypergraph> rounds{std::move(round).build(), Hypergraph(8, 3)};
  std::vector<CandidateFamily> tasks{{{0}, {tuple}}};
  Rng rng(3);
  const auto res = greedy_rooted_embed(h, rounds, a, tasks, PhaseSchedule::attempt_all(2), rng);
  ASSERT_TRUE(res.complete());
  EXPECT_EQ(res.tasks[0].phase, 1u);
  EXPECT_EQ(res.tasks[0].interior, tuple);
  EXPECT_EQ(res.tasks[0].consumed.size(), a.graph.edge_count());
  EXPECT_NO_THROW(res.require_complete());

  std::vector<SearchFamily> search{{{0}, VertexSet::range(8).minus({0}), 1000}};
  const auto res2 = greedy_rooted_embed(h, rounds, a, search, PhaseSchedule::attempt_all(2), rng);
  ASSERT_TRUE(res2.complete());
  EXPECT_TRUE(is_absorber(union_of(h, rounds[0]), k32, {0, res2.tasks[0].interior}));
}

TEST(GreedyEmbed, EdgelessRoundsFailAll) {
  const auto a = absorber_gadget(k32);
  const std::vector<Hypergraph> rounds(2, Hypergraph(20, 3));
  std::vector<SearchFamily> tasks{{{0}, VertexSet::range(20).minus({0, 1}), 1000},
                                  {{1}, VertexSet::range(20).minus({0, 1}), 1000}};
  Rng rng(4);
  const auto res = greedy_rooted_embed(Hypergraph(20, 3), rounds, a, tasks, PhaseSchedule::attempt_all(2), rng);
  EXPECT_EQ(res.survivors, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(res.remaining_after_phase, (std::vector<std::size_t>{2, 2}));
  try {
    res.require_complete();
    FAIL();
  } catch (const EmbeddingIncomplete& e) {
    EXPECT_EQ(e.survivors().size(), 2u);
  }
}

TEST(GreedyEmbed, RejectsOverlappingRoots) {
  const auto a = absorber_gadget(k32);
  const std::vector<Hypergraph> rounds(1, Hypergraph(20, 3));
  std::vector<SearchFamily> tasks{{{0}, VertexSet::range(20), 10}, {{0}, VertexSet::range(20), 10}};
  Rng rng(5);
  EXPECT_THROW(greedy_rooted_embed(complete_graph(20, 3), rounds, a, tasks, PhaseSchedule::attempt_all(1), rng),
               InvalidArgument);
}

// t = ceil(lambda n) = 6 absorber tasks on n = 60, bernoulli_host(0.5) and three rounds of
// split(60^{-(1/3-0.1)}, 3): measured 100/100 complete within the three phases.
TEST(GreedyEmbed, AbsorbersInRegimePinned) {
  const auto a = absorber_gadget(k32);
  int complete = 0;
  for (int t = 0; t < 100; ++t) {
    const auto h = bernoulli_host(60, 3, 0.5, trial_seed(8, t));
    const auto rounds = expose_rounds(60, 3, split_rounds(kRegimeP, 3), trial_seed(9, t));
    std::vector<SearchFamily> tasks;
    const VertexSet pool = VertexSet::range(60).minus({0, 1, 2, 3, 4, 5});
    for (Vertex v = 0; v < 6; ++v) tasks.push_back({{v}, pool, 4000});
    Rng rng(trial_seed(10, t));
    const auto res = greedy_rooted_embed(h, rounds, a, tasks, PhaseSchedule::attempt_all(3), rng);
    complete += res.complete();
    std::set<Vertex> used;
    for (const auto& out : res.tasks) {
      if (!out.embedded) continue;
      EXPECT_LE(out.phase, 3u);
      EXPECT_TRUE(is_absorber(union_of(h, rounds[out.round]), k32, {out.image[3], out.interior}));
      for (Vertex v : out.interior) EXPECT_TRUE(used.insert(v).second);
    }
  }
  EXPECT_EQ(complete, 100);
}

TEST(FindPowerPath, Examples) {
  Rng rng(6);
  const auto k9 = complete_graph(9, 3);
  const auto p = find_power_path(k9, k32, VertexSet::range(9), 9, rng, 1000);
  ASSERT_TRUE(p);
  EXPECT_TRUE(is_power_path(k9, k32, *p));
  const OrderedTuple prefix{4, 2};
  const auto q = find_power_path(k9, k32, VertexSet::range(9), 6, rng, 1000, prefix);
  ASSERT_TRUE(q);
  EXPECT_EQ((*q)[0], 4u);
  EXPECT_EQ((*q)[1], 2u);
  EXPECT_FALSE(find_power_path(Hypergraph(9, 3), k32, VertexSet::range(9), 5, rng, 1000));
  EXPECT_FALSE(find_power_path(k9, k32, VertexSet{1, 2, 3}, 5, rng, 1000));
}
