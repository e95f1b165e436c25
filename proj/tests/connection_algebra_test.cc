#include <gtest/gtest.h>

#include "sgch/examples.h"
#include "sgch/oracle.h"
#include "test_util.h"

namespace sgch {
namespace {

using testing::parse_shared;

// Station X needs 10 minutes to change. Train 1 dwells 2 minutes at X, so
// its departure there is critical.
std::string critical_text(const char* second_departure) {
  return std::string("STATION 0 0 W\nSTATION 1 10 X\nSTATION 2 0 Y\n"
                     "TRAIN 1\nSTOP 0 - 09:00\nSTOP 1 10:00 10:02\nSTOP 2 11:00 -\n"
                     "TRAIN 2\nSTOP 1 - ") +
         second_departure + "\nSTOP 2 10:50 -\n";
}

Connection conn_of(const Timetable& tt, uint32_t elementary) {
  const ElementaryConnection& e = tt.elementary()[elementary];
  return Connection{e.z1, e.z2, e.td, e.td + connection_length(e)};
}

TEST(Dominance, CriticalDepartureNeedsTransferTime) {
  auto tight = parse_shared(critical_text("10:05"));
  // Elementary: 0 W-X, 1 X-Y (train 1), 2 X-Y (train 2).
  Connection q = conn_of(*tight, 1), p = conn_of(*tight, 2);
  EXPECT_FALSE(dominates_connection(p, q, *tight, 1, 2));
  EXPECT_FALSE(dominates_connection(q, p, *tight, 1, 2));

  auto relaxed = parse_shared(critical_text("10:10"));
  q = conn_of(*relaxed, 1);
  p = conn_of(*relaxed, 2);
  EXPECT_TRUE(dominates_connection(p, q, *relaxed, 1, 2));
  EXPECT_FALSE(equivalent_connections(p, q, *relaxed));
  EXPECT_TRUE(equivalent_connections(p, p, *relaxed));
}

TEST(Dominance, WrongStationThrows) {
  auto tt = parse_shared(examples::kOvernight);
  Connection ab = conn_of(*tt, 0);
  EXPECT_THROW(dominates_connection(ab, ab, *tt, 2, 4), std::invalid_argument);
}

TEST(Dominance, ArrivalsAndSentinel) {
  auto tt = parse_shared(critical_text("10:05"));
  const StopEventId at_x = tt->trains()[0].stops[1];  // critical at X
  ArrivalConnection on_train{600, at_x};
  ArrivalConnection walk_in{595, kAnyStopEvent};
  ArrivalConnection early{595, tt->trains()[1].stops[0]};
  // Staying on train 1 departs at 10:02; arriving at 09:55 by another train
  // leaves only 7 minutes.
  EXPECT_FALSE(dominates_arrival(early, on_train, *tt, 1));
  ArrivalConnection earlier{591, kAnyStopEvent};
  EXPECT_TRUE(dominates_arrival(earlier, on_train, *tt, 1));
  // Nothing but a sentinel stands in for the sentinel.
  EXPECT_FALSE(dominates_arrival(on_train, walk_in, *tt, 1));
  EXPECT_TRUE(dominates_arrival(earlier, walk_in, *tt, 1));
  EXPECT_FALSE(dominates_arrival(walk_in, earlier, *tt, 1));
  EXPECT_TRUE(dominates_arrival(walk_in, walk_in, *tt, 1));
}

TEST(EdgeSet, ProfileOrderAndIndex) {
  auto tt = parse_shared(examples::kOvernight);
  std::vector<Connection> ce{conn_of(*tt, 4), conn_of(*tt, 3)};
  EXPECT_THROW(build_edge_index(ce, *tt, 4), std::invalid_argument);
  EdgeConnectionSet s = close_connections(ce, *tt, 2, 4);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].dep, 180);
  EXPECT_EQ(s[1].dep, 240);
  EXPECT_EQ(s.min_length(), 60);
  EXPECT_EQ(s.first_at_or_after(181), 1u);
  EXPECT_EQ(s.first_at_or_after(241), 2u);
  EXPECT_EQ(s.first_outrolled_at_or_after(241), 2);
  EXPECT_EQ(s.outrolled_departure(2), 180 + 1440);
  EXPECT_EQ(s.day_of(-1), -1);
  EXPECT_EQ(s.wrap(-1), 1u);
}

TEST(EdgeSet, CloseRemovesDominatedAcrossMidnight) {
  auto tt = parse_shared(
      "STATION 0 0 A\nSTATION 1 0 B\n"
      "TRAIN s\nSTOP 0 - 23:50\nSTOP 1 02:00 -\n"
      "TRAIN f\nSTOP 0 - 00:10\nSTOP 1 01:00 -\n");
  // 23:50 -> 02:00 is beaten by the next day's 00:10 -> 01:00.
  std::vector<Connection> all{conn_of(*tt, 0), conn_of(*tt, 1)};
  EdgeConnectionSet s = close_connections(all, *tt, 0, 1);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].dep, 10);
}

TEST(LinkTime, TransferAtCriticalStop) {
  auto tt = parse_shared(examples::kOvernight);
  auto g = build_station_graph(tt);
  const EdgeConnectionSet& ce = *g.connections(2, 4);
  const StopEventId at_c = tt->trains()[0].stops[2];
  std::vector<ArrivalConnection> on_train{{1617, at_c}};
  auto r = link_time(on_train, ce, *tt, 2, 4);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].arr, 1740);
  EXPECT_EQ(r[0].parent, 0u);
  std::vector<ArrivalConnection> walk_in{{1617, kAnyStopEvent}};
  r = link_time(walk_in, ce, *tt, 2, 4);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].arr, 1680);
}

TEST(LinkEdges, LoopThroughC) {
  auto tt = parse_shared(examples::kLoop);
  auto g = build_station_graph(tt);
  EdgeConnectionSet loop = link_edges(*g.connections(1, 2), *g.connections(2, 1),
                                      *tt, 1, 2, 1);
  ASSERT_EQ(loop.size(), 1u);
  EXPECT_EQ(loop[0].dep, 721);
  EXPECT_EQ(loop[0].arr, 723);
  EXPECT_EQ(loop[0].transfers, 0);
  EXPECT_EQ(loop[0].via.kind, Via::Kind::kLink);
  EXPECT_EQ(loop[0].via.node, 2u);
}

TEST(Minimum, PrefersFirstArgumentAmongEquivalents) {
  auto tt = parse_shared(examples::kOvernight);
  auto g = build_station_graph(tt);
  EdgeConnectionSet a = *g.connections(2, 4);
  std::vector<Connection> tagged(a.connections().begin(), a.connections().end());
  for (Connection& c : tagged) c.label = 7;
  EdgeConnectionSet b = build_edge_index(tagged, *tt, 4);
  EdgeConnectionSet m = minimum_connections(a, b, *tt, 2, 4);
  ASSERT_EQ(m.size(), 2u);
  for (const Connection& c : m.connections()) EXPECT_NE(c.label, 7u);
  ProfileMerge pm = merge_candidates(tagged, a, *tt, 2, 4);
  EXPECT_FALSE(pm.changed);
  // An equivalent witness does not make a candidate redundant.
  EXPECT_TRUE(any_survives(b, a, *tt, 2, 4));
}

TEST(AnySurvives, StrictlyDominatedCandidatesDie) {
  auto tt = parse_shared(critical_text("10:10"));
  EdgeConnectionSet slow = build_edge_index({conn_of(*tt, 1)}, *tt, 2);
  EdgeConnectionSet fast = build_edge_index({conn_of(*tt, 2)}, *tt, 2);
  EXPECT_FALSE(any_survives(slow, fast, *tt, 1, 2));
  EXPECT_TRUE(any_survives(fast, slow, *tt, 1, 2));
  EXPECT_TRUE(any_survives(fast, EdgeConnectionSet{}, *tt, 1, 2));
}

// Small randomized agreement with the naive versions; the acceptance suite
// runs the large sample.
TEST(Algebra, AgreesWithNaiveOnRandomEdges) {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    testing::RandomSpec spec;
    spec.stations = 4;
    spec.trains = 15;
    spec.max_leg = 500;
    auto tt = std::make_shared<const Timetable>(testing::random_timetable(seed, spec));
    auto g = build_station_graph(tt);
    for (const GraphEdge& e1 : g.edges()) {
      std::vector<Connection> v1(e1.conns.connections().begin(),
                                 e1.conns.connections().end());
      // close_connections is idempotent on closed sets.
      EXPECT_EQ(close_connections(v1, *tt, e1.from, e1.to), e1.conns);
      for (uint32_t id : g.out_edges(e1.to)) {
        const GraphEdge& e2 = g.edge(id);
        std::vector<Connection> v2(e2.conns.connections().begin(),
                                   e2.conns.connections().end());
        auto fast = link_edges(e1.conns, e2.conns, *tt, e1.from, e1.to, e2.to);
        auto slow = oracle::naive_link_edges(v1, v2, *tt, e1.from, e1.to, e2.to);
        std::vector<Connection> vf(fast.connections().begin(),
                                   fast.connections().end());
        EXPECT_TRUE(oracle::same_classes(vf, slow, *tt)) << "seed " << seed;
      }
    }
  }
}

}  // namespace
}  // namespace sgch
