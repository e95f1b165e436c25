#include <gtest/gtest.h>

#include "sgch/examples.h"
#include "test_util.h"

namespace sgch {
namespace {

using testing::parse_shared;

TEST(StationGraph, OvernightEdges) {
  auto tt = parse_shared(examples::kOvernight);
  StationGraph g = build_station_graph(tt);
  EXPECT_EQ(g.num_nodes(), 5u);
  EXPECT_EQ(g.num_edges(), 4u);
  EXPECT_EQ(g.total_connections(), 5u);
  ASSERT_NE(g.connections(2, 4), nullptr);
  EXPECT_EQ(g.connections(2, 4)->size(), 2u);
  EXPECT_EQ(g.find_edge(4, 2), kNoIndex);
  EXPECT_EQ(g.connections(4, 2), nullptr);
  // Out-edges of C sorted by target.
  auto out = g.out_edges(2);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(g.edge(out[0]).to, 3u);
  EXPECT_EQ(g.edge(out[1]).to, 4u);
  EXPECT_EQ(g.in_edges(2).size(), 1u);
}

TEST(StationGraph, EdgeConnectionsAreSingleLegs) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto tt = std::make_shared<const Timetable>(testing::random_timetable(seed));
    StationGraph g = build_station_graph(tt);
    for (const GraphEdge& e : g.edges()) {
      for (const Connection& c : e.conns.connections()) {
        auto legs = unpack_connection(g, e.from, e.to, c);
        ASSERT_EQ(legs.size(), 1u);
        EXPECT_TRUE(check_consistency(legs, *tt).consistent);
        EXPECT_EQ(legs[0].dep, c.dep);
        EXPECT_EQ(legs[0].arr, c.arr);
      }
    }
  }
}

TEST(StationGraph, SetAndMergeEdges) {
  auto tt = parse_shared(examples::kLoop);
  StationGraph g = build_station_graph(tt);
  const size_t edges = g.num_edges();
  EdgeConnectionSet loop =
      link_edges(*g.connections(1, 2), *g.connections(2, 1), *tt, 1, 2, 1);
  EXPECT_TRUE(g.merge_edge(1, 1, loop));
  EXPECT_EQ(g.num_edges(), edges + 1);
  EXPECT_FALSE(g.merge_edge(1, 1, loop));
  EXPECT_FALSE(g.merge_edge(3, 0, EdgeConnectionSet{}));
  EXPECT_EQ(g.set_edge(3, 0, EdgeConnectionSet{}), kNoIndex);
  EXPECT_THROW(g.set_edge(9, 0, loop), std::out_of_range);

  auto legs = unpack_connection(g, 1, 1, (*g.connections(1, 1))[0]);
  const std::vector<TimedLeg> bcb{{1, 721, 722}, {2, 722, 723}};
  EXPECT_EQ(legs, bcb);
  // A copy shifted by a day unpacks to legs a day later.
  legs = unpack_connection(g, 1, 1, (*g.connections(1, 1))[0].shifted(1440));
  EXPECT_EQ(legs.front().dep, 721 + 1440);
}

TEST(StationGraph, CorruptedViaThrows) {
  auto tt = parse_shared(examples::kLoop);
  StationGraph g = build_station_graph(tt);
  Connection c = (*g.connections(1, 2))[0];
  c.via.kind = Via::Kind::kLink;
  c.via.node = 3;  // no edge (1,3)->(3,2) pair carries this
  c.via.first = {0, 0};
  c.via.second = {0, 0};
  EXPECT_THROW(unpack_connection(g, 1, 2, c), std::runtime_error);
  c.via = Via::elementary(99);
  EXPECT_THROW(unpack_connection(g, 1, 2, c), std::runtime_error);
}

TEST(StationGraph, RejectsInvalidTimetable) {
  TimetableBuilder b;
  b.add_station("A", 1);
  b.add_station("B", 1);
  StopEvent x{0, 0, std::nullopt, 100, 0};
  StopEvent y{1, 1, 150, std::nullopt, 0};
  b.add_stop_event(x);
  b.add_stop_event(y);
  b.add_elementary(ElementaryConnection{0, 0, 1, 0, 1, 100, 151});
  auto tt = std::make_shared<const Timetable>(std::move(b).build());
  EXPECT_FALSE(validate_timetable(*tt).empty());
  EXPECT_THROW(build_station_graph(tt), std::invalid_argument);
}

TEST(StationGraph, Equality) {
  auto tt = parse_shared(examples::kOvernight);
  StationGraph a = build_station_graph(tt), b = build_station_graph(tt);
  EXPECT_TRUE(a == b);
  b.add_snapshot(*a.connections(2, 4));
  EXPECT_FALSE(a == b);
}

}  // namespace
}  // namespace sgch
