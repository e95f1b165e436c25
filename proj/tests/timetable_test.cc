#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sgch/examples.h"
#include "test_util.h"

namespace sgch {
namespace {

using testing::parse_shared;

TEST(CycleDifference, WrapsAtMidnight) {
  EXPECT_EQ(cycle_difference(100, 160), 60);
  EXPECT_EQ(cycle_difference(1380, 60), 120);
  EXPECT_EQ(cycle_difference(700, 700), 0);
  EXPECT_THROW(cycle_difference(-1, 5), std::invalid_argument);
  EXPECT_THROW(cycle_difference(0, 1440), std::invalid_argument);
}

TEST(Format, ClockAndAbsolute) {
  EXPECT_EQ(format_clock(0), "00:00");
  EXPECT_EQ(format_clock(23 * 60 + 5), "23:05");
  EXPECT_EQ(format_absolute(29 * 60), "1+05:00");
  EXPECT_EQ(format_absolute(-1), "-1+23:59");
}

TEST(Timetable, OvernightExampleShape) {
  auto tt = parse_shared(examples::kOvernight);
  EXPECT_EQ(tt->num_stations(), 5u);
  EXPECT_EQ(tt->trains().size(), 3u);
  ASSERT_EQ(tt->elementary().size(), 5u);
  // A-B runs over midnight.
  EXPECT_EQ(connection_length(tt->elementary()[0]), 110);
  EXPECT_TRUE(validate_timetable(*tt).empty());
}

TEST(Timetable, CriticalStopEvents) {
  auto tt = parse_shared(examples::kOvernight);
  // Train 1 dwells 7 minutes at B (transfer 5) and 3 at C.
  const Train& t1 = tt->trains()[0];
  EXPECT_FALSE(tt->critical(t1.stops[0]));
  EXPECT_EQ(tt->dwell(t1.stops[1]), 7);
  EXPECT_FALSE(tt->critical(t1.stops[1]));
  EXPECT_EQ(tt->dwell(t1.stops[2]), 3);
  EXPECT_TRUE(tt->critical(t1.stops[2]));
  EXPECT_FALSE(tt->dwell(t1.stops[3]).has_value());
  EXPECT_FALSE(tt->critical(kAnyStopEvent));
}

TEST(Consistency, OvernightJourneyAndRejectedTransfer) {
  auto tt = parse_shared(examples::kOvernight);
  std::vector<TimedLeg> ok{{0, 1385, 1495}, {1, 1502, 1617}, {4, 1680, 1740}};
  EXPECT_TRUE(check_consistency(ok, *tt).consistent);
  auto bad = ok;
  bad[2] = {3, 1620, 1680};
  auto rep = check_consistency(bad, *tt);
  EXPECT_FALSE(rep.consistent);
  EXPECT_EQ(rep.leg, 2u);
  EXPECT_EQ(rep.violation, ConsistencyViolation::kTransferGap);
  // Staying on the train needs no transfer time.
  std::vector<TimedLeg> stay{{1, 1502, 1617}, {2, 1620, 1700}};
  EXPECT_TRUE(check_consistency(stay, *tt).consistent);
}

TEST(Consistency, DetectsBrokenChains) {
  auto tt = parse_shared(examples::kOvernight);
  std::vector<TimedLeg> wrong_time{{0, 1386, 1496}};
  EXPECT_EQ(check_consistency(wrong_time, *tt).violation,
            ConsistencyViolation::kDepartureTime);
  std::vector<TimedLeg> gap{{0, 1385, 1495}, {3, 1620, 1680}};
  EXPECT_EQ(check_consistency(gap, *tt).violation,
            ConsistencyViolation::kStationChain);
  std::vector<TimedLeg> before_day0{{0, -55, 55}};
  EXPECT_EQ(check_consistency(before_day0, *tt).violation,
            ConsistencyViolation::kDayValidity);
  EXPECT_THROW(check_consistency(std::vector<TimedLeg>{}, *tt),
               std::invalid_argument);
}

TEST(Builder, RejectsMalformedTrains) {
  TimetableBuilder b;
  b.add_station("A", 2);
  b.add_station("B", 2);
  std::vector<TrainStop> one{{0, std::nullopt, 10}};
  EXPECT_THROW(b.add_train(one), std::invalid_argument);
  std::vector<TrainStop> unknown{{0, std::nullopt, 10}, {7, 20, std::nullopt}};
  EXPECT_THROW(b.add_train(unknown), std::invalid_argument);
  std::vector<TrainStop> late{{0, std::nullopt, 1440}, {1, 20, std::nullopt}};
  EXPECT_THROW(b.add_train(late), std::invalid_argument);
  EXPECT_THROW(b.add_station("C", -1), std::invalid_argument);
}

TEST(Parser, EmptyFileGivesEmptyTimetable) {
  Timetable tt = parse_timetable("");
  EXPECT_EQ(tt.num_stations(), 0u);
  EXPECT_TRUE(tt.elementary().empty());
  EXPECT_EQ(parse_timetable("# only a comment\n\n").num_stations(), 0u);
}

TEST(Parser, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> size_t {
    try {
      parse_timetable(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("STATION 0 5 A\nTRAIN x\nSTOP 0 - 10:00\nSTOP 3 10:05 -\n"), 4u);
  EXPECT_EQ(line_of("STATION 1 5 A\n"), 1u);
  EXPECT_EQ(line_of("STATION 0 5 A\nFOO\n"), 2u);
  EXPECT_EQ(line_of("STATION 0 5 A\nSTOP 0 - 10:00\n"), 2u);
  EXPECT_EQ(line_of("STATION 0 5 A\nTRAIN x\nSTOP 0 - 25:00\n"), 3u);
  EXPECT_EQ(line_of("STATION 0 5 A\nSTATION 1 5 B\nTRAIN x\nSTOP 0 - 10:00\n"
                    "STOP 1 10:05 -\nTRAIN x\nSTOP 1 - 10:00\nSTOP 0 10:05 -\n"),
            6u);
  // Structural train errors point at the TRAIN line.
  EXPECT_EQ(line_of("STATION 0 5 A\nTRAIN x\nSTOP 0 - 10:00\n"), 2u);
}

TEST(Parser, PrintParseRoundTrip) {
  for (std::string_view text : {examples::kOvernight, examples::kLoop}) {
    Timetable tt = parse_timetable(text);
    EXPECT_EQ(parse_timetable(print_timetable(tt)), tt);
  }
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Timetable tt = testing::random_timetable(seed);
    std::string text = print_timetable(tt);
    EXPECT_EQ(parse_timetable(text), tt);
    EXPECT_EQ(print_timetable(parse_timetable(text)), text);
  }
}

TEST(Parser, DataFilesMatchEmbeddedExamples) {
  EXPECT_EQ(load_timetable(testing::data_path("example1.tt")),
            parse_timetable(examples::kOvernight));
  EXPECT_EQ(load_timetable(testing::data_path("example3.tt")),
            parse_timetable(examples::kLoop));
  EXPECT_THROW(load_timetable(testing::data_path("missing.tt")),
               std::runtime_error);
}

TEST(Clock, Parsing) {
  EXPECT_EQ(parse_clock("00:00"), 0);
  EXPECT_EQ(parse_clock("23:59"), 1439);
  EXPECT_FALSE(parse_clock("24:00"));
  EXPECT_FALSE(parse_clock("7:5"));
  EXPECT_FALSE(parse_clock("ab:cd"));
}

}  // namespace
}  // namespace sgch
