#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sgch/connection.h"
#include "sgch/timetable.h"

// Brute-force reference implementations for small instances. Only the
// timetable layer is shared with the engine.
namespace sgch::oracle {

struct Params {
  int horizon_days = 2;
  int max_transfers = 6;
  size_t max_legs = 64;
  /// Upper bound on expanded search states; exceeding it throws
  /// std::length_error.
  size_t state_cap = 20'000'000;
};

struct Journey {
  StopEventId z1 = kAnyStopEvent;
  StopEventId z2 = kAnyStopEvent;
  Minutes dep = 0;
  Minutes arr = 0;
  int transfers = 0;
  std::vector<TimedLeg> legs;
};

/// All consistent connections a -> b found by depth-first expansion over
/// timed legs. With t0 the first leg departs at or after t0 and every leg
/// departs before t0 + horizon; without it the first leg departs on day 0
/// and every leg before the end of the horizon. Duplicates (same stop
/// events and times) are reported once. a == b yields the empty journey.
std::vector<Journey> enumerate_consistent(const Timetable& tt, StationId a,
                                          StationId b,
                                          std::optional<Minutes> t0,
                                          const Params& p = {});

/// Earliest arrival at b for departure at or after t0 within the horizon,
/// kInfinity when none.
Minutes earliest_arrival(const Timetable& tt, StationId a, StationId b,
                         Minutes t0, const Params& p = {});

// --- dominance, written out from the definitions --------------------------

bool dominates(const Timetable& tt, const Connection& p, const Connection& q,
               StationId s1, StationId s2);
bool equivalent(const Timetable& tt, const Connection& p, const Connection& q);
bool dominates(const Timetable& tt, const ArrivalConnection& p,
               const ArrivalConnection& q, StationId s);
bool equivalent(const Timetable& tt, const ArrivalConnection& p,
                const ArrivalConnection& q);

struct FilterResult {
  std::vector<size_t> kept;
  /// (removed index, surviving dominator index)
  std::vector<std::pair<size_t, size_t>> witness;
};

/// All-pairs filter of absolute-time connections: keeps the non-dominated
/// ones, one per equivalence class (lowest index).
FilterResult dominant_filter(std::span<const Connection> conns,
                             const Timetable& tt, StationId s1, StationId s2);
FilterResult dominant_filter(std::span<const ArrivalConnection> arrivals,
                             const Timetable& tt, StationId s);

/// Filter for daily sets: departures are normalised to day 0 and every
/// member also acts with all later-day copies.
std::vector<Connection> periodic_filter(std::vector<Connection> conns,
                                        const Timetable& tt, StationId s1,
                                        StationId s2);

/// True when some day-shifted copy of a member of `set` dominates q.
bool periodic_dominated(std::span<const Connection> set, const Connection& q,
                        const Timetable& tt, StationId s1, StationId s2,
                        int max_days);

/// Both sets contain the same equivalence classes.
bool same_classes(std::span<const Connection> a, std::span<const Connection> b,
                  const Timetable& tt);
bool same_classes(std::span<const ArrivalConnection> a,
                  std::span<const ArrivalConnection> b, const Timetable& tt);

// --- naive link and minimum ------------------------------------------------

/// Every boardable (arrival, edge connection) pair, then the all-pairs
/// filter. `edge` holds daily connections with dep in [0,1439].
std::vector<ArrivalConnection> naive_link_time(
    std::span<const ArrivalConnection> ac, std::span<const Connection> edge,
    const Timetable& tt, StationId from, StationId to);
std::vector<Connection> naive_link_edges(std::span<const Connection> e1,
                                         std::span<const Connection> e2,
                                         const Timetable& tt, StationId s1,
                                         StationId s2, StationId s3);
std::vector<Connection> naive_minimum(std::span<const Connection> a,
                                      std::span<const Connection> b,
                                      const Timetable& tt, StationId s1,
                                      StationId s2);
std::vector<ArrivalConnection> naive_minimum(
    std::span<const ArrivalConnection> a, std::span<const ArrivalConnection> b,
    const Timetable& tt, StationId s);

// --- replacement semantics -------------------------------------------------

/// Searches the timetable for an extension (a leg into the start of q, or a
/// leg out of its end) under which q stays consistent but p does not. Both
/// are given as leg sequences at absolute times; `p` must be consistent.
/// Returns the offending extended leg sequence of q, if any.
std::optional<std::vector<TimedLeg>> violating_extension(
    const Timetable& tt, std::span<const TimedLeg> p,
    std::span<const TimedLeg> q);

/// Same for arrival connections: only suffix extensions are considered.
std::optional<std::vector<TimedLeg>> violating_suffix(
    const Timetable& tt, std::span<const TimedLeg> p,
    std::span<const TimedLeg> q);

}  // namespace sgch::oracle
