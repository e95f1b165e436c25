#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgch/connection.h"
#include "sgch/timetable.h"

namespace sgch {

// Domination between connections and between arrival connections.
//
// A connection P dominates Q (same station pair) iff
//   dep(Q) <= dep(P) and arr(P) <= arr(Q),
//   Z1 equal, or Q has no critical departure, or dep(P) - parr(Q) >= transfer(S1),
//   Z2 equal, or Q has no critical arrival, or ndep(Q) - arr(P) >= transfer(S2).
// Two connections dominating each other are called equivalent.

/// Throws std::invalid_argument when a stop event does not lie at the
/// given station pair.
bool dominates_connection(const Connection& p, const Connection& q,
                          const Timetable& tt, StationId s1, StationId s2);
bool equivalent_connections(const Connection& p, const Connection& q,
                            const Timetable& tt);

/// The boarding sentinel is only dominated by another sentinel that is not
/// later; a real arrival can never stand in for it.
bool dominates_arrival(const ArrivalConnection& p, const ArrivalConnection& q,
                       const Timetable& tt, StationId s);
bool equivalent_arrivals(const ArrivalConnection& p,
                         const ArrivalConnection& q, const Timetable& tt);

namespace detail {

inline bool dominates_raw(const Timetable& tt, Minutes transfer1,
                          Minutes transfer2, StopEventId pz1, StopEventId pz2,
                          Minutes pdep, Minutes parr, StopEventId qz1,
                          StopEventId qz2, Minutes qdep, Minutes qarr) {
  if (qdep > pdep || parr > qarr) return false;
  if (pz1 != qz1 && tt.critical(qz1) &&
      pdep - (qdep - *tt.dwell(qz1)) < transfer1) {
    return false;
  }
  if (pz2 != qz2 && tt.critical(qz2) &&
      (qarr + *tt.dwell(qz2)) - parr < transfer2) {
    return false;
  }
  return true;
}

}  // namespace detail

enum class OrderKind {
  /// departure, arrival, critical arrival first
  kTime,
  /// departure, length descending, non-critical before critical departure,
  /// non-critical before critical arrival, then stop events
  kProfile,
};

/// Strict weak ordering of connections of one edge.
bool canonical_less(OrderKind kind, const Connection& a, const Connection& b,
                    const Timetable& tt);

/// Dominance-closed set of daily connections of one edge, stored once per
/// day (dep in [0,1439]) in profile order. Outrolled index j denotes the
/// connection j mod n shifted by floor(j / n) days.
class EdgeConnectionSet {
 public:
  EdgeConnectionSet() = default;

  std::span<const Connection> connections() const { return conns_; }
  const Connection& operator[](size_t i) const { return conns_[i]; }
  size_t size() const { return conns_.size(); }
  bool empty() const { return conns_.empty(); }
  Minutes min_length() const { return min_length_; }
  Minutes max_length() const { return max_length_; }
  size_t bucket_count() const { return bucket_start_.size(); }

  /// First within-day index departing at or after minute_of_day; size()
  /// when none does.
  size_t first_at_or_after(Minutes minute_of_day) const;
  /// Outrolled index of the first connection with absolute departure >= t.
  int64_t first_outrolled_at_or_after(Minutes t) const;
  Minutes outrolled_departure(int64_t j) const;
  const Connection& outrolled(int64_t j) const { return conns_[wrap(j)]; }
  size_t wrap(int64_t j) const;
  int32_t day_of(int64_t j) const;

  /// Outrolled index of the first connection outside the dominant range of
  /// connection i (always > i).
  int64_t dominant_range_end(size_t i) const { return range_end_[i]; }
  /// Same as dominant_range_end but for an arbitrary outrolled index.
  int64_t outrolled_range_end(int64_t j) const;

  /// Transfer time used for the dominant ranges (target station).
  Minutes target_transfer() const { return target_transfer_; }

  friend bool operator==(const EdgeConnectionSet& a,
                         const EdgeConnectionSet& b) {
    return a.conns_ == b.conns_;
  }

 private:
  friend EdgeConnectionSet build_edge_index(std::vector<Connection>,
                                            const Timetable&, StationId);
  friend EdgeConnectionSet make_indexed_unchecked(std::vector<Connection>,
                                                  const Timetable&, StationId);

  std::vector<Connection> conns_;
  std::vector<uint32_t> bucket_start_;
  std::vector<int64_t> range_end_;
  Minutes bucket_width_ = kMinutesPerDay;
  Minutes min_length_ = 0;
  Minutes max_length_ = 0;
  Minutes target_transfer_ = 0;
};

/// Builds buckets and dominant ranges. The input must be in profile order
/// with departures in [0,1439]; throws std::invalid_argument otherwise.
EdgeConnectionSet build_edge_index(std::vector<Connection> canonical,
                                   const Timetable& tt, StationId target);
/// Skips the order check; for sets produced by the operations below.
EdgeConnectionSet make_indexed_unchecked(std::vector<Connection> canonical,
                                         const Timetable& tt,
                                         StationId target);

/// Sorts into profile order and removes dominated connections, treating
/// the set as repeating daily. Departures are normalised into [0,1439].
EdgeConnectionSet close_connections(std::vector<Connection> conns,
                                    const Timetable& tt, StationId s1,
                                    StationId s2);

/// Sorts arrivals (earliest first, sentinel then critical first) and
/// removes dominated ones in one linear pass.
std::vector<ArrivalConnection> close_arrivals(
    std::vector<ArrivalConnection> arrivals, const Timetable& tt,
    StationId at);

/// Links arrivals at `from` with the connections of edge (from, to). Uses
/// buckets and the dominant range of the first connection reachable with
/// a transfer. Each result records its predecessor index and edge
/// connection in `parent` / `via`.
std::vector<ArrivalConnection> link_time(std::span<const ArrivalConnection> ac,
                                         const EdgeConnectionSet& edge,
                                         const Timetable& tt, StationId from,
                                         StationId to);

struct ArrivalMerge {
  std::vector<ArrivalConnection> set;
  /// Per element of `set`: 1 when it came from the incoming side.
  std::vector<uint8_t> from_incoming;
  bool changed = false;
};

/// Dominant union of two closed arrival sets; equivalent arrivals keep the
/// representative from `existing`.
ArrivalMerge minimum_arrivals(std::span<const ArrivalConnection> existing,
                              std::span<const ArrivalConnection> incoming,
                              const Timetable& tt, StationId at);

/// Integrated link + minimum for time queries.
ArrivalMerge link_and_minimum(std::span<const ArrivalConnection> ac,
                              const EdgeConnectionSet& edge,
                              std::span<const ArrivalConnection> existing,
                              const Timetable& tt, StationId from,
                              StationId to);

/// Links the connections of (s1,s2) with those of (s2,s3). Results carry
/// Via::kLink with first = index in e1 and second = outrolled reference into
/// e2. `e2` must be indexed for target s3.
EdgeConnectionSet link_edges(const EdgeConnectionSet& e1,
                             const EdgeConnectionSet& e2, const Timetable& tt,
                             StationId s1, StationId s2, StationId s3);

/// Raw (unfiltered) link results; exposed for the integrated operation.
std::vector<Connection> link_edges_raw(const EdgeConnectionSet& e1,
                                       const EdgeConnectionSet& e2,
                                       const Timetable& tt, StationId s1,
                                       StationId s2, StationId s3);

/// Dominant union of two closed sets of the same station pair; equivalent
/// connections keep the representative of `a`.
EdgeConnectionSet minimum_connections(const EdgeConnectionSet& a,
                                      const EdgeConnectionSet& b,
                                      const Timetable& tt, StationId s1,
                                      StationId s2);

struct ProfileMerge {
  EdgeConnectionSet set;
  std::vector<uint8_t> from_incoming;
  bool changed = false;
};

/// minimum(existing, link(e1, e2)) without materialising the link result.
ProfileMerge link_and_minimum(const EdgeConnectionSet& e1,
                              const EdgeConnectionSet& e2,
                              const EdgeConnectionSet& existing,
                              const Timetable& tt, StationId s1, StationId s2,
                              StationId s3);

/// Merges already-linked candidates into an existing set.
ProfileMerge merge_candidates(std::vector<Connection> candidates,
                              const EdgeConnectionSet& existing,
                              const Timetable& tt, StationId s1,
                              StationId s3);

/// True when some connection of `candidates` survives against `witnesses`,
/// i.e. is not dominated by a non-equivalent witness.
bool any_survives(const EdgeConnectionSet& candidates,
                  const EdgeConnectionSet& witnesses, const Timetable& tt,
                  StationId s1, StationId s2);

}  // namespace sgch
