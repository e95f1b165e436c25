#pragma once

#include <functional>
#include <queue>
#include <vector>

#include "sgch/station_graph.h"

namespace sgch {

/// Decides whether an edge may be relaxed. An empty filter admits all.
using EdgeFilter = std::function<bool(const GraphEdge&)>;

// --- time queries -----------------------------------------------------------

/// Provenance of one arrival label: the edge connection taken (absolute
/// day in edge_ref.day) and the record of the label it was linked from.
struct ArrivalRecord {
  StationId station = 0;
  uint32_t parent = kNoIndex;
  uint32_t edge = kNoIndex;
  ConnRef edge_ref;
};

struct TimeQueryOptions {
  EdgeFilter filter;
  /// Stop as soon as the smallest queue key reaches the best arrival at
  /// the target (used when the target is not necessarily popped first).
  bool stop_on_target_bound = false;
};

struct TimeQueryResult {
  StationId source = 0;
  StationId target = 0;
  Minutes t0 = 0;
  bool reachable = false;
  Minutes arrival = kInfinity;
  /// Dominant arrival set at the target when the search stopped.
  std::vector<ArrivalConnection> at_target;
  std::vector<ArrivalRecord> records;
  uint64_t delete_mins = 0;
};

/// Label-correcting earliest-arrival search. Throws std::out_of_range for
/// unknown stations and std::invalid_argument for negative t0.
TimeQueryResult time_query(const StationGraph& g, StationId a, StationId b,
                           Minutes t0, const TimeQueryOptions& opt = {});

/// Legs of the journey ending in `chosen` (a member of at_target).
std::vector<TimedLeg> extract_journey(const StationGraph& g,
                                      const TimeQueryResult& r,
                                      const ArrivalConnection& chosen);
/// Journey to the earliest arrival; empty when unreachable or a == b.
std::vector<TimedLeg> extract_journey(const StationGraph& g,
                                      const TimeQueryResult& r);

// --- profile searches -------------------------------------------------------

/// Provenance of a profile label. Its journey is the prefix record's
/// journey, then the edge connection, then the suffix record's journey;
/// each part may be absent. Days are relative to the label's departure.
struct LabelRecord {
  Connection conn;
  uint32_t prefix = kNoIndex;
  int32_t prefix_day = 0;
  uint32_t edge = kNoIndex;
  ConnRef edge_ref;
  uint32_t suffix = kNoIndex;
  int32_t suffix_day = 0;
};

/// Expands the record into legs; `shift` moves the label to absolute time.
std::vector<TimedLeg> expand_record(const StationGraph& g,
                                    std::span<const LabelRecord> arena,
                                    uint32_t record, Minutes shift);

struct ProfileSearchOptions {
  /// Backward searches compute S -> root profiles over reversed edges.
  bool backward = false;
  EdgeFilter filter;
  /// 0 disables. A node reached with h hops relaxes only while h < limit.
  uint32_t hop_limit = 0;
  /// Labels with more transfers are dropped.
  uint32_t transfer_limit = 0xffffffffu;
  /// Labels longer than this are dropped.
  Minutes duration_bound = kInfinity;
  /// Enables the max-duration stopping rule towards this station.
  StationId target = kNoIndex;
};

/// Profile label-correcting search with a virtual identity label at the
/// root. Labels at a station S are dominant root->S (or S->root) sets.
class ProfileSearch {
 public:
  ProfileSearch(const StationGraph& g, StationId root,
                ProfileSearchOptions opt,
                std::vector<LabelRecord>* arena = nullptr);
  ProfileSearch(const ProfileSearch&) = delete;
  ProfileSearch& operator=(const ProfileSearch&) = delete;

  /// Pops and relaxes one station; returns it.
  StationId step();
  /// Runs until the queue is exhausted or the stopping rule fires.
  void run();
  bool done() const;
  Minutes top_key() const;

  bool reached(StationId s) const { return has_label_[s] != 0; }
  const EdgeConnectionSet& labels(StationId s) const { return labels_[s]; }
  uint64_t delete_mins() const { return delete_mins_; }
  StationId root() const { return root_; }
  std::vector<LabelRecord>& arena() { return *arena_; }
  const std::vector<LabelRecord>& arena() const { return *arena_; }

  /// Current stopping bound derived from the target labels (kInfinity when
  /// the target has none or no target is set).
  Minutes bound() const { return bound_; }

 private:
  void relax(StationId s);
  void push(StationId t, Minutes key);
  void update_bound();

  const StationGraph& g_;
  const Timetable& tt_;
  StationId root_;
  ProfileSearchOptions opt_;
  std::vector<LabelRecord> own_arena_;
  std::vector<LabelRecord>* arena_;

  std::vector<EdgeConnectionSet> labels_;
  std::vector<uint8_t> has_label_;
  std::vector<uint32_t> hops_;
  std::vector<Minutes> pending_;  // kInfinity when not queued
  using Entry = std::pair<Minutes, StationId>;
  mutable std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
  bool root_relaxed_ = false;
  Minutes bound_ = kInfinity;
  uint64_t delete_mins_ = 0;
};

/// Max over departure minutes m of (earliest arrival departing >= m) - m.
Minutes max_duration(const EdgeConnectionSet& conns);
/// Slack added to max_duration for the stopping rule.
Minutes profile_slack(const Timetable& tt, StationId a, StationId b);

struct ProfileQueryResult {
  StationId source = 0;
  StationId target = 0;
  EdgeConnectionSet conns;
  std::vector<LabelRecord> records;
  uint64_t delete_mins = 0;
};

struct ProfileQueryOptions {
  EdgeFilter filter;
  bool prune = true;
};

/// Dominant set of all consistent connections a -> b (empty for a == b).
ProfileQueryResult profile_query(const StationGraph& g, StationId a,
                                 StationId b,
                                 const ProfileQueryOptions& opt = {});

/// Legs of a member of r.conns, departing on day `day`.
std::vector<TimedLeg> extract_journey(const StationGraph& g,
                                      const ProfileQueryResult& r,
                                      const Connection& member, int32_t day = 0);

/// Earliest arrival at or after t0 obtained from a daily profile
/// (kInfinity when empty).
Minutes evaluate_profile(const EdgeConnectionSet& conns, Minutes t0);

}  // namespace sgch
