#pragma once

#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "sgch/connection_algebra.h"
#include "sgch/timetable.h"

namespace sgch {

struct GraphEdge {
  StationId from = 0;
  StationId to = 0;
  EdgeConnectionSet conns;
};

/// One node per station; at most one edge per ordered pair, loops allowed.
/// Edges are never removed, so edge ids stay valid.
class StationGraph {
 public:
  StationGraph() = default;
  explicit StationGraph(std::shared_ptr<const Timetable> tt);

  const Timetable& timetable() const { return *tt_; }
  const std::shared_ptr<const Timetable>& timetable_ptr() const { return tt_; }

  size_t num_nodes() const { return out_.size(); }
  size_t num_edges() const { return edges_.size(); }
  const GraphEdge& edge(uint32_t id) const { return edges_.at(id); }
  std::span<const GraphEdge> edges() const { return edges_; }

  /// kNoIndex when absent.
  uint32_t find_edge(StationId u, StationId w) const;
  const EdgeConnectionSet* connections(StationId u, StationId w) const;

  /// Edge ids ordered by neighbour id.
  std::span<const uint32_t> out_edges(StationId u) const { return out_.at(u); }
  std::span<const uint32_t> in_edges(StationId w) const { return in_.at(w); }

  /// Creates or replaces the edge content. An empty set on an absent edge
  /// creates nothing and returns kNoIndex.
  uint32_t set_edge(StationId u, StationId w, EdgeConnectionSet conns);
  /// Edge (u,w) becomes minimum(existing, incoming), existing preferred.
  /// Returns true when the stored set changed.
  bool merge_edge(StationId u, StationId w, const EdgeConnectionSet& incoming);

  size_t total_connections() const;

  uint32_t add_snapshot(EdgeConnectionSet s);
  const EdgeConnectionSet& snapshot(uint32_t id) const {
    return snapshots_.at(id);
  }
  std::span<const EdgeConnectionSet> snapshots() const { return snapshots_; }

  friend bool operator==(const StationGraph& a, const StationGraph& b);

 private:
  static uint64_t key(StationId u, StationId w) {
    return (static_cast<uint64_t>(u) << 32) | w;
  }
  void insert_sorted(std::vector<uint32_t>& list, uint32_t edge_id,
                     bool by_target);

  std::shared_ptr<const Timetable> tt_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<uint32_t>> out_;
  std::vector<std::vector<uint32_t>> in_;
  std::unordered_map<uint64_t, uint32_t> index_;
  std::vector<EdgeConnectionSet> snapshots_;
};

/// Throws std::invalid_argument when validate_timetable reports issues.
StationGraph build_station_graph(std::shared_ptr<const Timetable> tt);

/// Expands a connection of edge (u,w), given at absolute times, into
/// elementary legs. Throws std::runtime_error on a corrupted via record.
std::vector<TimedLeg> unpack_connection(const StationGraph& g, StationId u,
                                        StationId w, const Connection& c);

}  // namespace sgch
