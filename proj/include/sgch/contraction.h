#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "sgch/search.h"
#include "sgch/station_graph.h"

namespace sgch {

struct ContractionParams {
  uint32_t hop_limit = 7;
  /// Witness labels with more transfers are dropped. Never stated in the
  /// literature we follow; 5 is our choice.
  uint32_t transfer_limit = 5;
  Minutes duration_slack = 0;
  double quotient_weight = 10.0;
  double depth_weight = 1.0;
  /// Worker threads for shortcut computation; results do not depend on it.
  unsigned threads = 1;

  friend bool operator==(const ContractionParams&,
                         const ContractionParams&) = default;
};

/// A station graph augmented with all shortcuts, plus the contraction
/// order. rank[s] is the position of s in the order.
struct Hierarchy {
  StationGraph graph;
  std::vector<uint32_t> rank;
  ContractionParams params;
  size_t shortcuts = 0;

  /// Compares everything but the worker count, which never affects the
  /// result.
  friend bool operator==(const Hierarchy& a, const Hierarchy& b) {
    ContractionParams pa = a.params, pb = b.params;
    pa.threads = pb.threads = 1;
    return a.rank == b.rank && pa == pb &&
           a.shortcuts == b.shortcuts && a.graph == b.graph;
  }
};

using ShortcutPair = std::pair<StationId, StationId>;

/// 10 * shortcuts / removed_edges + depth with the given weights; the
/// quotient is 0 when no edge would be removed.
double priority_score(size_t shortcuts, size_t removed_edges, uint32_t depth,
                      const ContractionParams& p);

/// Nodes whose (priority, id) is smallest within their undirected 2-hop
/// neighbourhood among the remaining nodes.
std::vector<StationId> select_contraction_set(const StationGraph& g,
                                              std::span<const uint8_t> remaining,
                                              std::span<const double> priority);

class Contractor {
 public:
  Contractor(StationGraph g, ContractionParams p);

  /// One witness search per node; fills the stored shortcuts.
  void precompute();

  const StationGraph& graph() const { return g_; }
  const ContractionParams& params() const { return params_; }
  bool contracted(StationId s) const { return contracted_[s] != 0; }
  std::span<const uint8_t> remaining() const { return remaining_; }
  size_t remaining_count() const { return remaining_count_; }
  uint32_t depth(StationId s) const { return depth_[s]; }
  /// Necessary shortcuts (u,w) recorded at v, sorted.
  const std::vector<ShortcutPair>& stored(StationId v) const {
    return stored_[v];
  }
  size_t removed_edges(StationId v) const;
  double priority(StationId v) const;

  /// Admits edges between uncontracted stations.
  EdgeFilter remaining_filter() const;

  /// Contracts an independent set (ascending id) and refreshes the stored
  /// shortcuts touched by the new edges.
  void contract_round(std::span<const StationId> set);
  /// Contracts a single node (a round of one).
  void contract_node(StationId v);

  /// Connections a shortcut (u,w) via v would carry, with via records
  /// relative to the current graph; without the loop closure snapshots.
  EdgeConnectionSet candidate_connections(StationId u, StationId v,
                                          StationId w) const;

  const std::vector<StationId>& order() const { return order_; }
  size_t shortcuts_added() const { return shortcuts_; }

  Hierarchy finish() &&;

 private:
  struct Decisions {
    /// Nodes whose pairs on the fixed side are replaced.
    std::vector<StationId> touched;
    std::vector<std::pair<StationId, ShortcutPair>> necessary;
  };
  /// Pairs (u, *) at every remaining out-neighbour of u (or only at
  /// only_v when given).
  Decisions decide_from(StationId u, StationId only_v) const;
  /// Pairs (*, w) at every remaining in-neighbour of w.
  Decisions decide_to(StationId w) const;
  void apply(const Decisions& d, bool from_side, StationId fixed);
  void refresh(std::vector<StationId> loops, std::vector<StationId> sources,
               std::vector<StationId> targets);
  EdgeConnectionSet loop_closure(StationId v) const;
  std::vector<StationId> out_remaining(StationId v) const;
  std::vector<StationId> in_remaining(StationId v) const;
  template <typename F>
  void parallel_for(size_t n, F&& f) const;

  StationGraph g_;
  ContractionParams params_;
  std::vector<uint8_t> contracted_;
  std::vector<uint8_t> remaining_;
  size_t remaining_count_ = 0;
  std::vector<uint32_t> depth_;
  std::vector<std::vector<ShortcutPair>> stored_;
  std::vector<StationId> order_;
  size_t shortcuts_ = 0;
};

using RoundObserver = std::function<void(const Contractor&, size_t round)>;

Hierarchy build_hierarchy(StationGraph g, const ContractionParams& p,
                          const RoundObserver& observer = {});

}  // namespace sgch
