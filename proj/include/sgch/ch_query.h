#pragma once

#include <vector>

#include "sgch/contraction.h"
#include "sgch/search.h"

namespace sgch {

/// Stations and edges that reach b over downward edges; marks are indexed
/// by station id and edge id.
struct Corridor {
  std::vector<uint8_t> node;
  std::vector<uint8_t> edge;
  size_t nodes = 0;
};

Corridor backward_corridor(const Hierarchy& h, StationId b);

struct ChTimeResult {
  TimeQueryResult result;
  /// Stations visited by the corridor sweep.
  size_t corridor_nodes = 0;
};

/// Earliest arrival on the hierarchy: upward edges everywhere, downward
/// edges only inside the corridor of b.
ChTimeResult ch_time_query(const Hierarchy& h, StationId a, StationId b,
                           Minutes t0);

/// Bidirectional profile query: forward upward from a, backward upward
/// from b, results folded where both searches meet. Records share one
/// arena, so extract_journey(h.graph, result, member) unpacks members.
ProfileQueryResult ch_profile_query(const Hierarchy& h, StationId a,
                                    StationId b);

}  // namespace sgch
