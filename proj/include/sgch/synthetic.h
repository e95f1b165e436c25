#pragma once

#include <cstdint>

#include "sgch/timetable.h"

namespace sgch {

struct SyntheticSpec {
  uint32_t stations = 100;
  uint32_t clusters = 10;
  /// Extra backbone links per hub on top of the hub ring.
  uint32_t backbone_degree = 2;
  /// Daily trains per route and direction.
  uint32_t trains_per_route = 6;
  uint64_t seed = 1;
};

/// Hierarchical network: each cluster is served by local routes that all
/// touch the cluster hub, hubs are joined by long-distance routes along a
/// ring plus random chords. All routes run both ways, so the station graph
/// is strongly connected. Transfer times are drawn from [2,10].
/// Throws std::invalid_argument for degenerate parameters.
Timetable generate_synthetic(const SyntheticSpec& spec);

}  // namespace sgch
