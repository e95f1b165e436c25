#pragma once

#include <string>
#include <vector>

#include "sgch/contraction.h"

namespace sgch {

/// Binary hierarchy file: magic "SGCH1", then the timetable, contraction
/// parameters, rank, edges and snapshots as little-endian fixed-width
/// integers and length-prefixed sequences.
std::vector<uint8_t> serialize_hierarchy(const Hierarchy& h);
/// Throws std::runtime_error on bad magic, truncation or inconsistent data.
Hierarchy deserialize_hierarchy(std::span<const uint8_t> bytes);

void save_hierarchy(const Hierarchy& h, const std::string& path);
Hierarchy load_hierarchy(const std::string& path);

}  // namespace sgch
