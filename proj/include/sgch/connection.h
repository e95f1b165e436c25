#pragma once

#include <cstdint>
#include <limits>

namespace sgch {

using StationId = uint32_t;
using StopEventId = uint32_t;
using TrainId = uint32_t;
/// Integer minutes. Absolute times count from midnight of day 0.
using Minutes = int32_t;

/// The boarding sentinel: an arrival carrying it may board every
/// departure at or after its time without a transfer.
inline constexpr StopEventId kAnyStopEvent =
    std::numeric_limits<StopEventId>::max();
inline constexpr TrainId kNoTrain = std::numeric_limits<TrainId>::max();
inline constexpr uint32_t kNoIndex = std::numeric_limits<uint32_t>::max();
inline constexpr Minutes kInfinity = std::numeric_limits<Minutes>::max() / 4;

/// Reference to a connection stored in some other set, shifted by whole
/// days relative to the referencing connection's departure day.
struct ConnRef {
  uint32_t index = kNoIndex;
  int32_t day = 0;

  bool valid() const { return index != kNoIndex; }
  friend bool operator==(const ConnRef&, const ConnRef&) = default;
};

/// How a stored connection unpacks into its constituents.
struct Via {
  enum class Kind : uint8_t { kNone = 0, kElementary = 1, kLink = 2 };

  Kind kind = Kind::kNone;
  /// kElementary: the elementary connection id. kLink: the middle station.
  uint32_t node = 0;
  /// kLink: first part on (from, node), optional loop on (node, node),
  /// second part on (node, to).
  ConnRef first;
  ConnRef loop;
  ConnRef second;
  /// When set, first and second index into this stored snapshot set
  /// (loop closure composites) instead of the graph edges.
  uint32_t snapshot = kNoIndex;

  static Via elementary(uint32_t id) {
    Via v;
    v.kind = Kind::kElementary;
    v.node = id;
    return v;
  }

  friend bool operator==(const Via&, const Via&) = default;
};

/// A label (Z1, Z2, dep, arr) between two stations given by context.
/// Stored edge connections keep dep within [0, 1439].
struct Connection {
  StopEventId z1 = 0;
  StopEventId z2 = 0;
  Minutes dep = 0;
  Minutes arr = 0;
  uint16_t transfers = 0;
  /// Opaque caller data (query provenance record).
  uint32_t label = kNoIndex;
  Via via;

  Minutes length() const { return arr - dep; }
  Connection shifted(Minutes delta) const {
    Connection c = *this;
    c.dep += delta;
    c.arr += delta;
    return c;
  }

  /// Equality of the journey-relevant fields (ignores label and via).
  bool same_label(const Connection& o) const {
    return z1 == o.z1 && z2 == o.z2 && dep == o.dep && arr == o.arr;
  }
  friend bool operator==(const Connection&, const Connection&) = default;
};

/// Query label (arr, Z2) at a station implied by context.
struct ArrivalConnection {
  Minutes arr = 0;
  StopEventId z2 = kAnyStopEvent;
  uint32_t label = kNoIndex;
  /// Provenance of a freshly linked arrival: index of the predecessor in
  /// the input set, edge connection index and its day offset.
  uint32_t parent = kNoIndex;
  ConnRef via;

  bool same_label(const ArrivalConnection& o) const {
    return arr == o.arr && z2 == o.z2;
  }
};

}  // namespace sgch
