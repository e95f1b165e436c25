#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgch/connection.h"

namespace sgch {

/// Minutes in one day; all periodic arithmetic is modulo this value.
inline constexpr Minutes kMinutesPerDay = 1440;

/// Smallest l >= 0 with l == later - earlier (mod 1440). Both arguments
/// must be minutes-of-day in [0, 1439].
Minutes cycle_difference(Minutes earlier, Minutes later);

/// Formats an absolute time as `d+hh:mm`.
std::string format_absolute(Minutes t);
/// Formats a minute-of-day as `hh:mm`.
std::string format_clock(Minutes minute_of_day);

struct Station {
  StationId id = 0;
  std::string name;
  Minutes transfer = 0;
};

struct StopEvent {
  StopEventId id = 0;
  StationId station = 0;
  std::optional<Minutes> arrival;
  std::optional<Minutes> departure;
  TrainId train = kNoTrain;
};

struct ElementaryConnection {
  uint32_t id = 0;
  StopEventId z1 = 0;
  StopEventId z2 = 0;
  StationId s1 = 0;
  StationId s2 = 0;
  Minutes td = 0;
  Minutes ta = 0;

  Minutes length() const { return cycle_difference(td, ta); }
};

struct Train {
  TrainId id = 0;
  std::string name;
  std::vector<StopEventId> stops;
};

/// One elementary connection ridden at concrete absolute times.
struct TimedLeg {
  uint32_t elementary = 0;
  Minutes dep = 0;
  Minutes arr = 0;

  friend bool operator==(const TimedLeg&, const TimedLeg&) = default;
};

Minutes connection_length(const ElementaryConnection& c);

/// Immutable timetable: stations, trains as stop-event sequences and the
/// derived elementary connections. Built through TimetableBuilder.
class Timetable {
 public:
  Timetable() = default;

  std::span<const Station> stations() const { return stations_; }
  std::span<const StopEvent> stop_events() const { return stop_events_; }
  std::span<const Train> trains() const { return trains_; }
  std::span<const ElementaryConnection> elementary() const {
    return elementary_;
  }
  uint32_t traffic_days() const { return traffic_days_; }

  size_t num_stations() const { return stations_.size(); }
  const Station& station(StationId s) const { return stations_.at(s); }
  const StopEvent& stop_event(StopEventId z) const {
    return stop_events_.at(z);
  }
  Minutes transfer(StationId s) const { return stations_[s].transfer; }

  /// Residence time between arrival and departure of a stop event, or
  /// nullopt when the train begins or ends there (or for the sentinel).
  std::optional<Minutes> dwell(StopEventId z) const {
    if (z == kAnyStopEvent || dwell_[z] < 0) return std::nullopt;
    return dwell_[z];
  }
  /// A stop event is critical when its residence time is shorter than the
  /// station transfer time. Criticality of departure and arrival coincide
  /// for a given stop event. The sentinel is never critical.
  bool critical(StopEventId z) const {
    return z != kAnyStopEvent && critical_[z] != 0;
  }
  bool is_stop_event(StopEventId z) const { return z < stop_events_.size(); }

  /// Daily operation is assumed; the hook is retained for traffic-day
  /// validity of the train's first departure day.
  bool operates_on(TrainId train, int64_t day) const;

  friend bool operator==(const Timetable& a, const Timetable& b);

 private:
  friend class TimetableBuilder;
  void finalize();

  std::vector<Station> stations_;
  std::vector<StopEvent> stop_events_;
  std::vector<Train> trains_;
  std::vector<ElementaryConnection> elementary_;
  std::vector<Minutes> dwell_;
  std::vector<uint8_t> critical_;
  uint32_t traffic_days_ = 1;
};

/// One stop of a train as given in the input: station and optional
/// minute-of-day arrival/departure.
struct TrainStop {
  StationId station = 0;
  std::optional<Minutes> arrival;
  std::optional<Minutes> departure;
};

class TimetableBuilder {
 public:
  StationId add_station(std::string name, Minutes transfer);
  /// Adds a train; the first stop must have no arrival and the last no
  /// departure. Every consecutive pair yields one elementary connection.
  TrainId add_train(std::span<const TrainStop> stops, std::string name = {});
  void set_traffic_days(uint32_t days) { tt_.traffic_days_ = days; }

  /// Low-level access used by loaders and tests that need to construct
  /// deliberately malformed data for validation.
  StopEventId add_stop_event(const StopEvent& z);
  void add_elementary(const ElementaryConnection& c);

  Timetable build() &&;

 private:
  Timetable tt_;
};

struct StopEventContext {
  std::optional<Minutes> parr;
  std::optional<Minutes> ndep;
  std::optional<Minutes> res_dep;
  std::optional<Minutes> res_arr;
  bool critical_departure = false;
  bool critical_arrival = false;
};

/// Residence context of a connection's boundary stop events, aligned to the
/// connection's own departure and arrival days.
StopEventContext stop_event_context(const Connection& p, const Timetable& tt);

enum class ConsistencyViolation {
  kNone,
  kDayValidity,
  kStationChain,
  kDepartureTime,
  kArrivalTime,
  kTransferGap,
};

struct ConsistencyReport {
  bool consistent = true;
  size_t leg = 0;  // index of the first offending leg
  ConsistencyViolation violation = ConsistencyViolation::kNone;
  std::string message;

  explicit operator bool() const { return consistent; }
};

/// Checks the five consistency conditions on a leg sequence. Throws
/// std::invalid_argument on an empty sequence.
ConsistencyReport check_consistency(std::span<const TimedLeg> legs,
                                    const Timetable& tt);

struct ValidationIssue {
  std::string location;
  std::string message;
};

/// Reports every broken structural invariant; an empty result means the
/// timetable is usable.
std::vector<ValidationIssue> validate_timetable(const Timetable& tt);

}  // namespace sgch
