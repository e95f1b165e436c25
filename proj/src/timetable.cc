#include "sgch/timetable.h"

#include <algorithm>
#include <cstdio>

namespace sgch {

namespace {

bool in_day(Minutes t) { return t >= 0 && t < kMinutesPerDay; }

int64_t floor_day(int64_t t) {
  return t >= 0 ? t / kMinutesPerDay : -((-t + kMinutesPerDay - 1) / kMinutesPerDay);
}

}  // namespace

Minutes cycle_difference(Minutes earlier, Minutes later) {
  if (!in_day(earlier) || !in_day(later)) {
    throw std::invalid_argument("cycle_difference: time outside [0,1439]");
  }
  Minutes d = later - earlier;
  return d < 0 ? d + kMinutesPerDay : d;
}

Minutes connection_length(const ElementaryConnection& c) {
  return cycle_difference(c.td, c.ta);
}

std::string format_clock(Minutes minute_of_day) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute_of_day / 60,
                minute_of_day % 60);
  return buf;
}

std::string format_absolute(Minutes t) {
  int64_t day = floor_day(t);
  Minutes rest = static_cast<Minutes>(t - day * kMinutesPerDay);
  return std::to_string(day) + "+" + format_clock(rest);
}

bool Timetable::operates_on(TrainId, int64_t day) const { return day >= 0; }

bool operator==(const Timetable& a, const Timetable& b) {
  auto same_station = [](const Station& x, const Station& y) {
    return x.id == y.id && x.name == y.name && x.transfer == y.transfer;
  };
  auto same_event = [](const StopEvent& x, const StopEvent& y) {
    return x.id == y.id && x.station == y.station && x.arrival == y.arrival &&
           x.departure == y.departure && x.train == y.train;
  };
  auto same_conn = [](const ElementaryConnection& x,
                      const ElementaryConnection& y) {
    return x.id == y.id && x.z1 == y.z1 && x.z2 == y.z2 && x.s1 == y.s1 &&
           x.s2 == y.s2 && x.td == y.td && x.ta == y.ta;
  };
  auto same_train = [](const Train& x, const Train& y) {
    return x.id == y.id && x.name == y.name && x.stops == y.stops;
  };
  return a.traffic_days_ == b.traffic_days_ &&
         std::equal(a.stations_.begin(), a.stations_.end(),
                    b.stations_.begin(), b.stations_.end(), same_station) &&
         std::equal(a.stop_events_.begin(), a.stop_events_.end(),
                    b.stop_events_.begin(), b.stop_events_.end(),
                    same_event) &&
         std::equal(a.elementary_.begin(), a.elementary_.end(),
                    b.elementary_.begin(), b.elementary_.end(), same_conn) &&
         std::equal(a.trains_.begin(), a.trains_.end(), b.trains_.begin(),
                    b.trains_.end(), same_train);
}

void Timetable::finalize() {
  dwell_.assign(stop_events_.size(), -1);
  critical_.assign(stop_events_.size(), 0);
  for (const StopEvent& z : stop_events_) {
    if (!z.arrival || !z.departure || !in_day(*z.arrival) ||
        !in_day(*z.departure)) {
      continue;
    }
    Minutes dwell = cycle_difference(*z.arrival, *z.departure);
    dwell_[z.id] = dwell;
    if (z.station < stations_.size() && dwell < stations_[z.station].transfer) {
      critical_[z.id] = 1;
    }
  }
}

StationId TimetableBuilder::add_station(std::string name, Minutes transfer) {
  if (transfer < 0) throw std::invalid_argument("negative transfer time");
  StationId id = static_cast<StationId>(tt_.stations_.size());
  tt_.stations_.push_back(Station{id, std::move(name), transfer});
  return id;
}

StopEventId TimetableBuilder::add_stop_event(const StopEvent& z) {
  StopEvent copy = z;
  copy.id = static_cast<StopEventId>(tt_.stop_events_.size());
  tt_.stop_events_.push_back(copy);
  return copy.id;
}

void TimetableBuilder::add_elementary(const ElementaryConnection& c) {
  ElementaryConnection copy = c;
  copy.id = static_cast<uint32_t>(tt_.elementary_.size());
  tt_.elementary_.push_back(copy);
}

TrainId TimetableBuilder::add_train(std::span<const TrainStop> stops,
                                    std::string name) {
  if (stops.size() < 2) {
    throw std::invalid_argument("a train needs at least two stops");
  }
  if (stops.front().arrival || stops.back().departure) {
    throw std::invalid_argument(
        "first stop must not arrive and last stop must not depart");
  }
  TrainId id = static_cast<TrainId>(tt_.trains_.size());
  Train train{id, name.empty() ? std::to_string(id) : std::move(name), {}};
  for (size_t i = 0; i < stops.size(); ++i) {
    const TrainStop& s = stops[i];
    if (s.station >= tt_.stations_.size()) {
      throw std::invalid_argument("train references unknown station " +
                                  std::to_string(s.station));
    }
    if (i > 0 && i + 1 < stops.size() && (!s.arrival || !s.departure)) {
      throw std::invalid_argument("intermediate stop needs both times");
    }
    for (auto t : {s.arrival, s.departure}) {
      if (t && !in_day(*t)) {
        throw std::invalid_argument("stop time outside [0,1439]");
      }
    }
    train.stops.push_back(
        add_stop_event(StopEvent{0, s.station, s.arrival, s.departure, id}));
  }
  for (size_t i = 0; i + 1 < train.stops.size(); ++i) {
    const StopEvent& a = tt_.stop_events_[train.stops[i]];
    const StopEvent& b = tt_.stop_events_[train.stops[i + 1]];
    add_elementary(ElementaryConnection{0, a.id, b.id, a.station, b.station,
                                        *a.departure, *b.arrival});
  }
  tt_.trains_.push_back(std::move(train));
  return id;
}

Timetable TimetableBuilder::build() && {
  tt_.finalize();
  return std::move(tt_);
}

StopEventContext stop_event_context(const Connection& p, const Timetable& tt) {
  for (StopEventId z : {p.z1, p.z2}) {
    if (z != kAnyStopEvent && !tt.is_stop_event(z)) {
      throw std::out_of_range("dangling stop event id " + std::to_string(z));
    }
  }
  StopEventContext ctx;
  if (auto dwell = tt.dwell(p.z1)) {
    ctx.parr = p.dep - *dwell;
    ctx.res_dep = *dwell;
    ctx.critical_departure =
        *dwell < tt.transfer(tt.stop_event(p.z1).station);
  }
  if (auto dwell = tt.dwell(p.z2)) {
    ctx.ndep = p.arr + *dwell;
    ctx.res_arr = *dwell;
    ctx.critical_arrival = *dwell < tt.transfer(tt.stop_event(p.z2).station);
  }
  return ctx;
}

ConsistencyReport check_consistency(std::span<const TimedLeg> legs,
                                    const Timetable& tt) {
  if (legs.empty()) {
    throw std::invalid_argument("check_consistency: empty leg sequence");
  }
  auto fail = [](size_t i, ConsistencyViolation v, std::string msg) {
    ConsistencyReport r;
    r.consistent = false;
    r.leg = i;
    r.violation = v;
    r.message = "leg " + std::to_string(i) + ": " + std::move(msg);
    return r;
  };
  for (size_t i = 0; i < legs.size(); ++i) {
    const TimedLeg& leg = legs[i];
    if (leg.elementary >= tt.elementary().size()) {
      throw std::out_of_range("unknown elementary connection");
    }
    const ElementaryConnection& c = tt.elementary()[leg.elementary];
    if (leg.dep < 0 ||
        !tt.operates_on(tt.stop_event(c.z1).train, floor_day(leg.dep))) {
      return fail(i, ConsistencyViolation::kDayValidity,
                  "not valid on day " + std::to_string(floor_day(leg.dep)));
    }
    if (i > 0 && tt.elementary()[legs[i - 1].elementary].s2 != c.s1) {
      return fail(i, ConsistencyViolation::kStationChain,
                  "does not start where the previous leg ends");
    }
    if (((leg.dep % kMinutesPerDay) + kMinutesPerDay) % kMinutesPerDay !=
        c.td) {
      return fail(i, ConsistencyViolation::kDepartureTime,
                  "departure does not match the timetable");
    }
    if (leg.arr != leg.dep + connection_length(c)) {
      return fail(i, ConsistencyViolation::kArrivalTime,
                  "arrival does not equal departure plus length");
    }
    if (i > 0) {
      const ElementaryConnection& prev = tt.elementary()[legs[i - 1].elementary];
      Minutes gap = leg.dep - legs[i - 1].arr;
      Minutes need = prev.z2 == c.z1 ? 0 : tt.transfer(prev.s2);
      if (gap < need) {
        return fail(i, ConsistencyViolation::kTransferGap,
                    "gap " + std::to_string(gap) + " < " +
                        std::to_string(need) + " at " +
                        tt.station(prev.s2).name);
      }
    }
  }
  return ConsistencyReport{};
}

std::vector<ValidationIssue> validate_timetable(const Timetable& tt) {
  std::vector<ValidationIssue> issues;
  auto add = [&](std::string where, std::string what) {
    issues.push_back({std::move(where), std::move(what)});
  };
  for (size_t i = 0; i < tt.stations().size(); ++i) {
    const Station& s = tt.stations()[i];
    if (s.id != i) add("station " + std::to_string(i), "non-contiguous id");
    if (s.transfer < 0) add("station " + std::to_string(i), "negative transfer");
  }
  std::vector<int> train_owner(tt.stop_events().size(), -1);
  for (const Train& t : tt.trains()) {
    for (StopEventId z : t.stops) {
      if (z >= tt.stop_events().size()) {
        add("train " + t.name, "unknown stop event");
      } else if (train_owner[z] >= 0) {
        add("stop event " + std::to_string(z), "belongs to several trains");
      } else {
        train_owner[z] = static_cast<int>(t.id);
      }
    }
  }
  for (const StopEvent& z : tt.stop_events()) {
    std::string where = "stop event " + std::to_string(z.id);
    if (z.station >= tt.num_stations()) add(where, "unknown station");
    if (!z.arrival && !z.departure) add(where, "neither arrival nor departure");
    for (auto t : {z.arrival, z.departure}) {
      if (t && !in_day(*t)) add(where, "time outside [0,1439]");
    }
  }
  for (const ElementaryConnection& c : tt.elementary()) {
    std::string where = "connection " + std::to_string(c.id);
    if (c.s1 >= tt.num_stations() || c.s2 >= tt.num_stations()) {
      add(where, "unknown station");
    }
    if (!in_day(c.td) || !in_day(c.ta)) add(where, "time outside [0,1439]");
    if (c.z1 >= tt.stop_events().size() || c.z2 >= tt.stop_events().size()) {
      add(where, "unknown stop event");
      continue;
    }
    const StopEvent& a = tt.stop_event(c.z1);
    const StopEvent& b = tt.stop_event(c.z2);
    if (a.station != c.s1 || b.station != c.s2) {
      add(where, "stop event station mismatch");
    }
    if (!a.departure || *a.departure != c.td) {
      add(where, "departure disagrees with stop event");
    }
    if (!b.arrival || *b.arrival != c.ta) {
      add(where, "arrival disagrees with stop event");
    }
  }
  return issues;
}

}  // namespace sgch
