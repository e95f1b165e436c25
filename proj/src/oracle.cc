#include "sgch/oracle.h"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace sgch::oracle {

namespace {

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

StationId station_of(const Timetable& tt, StopEventId z) {
  return tt.stop_event(z).station;
}

struct Enumerator {
  const Timetable& tt;
  StationId target;
  Minutes horizon_end;
  const Params& p;
  std::vector<std::vector<uint32_t>> outgoing;  // elementary ids per station
  // (stop event, arrival, transfers) -> fewest legs seen
  std::unordered_map<uint64_t, size_t> seen;
  size_t expanded = 0;
  std::vector<TimedLeg> legs;
  StopEventId start_z = 0;
  Minutes start_dep = 0;
  std::map<std::tuple<StopEventId, StopEventId, Minutes, Minutes>, Journey>* found =
      nullptr;
  Minutes best_arrival = kInfinity;

  Enumerator(const Timetable& t, StationId b, Minutes end, const Params& params)
      : tt(t), target(b), horizon_end(end), p(params) {
    outgoing.resize(tt.num_stations());
    for (const ElementaryConnection& e : tt.elementary()) {
      outgoing[e.s1].push_back(e.id);
    }
  }

  static uint64_t key(StopEventId z, Minutes arr, int transfers) {
    return (static_cast<uint64_t>(z) << 32) |
           (static_cast<uint64_t>(static_cast<uint32_t>(arr) & 0xffffff) << 8) |
           static_cast<uint64_t>(transfers & 0xff);
  }

  void expand(uint32_t elementary, Minutes dep, int transfers) {
    if (++expanded > p.state_cap) {
      throw std::length_error("oracle: state cap exceeded");
    }
    const ElementaryConnection& e = tt.elementary()[elementary];
    const Minutes arr = dep + connection_length(e);
    // The arrival time pins the day of the arrival stop event.
    const uint64_t k = key(e.z2, arr, transfers);
    auto it = seen.find(k);
    if (it != seen.end() && it->second <= legs.size() + 1) return;
    seen[k] = legs.size() + 1;
    legs.push_back(TimedLeg{elementary, dep, arr});

    if (e.s2 == target) {
      best_arrival = std::min(best_arrival, arr);
      if (found) {
        auto id = std::make_tuple(start_z, e.z2, start_dep, arr);
        if (!found->count(id)) {
          (*found)[id] = Journey{start_z, e.z2, start_dep, arr, transfers, legs};
        }
      }
    }
    if (legs.size() < p.max_legs) {
      for (uint32_t f_id : outgoing[e.s2]) {
        const ElementaryConnection& f = tt.elementary()[f_id];
        const bool same = f.z1 == e.z2;
        if (!same && transfers + 1 > p.max_transfers) continue;
        const Minutes earliest = arr + (same ? 0 : tt.transfer(e.s2));
        int64_t day = floor_div(earliest - f.td + kMinutesPerDay - 1, kMinutesPerDay);
        for (Minutes d = static_cast<Minutes>(f.td + day * kMinutesPerDay);
             d < horizon_end; d += kMinutesPerDay) {
          expand(f_id, d, transfers + (same ? 0 : 1));
        }
      }
    }
    legs.pop_back();
  }
};

}  // namespace

std::vector<Journey> enumerate_consistent(const Timetable& tt, StationId a,
                                          StationId b,
                                          std::optional<Minutes> t0,
                                          const Params& p) {
  if (a >= tt.num_stations() || b >= tt.num_stations()) {
    throw std::out_of_range("oracle: unknown station");
  }
  if (a == b) {
    Journey empty;
    empty.dep = empty.arr = t0.value_or(0);
    return {empty};
  }
  const Minutes end = t0 ? *t0 + p.horizon_days * kMinutesPerDay
                         : p.horizon_days * kMinutesPerDay;
  Enumerator en(tt, b, end, p);
  std::map<std::tuple<StopEventId, StopEventId, Minutes, Minutes>, Journey> found;
  en.found = &found;
  for (uint32_t f_id : en.outgoing[a]) {
    const ElementaryConnection& f = tt.elementary()[f_id];
    std::vector<Minutes> starts;
    if (t0) {
      int64_t day = floor_div(*t0 - f.td + kMinutesPerDay - 1, kMinutesPerDay);
      for (Minutes d = static_cast<Minutes>(f.td + day * kMinutesPerDay); d < end;
           d += kMinutesPerDay) {
        starts.push_back(d);
      }
    } else {
      starts.push_back(f.td);
    }
    for (Minutes d : starts) {
      en.seen.clear();
      en.start_z = f.z1;
      en.start_dep = d;
      en.expand(f_id, d, 0);
    }
  }
  std::vector<Journey> out;
  out.reserve(found.size());
  for (auto& [id, j] : found) out.push_back(std::move(j));
  return out;
}

Minutes earliest_arrival(const Timetable& tt, StationId a, StationId b,
                         Minutes t0, const Params& p) {
  if (a >= tt.num_stations() || b >= tt.num_stations()) {
    throw std::out_of_range("oracle: unknown station");
  }
  if (a == b) return t0;
  const Minutes end = t0 + p.horizon_days * kMinutesPerDay;
  Enumerator en(tt, b, end, p);
  for (uint32_t f_id : en.outgoing[a]) {
    const ElementaryConnection& f = tt.elementary()[f_id];
    int64_t day = floor_div(t0 - f.td + kMinutesPerDay - 1, kMinutesPerDay);
    for (Minutes d = static_cast<Minutes>(f.td + day * kMinutesPerDay); d < end;
         d += kMinutesPerDay) {
      en.expand(f_id, d, 0);
    }
  }
  return en.best_arrival;
}

// ---------------------------------------------------------------------------

bool dominates(const Timetable& tt, const Connection& p, const Connection& q,
               StationId s1, StationId s2) {
  for (StopEventId z : {p.z1, q.z1}) {
    if (station_of(tt, z) != s1) return false;
  }
  for (StopEventId z : {p.z2, q.z2}) {
    if (station_of(tt, z) != s2) return false;
  }
  if (!(q.dep <= p.dep && p.arr <= q.arr)) return false;
  StopEventContext ctx = stop_event_context(q, tt);
  if (!(q.z1 == p.z1 || !ctx.critical_departure ||
        p.dep - *ctx.parr >= tt.transfer(s1))) {
    return false;
  }
  if (!(q.z2 == p.z2 || !ctx.critical_arrival ||
        *ctx.ndep - p.arr >= tt.transfer(s2))) {
    return false;
  }
  return true;
}

bool equivalent(const Timetable& tt, const Connection& p, const Connection& q) {
  StationId s1 = station_of(tt, p.z1), s2 = station_of(tt, p.z2);
  return dominates(tt, p, q, s1, s2) && dominates(tt, q, p, s1, s2);
}

bool dominates(const Timetable& tt, const ArrivalConnection& p,
               const ArrivalConnection& q, StationId s) {
  for (StopEventId z : {p.z2, q.z2}) {
    if (z != kAnyStopEvent && station_of(tt, z) != s) return false;
  }
  if (p.arr > q.arr) return false;
  if (p.z2 == q.z2) return true;
  // The boarding sentinel may take any departure without a transfer; no
  // real arrival can replace it.
  if (q.z2 == kAnyStopEvent) return false;
  Connection as_conn;
  as_conn.z1 = q.z2;
  as_conn.z2 = q.z2;
  as_conn.arr = q.arr;
  StopEventContext ctx = stop_event_context(as_conn, tt);
  return !ctx.critical_arrival || *ctx.ndep - p.arr >= tt.transfer(s);
}

bool equivalent(const Timetable& tt, const ArrivalConnection& p,
                const ArrivalConnection& q) {
  StopEventId z = p.z2 != kAnyStopEvent ? p.z2 : q.z2;
  if (z == kAnyStopEvent) return p.arr == q.arr;
  StationId s = station_of(tt, z);
  return dominates(tt, p, q, s) && dominates(tt, q, p, s);
}

namespace {

template <typename T, typename Dom, typename Eq>
FilterResult filter_all_pairs(std::span<const T> xs, Dom dom, Eq eq) {
  const size_t n = xs.size();
  std::vector<uint8_t> removed(n, 0);
  for (size_t q = 0; q < n; ++q) {
    for (size_t p = 0; p < n && !removed[q]; ++p) {
      if (p == q || !dom(xs[p], xs[q])) continue;
      if (!dom(xs[q], xs[p])) removed[q] = 1;  // strictly dominated
    }
  }
  for (size_t q = 0; q < n; ++q) {
    if (removed[q]) continue;
    for (size_t p = 0; p < q; ++p) {
      if (!removed[p] && eq(xs[p], xs[q])) {
        removed[q] = 1;
        break;
      }
    }
  }
  FilterResult r;
  for (size_t i = 0; i < n; ++i) {
    if (!removed[i]) r.kept.push_back(i);
  }
  for (size_t q = 0; q < n; ++q) {
    if (!removed[q]) continue;
    for (size_t p : r.kept) {
      if (dom(xs[p], xs[q])) {
        r.witness.push_back({q, p});
        break;
      }
    }
  }
  return r;
}

Connection normalised(Connection c) {
  int64_t day = floor_div(c.dep, kMinutesPerDay);
  return c.shifted(static_cast<Minutes>(-day * kMinutesPerDay));
}

}  // namespace

FilterResult dominant_filter(std::span<const Connection> conns,
                             const Timetable& tt, StationId s1, StationId s2) {
  return filter_all_pairs<Connection>(
      conns,
      [&](const Connection& p, const Connection& q) {
        return dominates(tt, p, q, s1, s2);
      },
      [&](const Connection& p, const Connection& q) {
        return dominates(tt, p, q, s1, s2) && dominates(tt, q, p, s1, s2);
      });
}

FilterResult dominant_filter(std::span<const ArrivalConnection> arrivals,
                             const Timetable& tt, StationId s) {
  return filter_all_pairs<ArrivalConnection>(
      arrivals,
      [&](const ArrivalConnection& p, const ArrivalConnection& q) {
        return dominates(tt, p, q, s);
      },
      [&](const ArrivalConnection& p, const ArrivalConnection& q) {
        return dominates(tt, p, q, s) && dominates(tt, q, p, s);
      });
}

std::vector<Connection> periodic_filter(std::vector<Connection> conns,
                                        const Timetable& tt, StationId s1,
                                        StationId s2) {
  for (Connection& c : conns) c = normalised(c);
  // p dominates q when p or one of its later copies does.
  auto dom = [&](const Connection& p, const Connection& q) {
    for (Minutes shift = 0; p.arr + shift <= q.arr; shift += kMinutesPerDay) {
      if (dominates(tt, p.shifted(shift), q, s1, s2)) return true;
    }
    return false;
  };
  auto eq = [&](const Connection& p, const Connection& q) {
    return dominates(tt, p, q, s1, s2) && dominates(tt, q, p, s1, s2);
  };
  FilterResult r = filter_all_pairs<Connection>(conns, dom, eq);
  std::vector<Connection> out;
  for (size_t i : r.kept) out.push_back(conns[i]);
  return out;
}

bool periodic_dominated(std::span<const Connection> set, const Connection& q,
                        const Timetable& tt, StationId s1, StationId s2,
                        int max_days) {
  for (const Connection& p : set) {
    for (int d = -max_days; d <= max_days; ++d) {
      if (dominates(tt, p.shifted(d * kMinutesPerDay), q, s1, s2)) return true;
    }
  }
  return false;
}

namespace {

template <typename T>
bool classes_match(std::span<const T> a, std::span<const T> b,
                   const Timetable& tt) {
  if (a.size() != b.size()) return false;
  auto covered = [&](std::span<const T> xs, std::span<const T> ys) {
    for (const T& x : xs) {
      bool hit = false;
      for (const T& y : ys) {
        if (equivalent(tt, x, y)) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

}  // namespace

bool same_classes(std::span<const Connection> a, std::span<const Connection> b,
                  const Timetable& tt) {
  return classes_match<Connection>(a, b, tt);
}

bool same_classes(std::span<const ArrivalConnection> a,
                  std::span<const ArrivalConnection> b, const Timetable& tt) {
  return classes_match<ArrivalConnection>(a, b, tt);
}

// ---------------------------------------------------------------------------

std::vector<ArrivalConnection> naive_link_time(
    std::span<const ArrivalConnection> ac, std::span<const Connection> edge,
    const Timetable& tt, StationId from, StationId to) {
  const Minutes transfer = tt.transfer(from);
  std::vector<ArrivalConnection> all;
  for (const ArrivalConnection& p : ac) {
    for (const Connection& q : edge) {
      int64_t day = floor_div(p.arr - q.dep + kMinutesPerDay - 1, kMinutesPerDay);
      // A departure a full day after the first transferable one has an
      // earlier copy that is just as good.
      for (Minutes dep = static_cast<Minutes>(q.dep + day * kMinutesPerDay);
           dep < p.arr + transfer + kMinutesPerDay; dep += kMinutesPerDay) {
        bool boardable = p.z2 == kAnyStopEvent || p.z2 == q.z1 ||
                         dep >= p.arr + transfer;
        if (!boardable) continue;
        ArrivalConnection r;
        r.arr = dep + q.length();
        r.z2 = q.z2;
        all.push_back(r);
      }
    }
  }
  FilterResult f = dominant_filter(std::span<const ArrivalConnection>(all), tt, to);
  std::vector<ArrivalConnection> out;
  for (size_t i : f.kept) out.push_back(all[i]);
  return out;
}

std::vector<Connection> naive_link_edges(std::span<const Connection> e1,
                                         std::span<const Connection> e2,
                                         const Timetable& tt, StationId s1,
                                         StationId s2, StationId s3) {
  const Minutes transfer = tt.transfer(s2);
  std::vector<Connection> all;
  for (const Connection& p : e1) {
    for (const Connection& q : e2) {
      int64_t day = floor_div(p.arr - q.dep + kMinutesPerDay - 1, kMinutesPerDay);
      for (Minutes dep = static_cast<Minutes>(q.dep + day * kMinutesPerDay);
           dep < p.arr + transfer + kMinutesPerDay; dep += kMinutesPerDay) {
        if (!(p.z2 == q.z1 || dep >= p.arr + transfer)) continue;
        Connection r;
        r.z1 = p.z1;
        r.z2 = q.z2;
        r.dep = p.dep;
        r.arr = dep + q.length();
        all.push_back(r);
      }
    }
  }
  return periodic_filter(std::move(all), tt, s1, s3);
}

std::vector<Connection> naive_minimum(std::span<const Connection> a,
                                      std::span<const Connection> b,
                                      const Timetable& tt, StationId s1,
                                      StationId s2) {
  std::vector<Connection> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return periodic_filter(std::move(all), tt, s1, s2);
}

std::vector<ArrivalConnection> naive_minimum(
    std::span<const ArrivalConnection> a, std::span<const ArrivalConnection> b,
    const Timetable& tt, StationId s) {
  std::vector<ArrivalConnection> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  FilterResult f = dominant_filter(std::span<const ArrivalConnection>(all), tt, s);
  std::vector<ArrivalConnection> out;
  for (size_t i : f.kept) out.push_back(all[i]);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool consistent(const Timetable& tt, std::span<const TimedLeg> legs) {
  return check_consistency(legs, tt).consistent;
}

std::vector<TimedLeg> concat(std::span<const TimedLeg> a,
                             std::span<const TimedLeg> b) {
  std::vector<TimedLeg> r(a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

std::optional<std::vector<TimedLeg>> find_suffix(const Timetable& tt,
                                                 std::span<const TimedLeg> p,
                                                 std::span<const TimedLeg> q) {
  const StationId s2 = tt.elementary()[q.back().elementary].s2;
  const Minutes from = q.back().arr;
  for (const ElementaryConnection& e : tt.elementary()) {
    if (e.s1 != s2) continue;
    int64_t day = floor_div(from - e.td + kMinutesPerDay - 1, kMinutesPerDay);
    for (Minutes dep = static_cast<Minutes>(e.td + day * kMinutesPerDay);
         dep <= from + 2 * kMinutesPerDay; dep += kMinutesPerDay) {
      TimedLeg y{e.id, dep, dep + connection_length(e)};
      auto qy = concat(q, std::span<const TimedLeg>(&y, 1));
      if (!consistent(tt, qy)) continue;
      if (!consistent(tt, concat(p, std::span<const TimedLeg>(&y, 1)))) {
        return qy;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<TimedLeg>> violating_extension(
    const Timetable& tt, std::span<const TimedLeg> p,
    std::span<const TimedLeg> q) {
  if (p.empty() || q.empty()) {
    throw std::invalid_argument("violating_extension: empty connection");
  }
  if (!(q.front().dep <= p.front().dep && p.back().arr <= q.back().arr)) {
    return std::vector<TimedLeg>(q.begin(), q.end());
  }
  const StationId s1 = tt.elementary()[q.front().elementary].s1;
  const Minutes to = q.front().dep;
  for (const ElementaryConnection& e : tt.elementary()) {
    if (e.s2 != s1) continue;
    const Minutes len = connection_length(e);
    int64_t day = floor_div(to - 2 * kMinutesPerDay - len - e.td, kMinutesPerDay);
    for (Minutes dep = static_cast<Minutes>(e.td + day * kMinutesPerDay);
         dep + len <= to; dep += kMinutesPerDay) {
      if (dep < 0) continue;
      TimedLeg x{e.id, dep, dep + len};
      auto xq = concat(std::span<const TimedLeg>(&x, 1), q);
      if (!consistent(tt, xq)) continue;
      if (!consistent(tt, concat(std::span<const TimedLeg>(&x, 1), p))) {
        return xq;
      }
    }
  }
  return find_suffix(tt, p, q);
}

std::optional<std::vector<TimedLeg>> violating_suffix(
    const Timetable& tt, std::span<const TimedLeg> p,
    std::span<const TimedLeg> q) {
  if (p.empty() || q.empty()) {
    throw std::invalid_argument("violating_suffix: empty connection");
  }
  if (p.back().arr > q.back().arr) {
    return std::vector<TimedLeg>(q.begin(), q.end());
  }
  return find_suffix(tt, p, q);
}

}  // namespace sgch::oracle
