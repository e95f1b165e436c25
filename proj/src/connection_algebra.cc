#include "sgch/connection_algebra.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sgch {

namespace {

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Minutes normalise_departure_shift(Minutes dep) {
  return static_cast<Minutes>(-floor_div(dep, kMinutesPerDay) * kMinutesPerDay);
}

StationId station_of(const Timetable& tt, StopEventId z) {
  return tt.stop_event(z).station;
}

void require_at(const Timetable& tt, StopEventId z, StationId s,
                const char* what) {
  if (z == kAnyStopEvent) return;
  if (!tt.is_stop_event(z)) {
    throw std::invalid_argument(std::string(what) + ": unknown stop event");
  }
  if (station_of(tt, z) != s) {
    throw std::invalid_argument(std::string(what) +
                                ": stop event at a different station");
  }
}

// Connection tagged with a merge preference. In profile order the
// preferred side sorts later, so it is the one kept among equivalents.
struct Item {
  Connection c;
  uint8_t pref = 0;
};

struct ProfileKeyLess {
  const Timetable* tt;
  bool operator()(const Item& a, const Item& b) const {
    if (a.c.dep != b.c.dep) return a.c.dep < b.c.dep;
    if (a.c.length() != b.c.length()) return a.c.length() > b.c.length();
    bool ca = tt->critical(a.c.z1), cb = tt->critical(b.c.z1);
    if (ca != cb) return !ca;
    ca = tt->critical(a.c.z2);
    cb = tt->critical(b.c.z2);
    if (ca != cb) return !ca;
    if (a.pref != b.pref) return a.pref < b.pref;
    if (a.c.z1 != b.c.z1) return a.c.z1 < b.c.z1;
    return a.c.z2 < b.c.z2;
  }
};

// Backward sweep over items sorted in profile order. An item is dropped
// when a connection already in the sweep buffer (possibly from a later day)
// dominates it. After day 0 the scan continues on day -1, -2, ... with the
// survivors shifted back, until no day-0 entry is left in the buffer.
std::vector<uint8_t> sweep_alive(std::span<const Item> items,
                                 const Timetable& tt, Minutes transfer1,
                                 Minutes transfer2) {
  const size_t n = items.size();
  std::vector<uint8_t> alive(n, 1);
  if (n == 0) return alive;

  Minutes min_len = kInfinity, max_len = 0;
  for (const Item& it : items) {
    min_len = std::min(min_len, it.c.length());
    max_len = std::max(max_len, it.c.length());
  }
  const int max_pass = 1 + (max_len - min_len) / kMinutesPerDay;

  struct Entry {
    StopEventId z1, z2;
    Minutes dep, arr;
    int day;
  };
  std::vector<Entry> buffer;
  int day0_entries = 0;

  auto evict = [&](Minutes cursor) {
    Minutes min_far = kInfinity;
    for (const Entry& e : buffer) {
      if (e.dep >= cursor + transfer1) min_far = std::min(min_far, e.arr);
    }
    auto out = std::remove_if(buffer.begin(), buffer.end(), [&](const Entry& e) {
      bool far_useless = e.dep >= cursor + transfer1 && e.arr > min_far + transfer2;
      bool too_late = e.arr > cursor + max_len;
      return far_useless || too_late;
    });
    for (auto it = out; it != buffer.end(); ++it) {
      if (it->day == 0) --day0_entries;
    }
    buffer.erase(out, buffer.end());
  };

  for (int pass = 0; pass <= max_pass; ++pass) {
    if (pass > 0 && day0_entries == 0) break;
    const Minutes shift = -pass * kMinutesPerDay;
    for (size_t k = n; k-- > 0;) {
      if (!alive[k]) continue;
      const Connection& q = items[k].c;
      const Minutes qdep = q.dep + shift, qarr = q.arr + shift;
      evict(qdep);
      if (pass > 0 && day0_entries == 0) break;
      bool dominated = false;
      for (const Entry& e : buffer) {
        if (detail::dominates_raw(tt, transfer1, transfer2, e.z1, e.z2, e.dep,
                                  e.arr, q.z1, q.z2, qdep, qarr)) {
          dominated = true;
          break;
        }
      }
      if (dominated) {
        alive[k] = 0;
        continue;
      }
      buffer.push_back(Entry{q.z1, q.z2, qdep, qarr, pass});
      if (pass == 0) ++day0_entries;
    }
  }
  return alive;
}

void sort_items(std::vector<Item>& items, const Timetable& tt) {
  std::stable_sort(items.begin(), items.end(), ProfileKeyLess{&tt});
}

struct ArrivalItem {
  ArrivalConnection a;
  uint8_t pref = 0;  // 0 sorts first and wins among equivalents
};

void sort_arrivals(std::vector<ArrivalItem>& items, const Timetable& tt) {
  std::stable_sort(items.begin(), items.end(),
                   [&](const ArrivalItem& x, const ArrivalItem& y) {
                     if (x.a.arr != y.a.arr) return x.a.arr < y.a.arr;
                     bool ax = x.a.z2 == kAnyStopEvent;
                     bool ay = y.a.z2 == kAnyStopEvent;
                     if (ax != ay) return ax;
                     bool cx = tt.critical(x.a.z2), cy = tt.critical(y.a.z2);
                     if (cx != cy) return cx;
                     if (x.pref != y.pref) return x.pref < y.pref;
                     return x.a.z2 < y.a.z2;
                   });
}

// Linear dominance pass over sorted arrivals. Only earlier elements can
// dominate later ones in this order.
std::vector<uint8_t> filter_arrivals(std::span<const ArrivalItem> items,
                                     const Timetable& tt, Minutes transfer) {
  std::vector<uint8_t> keep(items.size(), 0);
  std::vector<StopEventId> seen;
  Minutes first_arr = kInfinity;
  for (size_t k = 0; k < items.size(); ++k) {
    const ArrivalConnection& q = items[k].a;
    bool dominated =
        std::find(seen.begin(), seen.end(), q.z2) != seen.end();
    if (!dominated && q.z2 != kAnyStopEvent && first_arr < kInfinity) {
      dominated = !tt.critical(q.z2) ||
                  (q.arr + *tt.dwell(q.z2)) - first_arr >= transfer;
    }
    if (dominated) continue;
    keep[k] = 1;
    seen.push_back(q.z2);
    first_arr = std::min(first_arr, q.arr);
  }
  return keep;
}

Via make_link_via(StationId middle, uint32_t first, ConnRef second) {
  Via v;
  v.kind = Via::Kind::kLink;
  v.node = middle;
  v.first = ConnRef{first, 0};
  v.second = second;
  return v;
}

uint16_t add_transfers(uint32_t a, uint32_t b, bool transfer) {
  uint32_t t = a + b + (transfer ? 1 : 0);
  return static_cast<uint16_t>(std::min<uint32_t>(t, 0xffff));
}

}  // namespace

bool dominates_connection(const Connection& p, const Connection& q,
                          const Timetable& tt, StationId s1, StationId s2) {
  require_at(tt, p.z1, s1, "dominates_connection");
  require_at(tt, q.z1, s1, "dominates_connection");
  require_at(tt, p.z2, s2, "dominates_connection");
  require_at(tt, q.z2, s2, "dominates_connection");
  return detail::dominates_raw(tt, tt.transfer(s1), tt.transfer(s2), p.z1,
                               p.z2, p.dep, p.arr, q.z1, q.z2, q.dep, q.arr);
}

bool equivalent_connections(const Connection& p, const Connection& q,
                            const Timetable& tt) {
  auto end_equivalent = [&](StopEventId a, StopEventId b) {
    return a == b || (!tt.critical(a) && !tt.critical(b));
  };
  return p.dep == q.dep && p.arr == q.arr && end_equivalent(p.z1, q.z1) &&
         end_equivalent(p.z2, q.z2);
}

bool dominates_arrival(const ArrivalConnection& p, const ArrivalConnection& q,
                       const Timetable& tt, StationId s) {
  require_at(tt, p.z2, s, "dominates_arrival");
  require_at(tt, q.z2, s, "dominates_arrival");
  if (p.arr > q.arr) return false;
  if (p.z2 == q.z2) return true;
  if (q.z2 == kAnyStopEvent) return false;
  if (!tt.critical(q.z2)) return true;
  return (q.arr + *tt.dwell(q.z2)) - p.arr >= tt.transfer(s);
}

bool equivalent_arrivals(const ArrivalConnection& p,
                         const ArrivalConnection& q, const Timetable& tt) {
  if (p.arr != q.arr) return false;
  if (p.z2 == q.z2) return true;
  if (p.z2 == kAnyStopEvent || q.z2 == kAnyStopEvent) return false;
  return !tt.critical(p.z2) && !tt.critical(q.z2);
}

bool canonical_less(OrderKind kind, const Connection& a, const Connection& b,
                    const Timetable& tt) {
  if (kind == OrderKind::kProfile) {
    return ProfileKeyLess{&tt}(Item{a, 0}, Item{b, 0});
  }
  if (a.dep != b.dep) return a.dep < b.dep;
  if (a.arr != b.arr) return a.arr < b.arr;
  bool ca = tt.critical(a.z2), cb = tt.critical(b.z2);
  if (ca != cb) return ca;
  if (a.z1 != b.z1) return a.z1 < b.z1;
  return a.z2 < b.z2;
}

// ---------------------------------------------------------------------------
// EdgeConnectionSet

size_t EdgeConnectionSet::first_at_or_after(Minutes minute_of_day) const {
  const size_t n = conns_.size();
  if (n == 0) return 0;
  size_t b = std::min<size_t>(static_cast<size_t>(minute_of_day / bucket_width_),
                              bucket_start_.size() - 1);
  size_t i = bucket_start_[b];
  while (i < n && conns_[i].dep < minute_of_day) ++i;
  return i;
}

int64_t EdgeConnectionSet::first_outrolled_at_or_after(Minutes t) const {
  const int64_t n = static_cast<int64_t>(conns_.size());
  int64_t day = floor_div(t, kMinutesPerDay);
  Minutes m = static_cast<Minutes>(t - day * kMinutesPerDay);
  size_t i = first_at_or_after(m);
  if (static_cast<int64_t>(i) == n) return (day + 1) * n;
  return day * n + static_cast<int64_t>(i);
}

size_t EdgeConnectionSet::wrap(int64_t j) const {
  const int64_t n = static_cast<int64_t>(conns_.size());
  return static_cast<size_t>(j - floor_div(j, n) * n);
}

int32_t EdgeConnectionSet::day_of(int64_t j) const {
  return static_cast<int32_t>(floor_div(j, static_cast<int64_t>(conns_.size())));
}

Minutes EdgeConnectionSet::outrolled_departure(int64_t j) const {
  return conns_[wrap(j)].dep + day_of(j) * kMinutesPerDay;
}

int64_t EdgeConnectionSet::outrolled_range_end(int64_t j) const {
  return range_end_[wrap(j)] +
         static_cast<int64_t>(day_of(j)) * static_cast<int64_t>(conns_.size());
}

EdgeConnectionSet make_indexed_unchecked(std::vector<Connection> canonical,
                                         const Timetable& tt,
                                         StationId target) {
  EdgeConnectionSet s;
  s.conns_ = std::move(canonical);
  s.target_transfer_ = tt.transfer(target);
  const size_t n = s.conns_.size();
  if (n == 0) return s;
  s.min_length_ = kInfinity;
  s.max_length_ = 0;
  for (const Connection& c : s.conns_) {
    s.min_length_ = std::min(s.min_length_, c.length());
    s.max_length_ = std::max(s.max_length_, c.length());
  }
  const size_t buckets = std::max<size_t>(1, n);
  s.bucket_width_ = static_cast<Minutes>(
      std::max<size_t>(1, (kMinutesPerDay + buckets - 1) / buckets));
  const size_t used = (kMinutesPerDay + s.bucket_width_ - 1) / s.bucket_width_;
  s.bucket_start_.resize(used);
  size_t i = 0;
  for (size_t b = 0; b < used; ++b) {
    Minutes lo = static_cast<Minutes>(b) * s.bucket_width_;
    while (i < n && s.conns_[i].dep < lo) ++i;
    s.bucket_start_[b] = static_cast<uint32_t>(i);
  }
  s.range_end_.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const Connection& c = s.conns_[k];
    Minutes bound = c.dep + (c.length() - s.min_length_) + s.target_transfer_;
    s.range_end_[k] = std::max<int64_t>(s.first_outrolled_at_or_after(bound),
                                        static_cast<int64_t>(k) + 1);
  }
  return s;
}

EdgeConnectionSet build_edge_index(std::vector<Connection> canonical,
                                   const Timetable& tt, StationId target) {
  for (size_t k = 0; k < canonical.size(); ++k) {
    const Connection& c = canonical[k];
    if (c.dep < 0 || c.dep >= kMinutesPerDay || c.arr < c.dep) {
      throw std::invalid_argument("build_edge_index: connection " +
                                  std::to_string(k) + " out of range");
    }
    if (k > 0 &&
        canonical_less(OrderKind::kProfile, c, canonical[k - 1], tt)) {
      throw std::invalid_argument("build_edge_index: input not in profile order");
    }
  }
  return make_indexed_unchecked(std::move(canonical), tt, target);
}

EdgeConnectionSet close_connections(std::vector<Connection> conns,
                                    const Timetable& tt, StationId s1,
                                    StationId s2) {
  std::vector<Item> items;
  items.reserve(conns.size());
  for (Connection& c : conns) {
    items.push_back(Item{c.shifted(normalise_departure_shift(c.dep)), 0});
  }
  sort_items(items, tt);
  auto alive = sweep_alive(items, tt, tt.transfer(s1), tt.transfer(s2));
  std::vector<Connection> out;
  for (size_t k = 0; k < items.size(); ++k) {
    if (alive[k]) out.push_back(items[k].c);
  }
  return make_indexed_unchecked(std::move(out), tt, s2);
}

std::vector<ArrivalConnection> close_arrivals(
    std::vector<ArrivalConnection> arrivals, const Timetable& tt,
    StationId at) {
  std::vector<ArrivalItem> items;
  items.reserve(arrivals.size());
  for (const ArrivalConnection& a : arrivals) items.push_back({a, 0});
  sort_arrivals(items, tt);
  auto keep = filter_arrivals(items, tt, tt.transfer(at));
  std::vector<ArrivalConnection> out;
  for (size_t k = 0; k < items.size(); ++k) {
    if (keep[k]) out.push_back(items[k].a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Time query link

namespace {

std::vector<ArrivalConnection> link_time_raw(
    std::span<const ArrivalConnection> ac, const EdgeConnectionSet& edge,
    const Timetable& tt, StationId from, StationId to) {
  std::vector<ArrivalConnection> out;
  if (ac.empty() || edge.empty()) return out;
  const Minutes transfer_from = tt.transfer(from);
  const Minutes transfer_to = tt.transfer(to);

  Minutes edt = kInfinity, ett = kInfinity;
  uint32_t transfer_parent = 0;
  for (uint32_t k = 0; k < ac.size(); ++k) {
    edt = std::min(edt, ac[k].arr);
    Minutes with_transfer =
        ac[k].arr + (ac[k].z2 == kAnyStopEvent ? 0 : transfer_from);
    if (with_transfer < ett) {
      ett = with_transfer;
      transfer_parent = k;
    }
  }

  Minutes min_arr = kInfinity;
  auto emit = [&](int64_t j, uint32_t parent) {
    const Connection& q = edge.outrolled(j);
    Minutes arr = edge.outrolled_departure(j) + q.length();
    if (min_arr < kInfinity && arr >= min_arr + transfer_to) return;
    min_arr = std::min(min_arr, arr);
    ArrivalConnection a;
    a.arr = arr;
    a.z2 = q.z2;
    a.parent = parent;
    a.via = ConnRef{static_cast<uint32_t>(edge.wrap(j)), edge.day_of(j)};
    out.push_back(a);
  };

  int64_t j = edge.first_outrolled_at_or_after(edt);
  // [P_n, P_t): only boardable by staying on the same stop event.
  for (; edge.outrolled_departure(j) < ett; ++j) {
    const Connection& q = edge.outrolled(j);
    const Minutes dep = edge.outrolled_departure(j);
    for (uint32_t k = 0; k < ac.size(); ++k) {
      if (ac[k].arr <= dep &&
          (ac[k].z2 == kAnyStopEvent || ac[k].z2 == q.z1)) {
        emit(j, k);
        break;
      }
    }
  }
  // [P_t, P_e): boardable with a transfer; later ones are dominated.
  const int64_t end = edge.outrolled_range_end(j);
  for (; j < end; ++j) emit(j, transfer_parent);
  return out;
}

ArrivalMerge merge_arrival_items(std::vector<ArrivalItem> items,
                                 std::span<const ArrivalConnection> existing,
                                 const Timetable& tt, StationId at) {
  sort_arrivals(items, tt);
  auto keep = filter_arrivals(items, tt, tt.transfer(at));
  ArrivalMerge m;
  for (size_t k = 0; k < items.size(); ++k) {
    if (!keep[k]) continue;
    m.set.push_back(items[k].a);
    m.from_incoming.push_back(items[k].pref);
  }
  m.changed = m.set.size() != existing.size();
  for (size_t k = 0; !m.changed && k < m.set.size(); ++k) {
    m.changed = m.from_incoming[k] || !m.set[k].same_label(existing[k]);
  }
  return m;
}

}  // namespace

std::vector<ArrivalConnection> link_time(std::span<const ArrivalConnection> ac,
                                         const EdgeConnectionSet& edge,
                                         const Timetable& tt, StationId from,
                                         StationId to) {
  return close_arrivals(link_time_raw(ac, edge, tt, from, to), tt, to);
}

ArrivalMerge minimum_arrivals(std::span<const ArrivalConnection> existing,
                              std::span<const ArrivalConnection> incoming,
                              const Timetable& tt, StationId at) {
  std::vector<ArrivalItem> items;
  items.reserve(existing.size() + incoming.size());
  for (const auto& a : existing) items.push_back({a, 0});
  for (const auto& a : incoming) items.push_back({a, 1});
  return merge_arrival_items(std::move(items), existing, tt, at);
}

ArrivalMerge link_and_minimum(std::span<const ArrivalConnection> ac,
                              const EdgeConnectionSet& edge,
                              std::span<const ArrivalConnection> existing,
                              const Timetable& tt, StationId from,
                              StationId to) {
  std::vector<ArrivalItem> items;
  for (const auto& a : existing) items.push_back({a, 0});
  for (const auto& a : link_time_raw(ac, edge, tt, from, to)) {
    items.push_back({a, 1});
  }
  return merge_arrival_items(std::move(items), existing, tt, to);
}

// ---------------------------------------------------------------------------
// Edge linking and minimum

std::vector<Connection> link_edges_raw(const EdgeConnectionSet& e1,
                                       const EdgeConnectionSet& e2,
                                       const Timetable& tt, StationId,
                                       StationId s2, StationId s3) {
  std::vector<Connection> out;
  if (e1.empty() || e2.empty()) return out;
  const Minutes transfer2 = tt.transfer(s2);
  const Minutes transfer3 = tt.transfer(s3);
  for (uint32_t i = 0; i < e1.size(); ++i) {
    const Connection& p = e1[i];
    Minutes min_arr = kInfinity;
    auto emit = [&](int64_t j) {
      const Connection& q = e2.outrolled(j);
      const Minutes dep = e2.outrolled_departure(j);
      const Minutes arr = dep + q.length();
      if (min_arr < kInfinity && arr >= min_arr + transfer3) return;
      min_arr = std::min(min_arr, arr);
      Connection c;
      c.z1 = p.z1;
      c.z2 = q.z2;
      c.dep = p.dep;
      c.arr = arr;
      c.transfers = add_transfers(p.transfers, q.transfers, p.z2 != q.z1);
      c.via = make_link_via(s2, i,
                            ConnRef{static_cast<uint32_t>(e2.wrap(j)), e2.day_of(j)});
      out.push_back(c);
    };
    const Minutes ett = p.arr + transfer2;
    int64_t j = e2.first_outrolled_at_or_after(p.arr);
    for (; e2.outrolled_departure(j) < ett; ++j) {
      if (e2.outrolled(j).z1 == p.z2) emit(j);
    }
    const int64_t end = e2.outrolled_range_end(j);
    for (; j < end; ++j) emit(j);
  }
  return out;
}

EdgeConnectionSet link_edges(const EdgeConnectionSet& e1,
                             const EdgeConnectionSet& e2, const Timetable& tt,
                             StationId s1, StationId s2, StationId s3) {
  return close_connections(link_edges_raw(e1, e2, tt, s1, s2, s3), tt, s1, s3);
}

EdgeConnectionSet minimum_connections(const EdgeConnectionSet& a,
                                      const EdgeConnectionSet& b,
                                      const Timetable& tt, StationId s1,
                                      StationId s2) {
  std::vector<Item> items;
  items.reserve(a.size() + b.size());
  // Both inputs are in profile order; merging keeps it.
  std::vector<Item> ia, ib;
  for (const auto& c : a.connections()) ia.push_back({c, 1});
  for (const auto& c : b.connections()) ib.push_back({c, 0});
  std::merge(ib.begin(), ib.end(), ia.begin(), ia.end(),
             std::back_inserter(items), ProfileKeyLess{&tt});
  auto alive = sweep_alive(items, tt, tt.transfer(s1), tt.transfer(s2));
  std::vector<Connection> out;
  for (size_t k = 0; k < items.size(); ++k) {
    if (alive[k]) out.push_back(items[k].c);
  }
  return make_indexed_unchecked(std::move(out), tt, s2);
}

ProfileMerge merge_candidates(std::vector<Connection> candidates,
                              const EdgeConnectionSet& existing,
                              const Timetable& tt, StationId s1,
                              StationId s3) {
  std::vector<Item> items;
  items.reserve(candidates.size() + existing.size());
  for (const auto& c : candidates) {
    items.push_back({c.shifted(normalise_departure_shift(c.dep)), 0});
  }
  sort_items(items, tt);
  std::vector<Item> merged;
  merged.reserve(items.size() + existing.size());
  std::vector<Item> ex;
  for (const auto& c : existing.connections()) ex.push_back({c, 1});
  std::merge(items.begin(), items.end(), ex.begin(), ex.end(),
             std::back_inserter(merged), ProfileKeyLess{&tt});
  auto alive = sweep_alive(merged, tt, tt.transfer(s1), tt.transfer(s3));
  ProfileMerge m;
  std::vector<Connection> out;
  for (size_t k = 0; k < merged.size(); ++k) {
    if (!alive[k]) continue;
    out.push_back(merged[k].c);
    m.from_incoming.push_back(merged[k].pref == 0 ? 1 : 0);
  }
  m.changed = out.size() != existing.size();
  for (size_t k = 0; !m.changed && k < out.size(); ++k) {
    m.changed = m.from_incoming[k] || !out[k].same_label(existing[k]);
  }
  m.set = make_indexed_unchecked(std::move(out), tt, s3);
  return m;
}

ProfileMerge link_and_minimum(const EdgeConnectionSet& e1,
                              const EdgeConnectionSet& e2,
                              const EdgeConnectionSet& existing,
                              const Timetable& tt, StationId s1, StationId s2,
                              StationId s3) {
  return merge_candidates(link_edges_raw(e1, e2, tt, s1, s2, s3), existing, tt,
                          s1, s3);
}

bool any_survives(const EdgeConnectionSet& candidates,
                  const EdgeConnectionSet& witnesses, const Timetable& tt,
                  StationId s1, StationId s2) {
  if (candidates.empty()) return false;
  if (witnesses.empty()) return true;
  std::vector<Item> items;
  std::vector<Item> ic, iw;
  for (const auto& c : candidates.connections()) ic.push_back({c, 1});
  for (const auto& c : witnesses.connections()) iw.push_back({c, 0});
  std::merge(iw.begin(), iw.end(), ic.begin(), ic.end(),
             std::back_inserter(items), ProfileKeyLess{&tt});
  auto alive = sweep_alive(items, tt, tt.transfer(s1), tt.transfer(s2));
  for (size_t k = 0; k < items.size(); ++k) {
    if (alive[k] && items[k].pref == 1) return true;
  }
  return false;
}

}  // namespace sgch
