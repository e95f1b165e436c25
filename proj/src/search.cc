#include "sgch/search.h"

#include <algorithm>
#include <stdexcept>

namespace sgch {

namespace {

void check_station(const StationGraph& g, StationId s) {
  if (s >= g.num_nodes()) {
    throw std::out_of_range("unknown station " + std::to_string(s));
  }
}

Minutes saturating_add(Minutes a, Minutes b) {
  if (a >= kInfinity || b >= kInfinity) return kInfinity;
  return std::min<int64_t>(static_cast<int64_t>(a) + b, kInfinity);
}

}  // namespace

// ---------------------------------------------------------------------------
// Time query

TimeQueryResult time_query(const StationGraph& g, StationId a, StationId b,
                           Minutes t0, const TimeQueryOptions& opt) {
  check_station(g, a);
  check_station(g, b);
  if (t0 < 0) throw std::invalid_argument("time_query: negative t0");
  const Timetable& tt = g.timetable();
  TimeQueryResult r;
  r.source = a;
  r.target = b;
  r.t0 = t0;
  r.records.push_back(ArrivalRecord{a, kNoIndex, kNoIndex, {}});
  ArrivalConnection start;
  start.arr = t0;
  start.z2 = kAnyStopEvent;
  start.label = 0;
  if (a == b) {
    r.reachable = true;
    r.arrival = t0;
    r.at_target = {start};
    return r;
  }

  const size_t n = g.num_nodes();
  std::vector<std::vector<ArrivalConnection>> ac(n);
  std::vector<Minutes> pending(n, kInfinity);
  using Entry = std::pair<Minutes, StationId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  ac[a] = {start};
  pending[a] = t0;
  queue.push({t0, a});
  Minutes best = kInfinity;

  while (!queue.empty()) {
    auto [key, s] = queue.top();
    queue.pop();
    if (pending[s] != key) continue;
    if (opt.stop_on_target_bound && key >= best) break;
    pending[s] = kInfinity;
    ++r.delete_mins;
    if (s == b) break;
    for (uint32_t eid : g.out_edges(s)) {
      const GraphEdge& e = g.edge(eid);
      if (opt.filter && !opt.filter(e)) continue;
      const StationId t = e.to;
      ArrivalMerge m = link_and_minimum(ac[s], e.conns, ac[t], tt, s, t);
      if (!m.changed) continue;
      Minutes new_key = kInfinity;
      for (size_t k = 0; k < m.set.size(); ++k) {
        if (!m.from_incoming[k]) continue;
        ArrivalConnection& x = m.set[k];
        r.records.push_back(
            ArrivalRecord{t, ac[s][x.parent].label, eid, x.via});
        x.label = static_cast<uint32_t>(r.records.size() - 1);
        new_key = std::min(new_key, x.arr);
      }
      ac[t] = std::move(m.set);
      if (t == b) {
        for (const auto& x : ac[b]) best = std::min(best, x.arr);
      }
      if (new_key < pending[t]) {
        pending[t] = new_key;
        queue.push({new_key, t});
      }
    }
  }
  r.reachable = best < kInfinity;
  r.arrival = best;
  r.at_target = std::move(ac[b]);
  return r;
}

std::vector<TimedLeg> extract_journey(const StationGraph& g,
                                      const TimeQueryResult& r,
                                      const ArrivalConnection& chosen) {
  std::vector<std::vector<TimedLeg>> parts;
  uint32_t rec = chosen.label;
  size_t guard = 0;
  while (true) {
    if (rec >= r.records.size() || ++guard > r.records.size() + 1) {
      throw std::runtime_error("extract_journey: dangling provenance");
    }
    const ArrivalRecord& x = r.records[rec];
    if (x.edge == kNoIndex) break;
    const GraphEdge& e = g.edge(x.edge);
    if (x.edge_ref.index >= e.conns.size()) {
      throw std::runtime_error("extract_journey: dangling edge reference");
    }
    Connection c = e.conns[x.edge_ref.index].shifted(x.edge_ref.day *
                                                     kMinutesPerDay);
    parts.push_back(unpack_connection(g, e.from, e.to, c));
    rec = x.parent;
  }
  std::vector<TimedLeg> legs;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    legs.insert(legs.end(), it->begin(), it->end());
  }
  return legs;
}

std::vector<TimedLeg> extract_journey(const StationGraph& g,
                                      const TimeQueryResult& r) {
  if (!r.reachable || r.source == r.target) return {};
  auto it = std::min_element(
      r.at_target.begin(), r.at_target.end(),
      [](const auto& x, const auto& y) { return x.arr < y.arr; });
  return extract_journey(g, r, *it);
}

// ---------------------------------------------------------------------------
// Profile search

std::vector<TimedLeg> expand_record(const StationGraph& g,
                                    std::span<const LabelRecord> arena,
                                    uint32_t record, Minutes shift) {
  if (record >= arena.size()) {
    throw std::runtime_error("expand_record: dangling provenance");
  }
  const LabelRecord& x = arena[record];
  std::vector<TimedLeg> legs;
  if (x.prefix != kNoIndex) {
    if (x.prefix >= record) throw std::runtime_error("expand_record: cycle");
    legs = expand_record(g, arena, x.prefix,
                         shift + x.prefix_day * kMinutesPerDay);
  }
  if (x.edge != kNoIndex) {
    const GraphEdge& e = g.edge(x.edge);
    if (x.edge_ref.index >= e.conns.size()) {
      throw std::runtime_error("expand_record: dangling edge reference");
    }
    Connection c = e.conns[x.edge_ref.index].shifted(
        shift + x.edge_ref.day * kMinutesPerDay);
    auto part = unpack_connection(g, e.from, e.to, c);
    legs.insert(legs.end(), part.begin(), part.end());
  }
  if (x.suffix != kNoIndex) {
    if (x.suffix >= record) throw std::runtime_error("expand_record: cycle");
    auto part = expand_record(g, arena, x.suffix,
                              shift + x.suffix_day * kMinutesPerDay);
    legs.insert(legs.end(), part.begin(), part.end());
  }
  return legs;
}

Minutes max_duration(const EdgeConnectionSet& conns) {
  const size_t n = conns.size();
  if (n == 0) return kInfinity;
  const int64_t span =
      static_cast<int64_t>(n) * (2 + conns.max_length() / kMinutesPerDay);
  std::vector<Minutes> suffix_min(static_cast<size_t>(span) + 1, kInfinity);
  for (int64_t j = span - 1; j >= 0; --j) {
    Minutes arr = conns.outrolled_departure(j) + conns.outrolled(j).length();
    suffix_min[j] = std::min(arr, suffix_min[j + 1]);
  }
  Minutes worst = 0;
  for (size_t i = 0; i < n; ++i) {
    // Worst departure minute served first by connection i: just after the
    // previous departure.
    Minutes prev = i == 0 ? conns[n - 1].dep - kMinutesPerDay : conns[i - 1].dep;
    Minutes m = prev + 1;
    if (m < 0) m += kMinutesPerDay;
    const int64_t j = conns.first_outrolled_at_or_after(m);
    if (j >= span) continue;
    worst = std::max(worst, suffix_min[j] - m);
  }
  return worst;
}

Minutes profile_slack(const Timetable& tt, StationId a, StationId b) {
  return tt.transfer(a) + tt.transfer(b) + kMinutesPerDay;
}

ProfileSearch::ProfileSearch(const StationGraph& g, StationId root,
                             ProfileSearchOptions opt,
                             std::vector<LabelRecord>* arena)
    : g_(g),
      tt_(g.timetable()),
      root_(root),
      opt_(std::move(opt)),
      arena_(arena ? arena : &own_arena_) {
  check_station(g, root);
  if (opt_.target != kNoIndex) check_station(g, opt_.target);
  const size_t n = g.num_nodes();
  labels_.resize(n);
  has_label_.assign(n, 0);
  hops_.assign(n, 0xffffffffu);
  pending_.assign(n, kInfinity);
  hops_[root] = 0;
  push(root, 0);
}

void ProfileSearch::push(StationId t, Minutes key) {
  if (key < pending_[t]) {
    pending_[t] = key;
    queue_.push({key, t});
  }
}

Minutes ProfileSearch::top_key() const {
  auto& q = queue_;
  while (!q.empty() && pending_[q.top().second] != q.top().first) q.pop();
  return q.empty() ? kInfinity : q.top().first;
}

bool ProfileSearch::done() const {
  Minutes k = top_key();
  return k >= kInfinity || (bound_ < kInfinity && k > bound_);
}

StationId ProfileSearch::step() {
  Minutes k = top_key();
  if (k >= kInfinity) throw std::logic_error("ProfileSearch::step on empty queue");
  StationId s = queue_.top().second;
  queue_.pop();
  pending_[s] = kInfinity;
  ++delete_mins_;
  relax(s);
  return s;
}

void ProfileSearch::run() {
  while (!done()) step();
}

void ProfileSearch::update_bound() {
  if (opt_.target == kNoIndex) return;
  bound_ = saturating_add(max_duration(labels_[opt_.target]),
                          profile_slack(tt_, root_, opt_.target));
}

void ProfileSearch::relax(StationId s) {
  const bool identity = s == root_ && !root_relaxed_;
  if (s == root_) root_relaxed_ = true;
  if (!identity && !has_label_[s]) return;
  if (opt_.hop_limit != 0 && hops_[s] >= opt_.hop_limit) return;
  const auto edges = opt_.backward ? g_.in_edges(s) : g_.out_edges(s);
  for (uint32_t eid : edges) {
    const GraphEdge& e = g_.edge(eid);
    if (opt_.filter && !opt_.filter(e)) continue;
    const StationId t = opt_.backward ? e.from : e.to;
    hops_[t] = std::min(hops_[t], hops_[s] + 1);

    std::vector<Connection> raw;
    if (identity) {
      raw.assign(e.conns.connections().begin(), e.conns.connections().end());
    } else if (opt_.backward) {
      raw = link_edges_raw(e.conns, labels_[s], tt_, t, s, root_);
    } else {
      raw = link_edges_raw(labels_[s], e.conns, tt_, root_, s, t);
    }
    std::vector<Connection> kept;
    std::vector<uint32_t> origin;
    for (uint32_t k = 0; k < raw.size(); ++k) {
      const Connection& c = raw[k];
      if (c.transfers > opt_.transfer_limit) continue;
      if (c.length() > opt_.duration_bound) continue;
      kept.push_back(c);
      kept.back().label = k;
    }
    if (kept.empty()) continue;
    const StationId s1 = opt_.backward ? t : root_;
    const StationId s3 = opt_.backward ? root_ : t;
    ProfileMerge m = merge_candidates(std::move(kept), labels_[t], tt_, s1, s3);
    if (!m.changed) continue;

    std::vector<Connection> out(m.set.connections().begin(),
                                m.set.connections().end());
    Minutes key = kInfinity;
    for (size_t k = 0; k < out.size(); ++k) {
      if (!m.from_incoming[k]) continue;
      const uint32_t idx = out[k].label;
      const Connection& c = raw[idx];
      LabelRecord rec;
      rec.conn = c;
      rec.edge = eid;
      if (identity) {
        rec.edge_ref = ConnRef{idx, 0};
      } else if (opt_.backward) {
        rec.edge_ref = c.via.first;
        rec.suffix = labels_[s][c.via.second.index].label;
        rec.suffix_day = c.via.second.day;
      } else {
        rec.prefix = labels_[s][c.via.first.index].label;
        rec.prefix_day = c.via.first.day;
        rec.edge_ref = c.via.second;
      }
      rec.conn.label = static_cast<uint32_t>(arena_->size());
      out[k].label = rec.conn.label;
      arena_->push_back(rec);
      key = std::min(key, out[k].length());
    }
    labels_[t] = make_indexed_unchecked(std::move(out), tt_, s3);
    has_label_[t] = 1;
    if (t == opt_.target) update_bound();
    push(t, key);
  }
}

ProfileQueryResult profile_query(const StationGraph& g, StationId a,
                                 StationId b, const ProfileQueryOptions& opt) {
  check_station(g, a);
  check_station(g, b);
  ProfileQueryResult r;
  r.source = a;
  r.target = b;
  if (a == b) return r;
  ProfileSearchOptions so;
  so.filter = opt.filter;
  so.target = opt.prune ? b : kNoIndex;
  ProfileSearch search(g, a, std::move(so));
  search.run();
  r.conns = search.labels(b);
  r.delete_mins = search.delete_mins();
  r.records = std::move(search.arena());
  return r;
}

std::vector<TimedLeg> extract_journey(const StationGraph& g,
                                      const ProfileQueryResult& r,
                                      const Connection& member, int32_t day) {
  return expand_record(g, r.records, member.label,
                       day * kMinutesPerDay);
}

Minutes evaluate_profile(const EdgeConnectionSet& conns, Minutes t0) {
  if (conns.empty()) return kInfinity;
  Minutes best = kInfinity;
  for (int64_t j = conns.first_outrolled_at_or_after(t0);; ++j) {
    Minutes dep = conns.outrolled_departure(j);
    if (dep >= best) break;
    best = std::min(best, dep + conns.outrolled(j).length());
  }
  return best;
}

}  // namespace sgch
