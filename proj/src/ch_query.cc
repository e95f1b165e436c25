#include "sgch/ch_query.h"

#include <stdexcept>

namespace sgch {

namespace {

void check_station(const Hierarchy& h, StationId s) {
  if (s >= h.graph.num_nodes()) {
    throw std::out_of_range("unknown station " + std::to_string(s));
  }
}

Minutes saturating_add(Minutes a, Minutes b) {
  return a >= kInfinity - b ? kInfinity : a + b;
}

}  // namespace

Corridor backward_corridor(const Hierarchy& h, StationId b) {
  check_station(h, b);
  const StationGraph& g = h.graph;
  Corridor c;
  c.node.assign(g.num_nodes(), 0);
  c.edge.assign(g.num_edges(), 0);
  std::vector<StationId> stack{b};
  c.node[b] = 1;
  while (!stack.empty()) {
    StationId y = stack.back();
    stack.pop_back();
    ++c.nodes;
    for (uint32_t eid : g.in_edges(y)) {
      StationId x = g.edge(eid).from;
      if (h.rank[x] <= h.rank[y]) continue;
      c.edge[eid] = 1;
      if (!c.node[x]) {
        c.node[x] = 1;
        stack.push_back(x);
      }
    }
  }
  return c;
}

ChTimeResult ch_time_query(const Hierarchy& h, StationId a, StationId b,
                           Minutes t0) {
  check_station(h, a);
  ChTimeResult out;
  Corridor corridor = backward_corridor(h, b);
  out.corridor_nodes = corridor.nodes;
  const GraphEdge* base = h.graph.edges().data();
  const uint32_t* rank = h.rank.data();
  const uint8_t* marked = corridor.edge.data();
  TimeQueryOptions opt;
  opt.stop_on_target_bound = true;
  opt.filter = [=](const GraphEdge& e) {
    return rank[e.from] <= rank[e.to] || marked[&e - base];
  };
  out.result = time_query(h.graph, a, b, t0, opt);
  return out;
}

ProfileQueryResult ch_profile_query(const Hierarchy& h, StationId a,
                                    StationId b) {
  check_station(h, a);
  check_station(h, b);
  const StationGraph& g = h.graph;
  const Timetable& tt = g.timetable();
  ProfileQueryResult r;
  r.source = a;
  r.target = b;
  if (a == b) return r;

  const uint32_t* rank = h.rank.data();
  std::vector<LabelRecord> arena;
  ProfileSearchOptions fo;
  fo.filter = [=](const GraphEdge& e) { return rank[e.from] <= rank[e.to]; };
  ProfileSearchOptions bo;
  bo.backward = true;
  bo.filter = [=](const GraphEdge& e) { return rank[e.from] >= rank[e.to]; };
  ProfileSearch fwd(g, a, std::move(fo), &arena);
  ProfileSearch bwd(g, b, std::move(bo), &arena);

  const Minutes slack = profile_slack(tt, a, b);
  Minutes bound = kInfinity;

  // Folds every a -> b connection through m into the result.
  auto meet = [&](StationId m) {
    std::vector<Connection> raw;
    // Candidate k: (prefix record, prefix day, suffix record, suffix day).
    struct Parts {
      uint32_t prefix, suffix;
      int32_t prefix_day, suffix_day;
    };
    std::vector<Parts> parts;
    if (m == a && bwd.reached(a)) {
      for (const Connection& c : bwd.labels(a).connections()) {
        raw.push_back(c);
        parts.push_back({kNoIndex, c.label, 0, 0});
      }
    }
    if (m == b && fwd.reached(b)) {
      for (const Connection& c : fwd.labels(b).connections()) {
        raw.push_back(c);
        parts.push_back({c.label, kNoIndex, 0, 0});
      }
    }
    if (fwd.reached(m) && bwd.reached(m)) {
      const EdgeConnectionSet& f = fwd.labels(m);
      const EdgeConnectionSet& w = bwd.labels(m);
      for (const Connection& c : link_edges_raw(f, w, tt, a, m, b)) {
        raw.push_back(c);
        parts.push_back({f[c.via.first.index].label,
                         w[c.via.second.index].label,
                         c.via.first.day, c.via.second.day});
      }
    }
    if (raw.empty()) return;
    for (uint32_t k = 0; k < raw.size(); ++k) raw[k].label = k;
    std::vector<Connection> cands = raw;
    ProfileMerge mg = merge_candidates(std::move(cands), r.conns, tt, a, b);
    if (!mg.changed) return;
    std::vector<Connection> out(mg.set.connections().begin(),
                                mg.set.connections().end());
    for (size_t k = 0; k < out.size(); ++k) {
      if (!mg.from_incoming[k]) continue;
      const uint32_t idx = out[k].label;
      LabelRecord rec;
      rec.conn = raw[idx];
      rec.prefix = parts[idx].prefix;
      rec.prefix_day = parts[idx].prefix_day;
      rec.suffix = parts[idx].suffix;
      rec.suffix_day = parts[idx].suffix_day;
      rec.conn.label = static_cast<uint32_t>(arena.size());
      out[k].label = rec.conn.label;
      arena.push_back(rec);
    }
    r.conns = make_indexed_unchecked(std::move(out), tt, b);
    bound = saturating_add(max_duration(r.conns), slack);
  };

  bool forward_turn = true;
  for (;;) {
    const Minutes fk = fwd.top_key();
    const Minutes bk = bwd.top_key();
    const bool f_open = fk < kInfinity && fk <= bound;
    const bool b_open = bk < kInfinity && bk <= bound;
    if (!f_open && !b_open) break;
    ProfileSearch& s = (forward_turn && f_open) || !b_open ? fwd : bwd;
    forward_turn = !forward_turn;
    meet(s.step());
  }
  r.delete_mins = fwd.delete_mins() + bwd.delete_mins();
  r.records = std::move(arena);
  return r;
}

}  // namespace sgch
