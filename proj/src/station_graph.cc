#include "sgch/station_graph.h"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace sgch {

StationGraph::StationGraph(std::shared_ptr<const Timetable> tt)
    : tt_(std::move(tt)) {
  out_.resize(tt_->num_stations());
  in_.resize(tt_->num_stations());
}

uint32_t StationGraph::find_edge(StationId u, StationId w) const {
  auto it = index_.find(key(u, w));
  return it == index_.end() ? kNoIndex : it->second;
}

const EdgeConnectionSet* StationGraph::connections(StationId u,
                                                   StationId w) const {
  uint32_t id = find_edge(u, w);
  return id == kNoIndex ? nullptr : &edges_[id].conns;
}

void StationGraph::insert_sorted(std::vector<uint32_t>& list, uint32_t edge_id,
                                 bool by_target) {
  auto neighbour = [&](uint32_t id) {
    return by_target ? edges_[id].to : edges_[id].from;
  };
  auto pos = std::lower_bound(
      list.begin(), list.end(), neighbour(edge_id),
      [&](uint32_t id, StationId n) { return neighbour(id) < n; });
  list.insert(pos, edge_id);
}

uint32_t StationGraph::set_edge(StationId u, StationId w,
                                EdgeConnectionSet conns) {
  if (u >= num_nodes() || w >= num_nodes()) {
    throw std::out_of_range("set_edge: unknown station");
  }
  uint32_t id = find_edge(u, w);
  if (id != kNoIndex) {
    edges_[id].conns = std::move(conns);
    return id;
  }
  if (conns.empty()) return kNoIndex;
  id = static_cast<uint32_t>(edges_.size());
  edges_.push_back(GraphEdge{u, w, std::move(conns)});
  index_.emplace(key(u, w), id);
  insert_sorted(out_[u], id, true);
  insert_sorted(in_[w], id, false);
  return id;
}

bool StationGraph::merge_edge(StationId u, StationId w,
                              const EdgeConnectionSet& incoming) {
  uint32_t id = find_edge(u, w);
  if (id == kNoIndex) {
    if (incoming.empty()) return false;
    set_edge(u, w, incoming);
    return true;
  }
  EdgeConnectionSet merged =
      minimum_connections(edges_[id].conns, incoming, *tt_, u, w);
  if (merged == edges_[id].conns) return false;
  edges_[id].conns = std::move(merged);
  return true;
}

size_t StationGraph::total_connections() const {
  size_t n = 0;
  for (const GraphEdge& e : edges_) n += e.conns.size();
  return n;
}

uint32_t StationGraph::add_snapshot(EdgeConnectionSet s) {
  snapshots_.push_back(std::move(s));
  return static_cast<uint32_t>(snapshots_.size() - 1);
}

bool operator==(const StationGraph& a, const StationGraph& b) {
  if (a.num_nodes() != b.num_nodes() || a.edges_.size() != b.edges_.size() ||
      a.snapshots_ != b.snapshots_) {
    return false;
  }
  for (size_t i = 0; i < a.edges_.size(); ++i) {
    const GraphEdge& x = a.edges_[i];
    const GraphEdge& y = b.edges_[i];
    if (x.from != y.from || x.to != y.to || !(x.conns == y.conns)) return false;
  }
  return true;
}

StationGraph build_station_graph(std::shared_ptr<const Timetable> tt) {
  auto issues = validate_timetable(*tt);
  if (!issues.empty()) {
    throw std::invalid_argument("invalid timetable: " + issues[0].location +
                                ": " + issues[0].message);
  }
  std::map<std::pair<StationId, StationId>, std::vector<Connection>> grouped;
  for (const ElementaryConnection& e : tt->elementary()) {
    Connection c;
    c.z1 = e.z1;
    c.z2 = e.z2;
    c.dep = e.td;
    c.arr = e.td + e.length();
    c.via = Via::elementary(e.id);
    grouped[{e.s1, e.s2}].push_back(c);
  }
  StationGraph g(tt);
  for (auto& [pair, conns] : grouped) {
    g.set_edge(pair.first, pair.second,
               close_connections(std::move(conns), *tt, pair.first, pair.second));
  }
  return g;
}

namespace {

[[noreturn]] void corrupted(const std::string& what) {
  throw std::runtime_error("corrupted via record: " + what);
}

const Connection& resolve(const EdgeConnectionSet* set, ConnRef ref) {
  if (set == nullptr || !ref.valid() || ref.index >= set->size()) {
    corrupted("dangling reference");
  }
  return (*set)[ref.index];
}

void unpack_into(const StationGraph& g, StationId u, StationId w,
                 const Connection& c, std::vector<TimedLeg>& out, int depth) {
  if (depth > 256) corrupted("nesting too deep");
  const Timetable& tt = g.timetable();
  switch (c.via.kind) {
    case Via::Kind::kElementary: {
      if (c.via.node >= tt.elementary().size()) corrupted("unknown elementary");
      const ElementaryConnection& e = tt.elementary()[c.via.node];
      if (e.s1 != u || e.s2 != w) corrupted("elementary on another edge");
      out.push_back(TimedLeg{e.id, c.dep, c.arr});
      return;
    }
    case Via::Kind::kLink: {
      const StationId m = c.via.node;
      const Minutes base =
          (c.dep >= 0 ? c.dep / kMinutesPerDay
                      : -((-c.dep + kMinutesPerDay - 1) / kMinutesPerDay)) *
          kMinutesPerDay;
      const EdgeConnectionSet* first_set;
      const EdgeConnectionSet* second_set;
      if (c.via.snapshot != kNoIndex) {
        if (c.via.snapshot >= g.snapshots().size()) corrupted("bad snapshot");
        first_set = second_set = &g.snapshot(c.via.snapshot);
      } else {
        first_set = g.connections(u, m);
        second_set = g.connections(m, w);
      }
      Connection p = resolve(first_set, c.via.first)
                         .shifted(base + c.via.first.day * kMinutesPerDay);
      Connection q = resolve(second_set, c.via.second)
                         .shifted(base + c.via.second.day * kMinutesPerDay);
      if (p.dep != c.dep || q.arr != c.arr) corrupted("times do not match");
      unpack_into(g, u, m, p, out, depth + 1);
      if (c.via.loop.valid()) {
        Connection l = resolve(g.connections(m, m), c.via.loop)
                           .shifted(base + c.via.loop.day * kMinutesPerDay);
        unpack_into(g, m, m, l, out, depth + 1);
      }
      unpack_into(g, m, w, q, out, depth + 1);
      return;
    }
    case Via::Kind::kNone:
      break;
  }
  corrupted("connection without provenance");
}

}  // namespace

std::vector<TimedLeg> unpack_connection(const StationGraph& g, StationId u,
                                        StationId w, const Connection& c) {
  std::vector<TimedLeg> legs;
  unpack_into(g, u, w, c, legs, 0);
  return legs;
}

}  // namespace sgch
