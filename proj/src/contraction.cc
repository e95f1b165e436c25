#include "sgch/contraction.h"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace sgch {

namespace {

// Snapshot ids of a closure computed off the graph are local until the
// snapshots are appended; the flag marks them.
constexpr uint32_t kLocalSnapshot = 0x80000000u;
constexpr int kMaxClosureRounds = 64;

struct LoopClosure {
  std::vector<EdgeConnectionSet> levels;
  EdgeConnectionSet closed;
};

// Closes the loop set under self-composition. Journeys may ride a station's
// loop several times in a row, so a single loop segment per shortcut is not
// enough.
LoopClosure close_loop(const EdgeConnectionSet& loop, const Timetable& tt,
                       StationId v, bool record) {
  LoopClosure c;
  c.closed = loop;
  for (int round = 0; round < kMaxClosureRounds; ++round) {
    ProfileMerge m =
        link_and_minimum(c.closed, c.closed, c.closed, tt, v, v, v);
    if (!m.changed) return c;
    if (!record) {
      c.closed = std::move(m.set);
      continue;
    }
    const uint32_t level = static_cast<uint32_t>(c.levels.size());
    c.levels.push_back(c.closed);
    std::vector<Connection> conns(m.set.connections().begin(),
                                  m.set.connections().end());
    for (size_t k = 0; k < conns.size(); ++k) {
      if (m.from_incoming[k]) conns[k].via.snapshot = kLocalSnapshot | level;
    }
    c.closed = make_indexed_unchecked(std::move(conns), tt, v);
  }
  throw std::runtime_error("loop closure did not converge at station " +
                           std::to_string(v));
}

EdgeConnectionSet remap_snapshots(const EdgeConnectionSet& s, uint32_t offset,
                                  const Timetable& tt, StationId target) {
  std::vector<Connection> conns(s.connections().begin(), s.connections().end());
  for (Connection& c : conns) {
    if (c.via.snapshot != kNoIndex && (c.via.snapshot & kLocalSnapshot)) {
      c.via.snapshot = offset + (c.via.snapshot & ~kLocalSnapshot);
    }
  }
  return make_indexed_unchecked(std::move(conns), tt, target);
}

EdgeConnectionSet candidates(const StationGraph& g, StationId u, StationId v,
                             StationId w, const EdgeConnectionSet& loop) {
  const Timetable& tt = g.timetable();
  const EdgeConnectionSet* uv = g.connections(u, v);
  const EdgeConnectionSet* vw = g.connections(v, w);
  if (!uv || !vw) return {};
  EdgeConnectionSet direct = link_edges(*uv, *vw, tt, u, v, w);
  if (loop.empty()) return direct;
  EdgeConnectionSet first = link_edges(*uv, loop, tt, u, v, v);
  EdgeConnectionSet looped = link_edges(first, *vw, tt, u, v, w);
  // Flatten ((first, loop), second) into one via triple.
  std::vector<Connection> conns(looped.connections().begin(),
                                looped.connections().end());
  for (Connection& c : conns) {
    const Via& inner = first[c.via.first.index].via;
    c.via.first = inner.first;
    c.via.loop = inner.second;
  }
  return minimum_connections(direct,
                             make_indexed_unchecked(std::move(conns), tt, w),
                             tt, u, w);
}

}  // namespace

double priority_score(size_t shortcuts, size_t removed_edges, uint32_t depth,
                      const ContractionParams& p) {
  double quotient = removed_edges == 0
                        ? 0.0
                        : static_cast<double>(shortcuts) /
                              static_cast<double>(removed_edges);
  return p.quotient_weight * quotient + p.depth_weight * depth;
}

std::vector<StationId> select_contraction_set(
    const StationGraph& g, std::span<const uint8_t> remaining,
    std::span<const double> priority) {
  const size_t n = g.num_nodes();
  std::vector<std::vector<StationId>> adj(n);
  for (const GraphEdge& e : g.edges()) {
    if (e.from == e.to || !remaining[e.from] || !remaining[e.to]) continue;
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  auto before = [&](StationId a, StationId b) {
    return priority[a] < priority[b] || (priority[a] == priority[b] && a < b);
  };
  std::vector<StationId> out;
  for (StationId v = 0; v < n; ++v) {
    if (!remaining[v]) continue;
    bool minimal = true;
    for (StationId x : adj[v]) {
      if (before(x, v)) minimal = false;
      for (StationId y : adj[x]) {
        if (y != v && before(y, v)) minimal = false;
        if (!minimal) break;
      }
      if (!minimal) break;
    }
    if (minimal) out.push_back(v);
  }
  return out;
}

Contractor::Contractor(StationGraph g, ContractionParams p)
    : g_(std::move(g)), params_(p) {
  if (params_.hop_limit < 1) {
    throw std::invalid_argument("hop limit must be at least 1");
  }
  const size_t n = g_.num_nodes();
  contracted_.assign(n, 0);
  remaining_.assign(n, 1);
  remaining_count_ = n;
  depth_.assign(n, 0);
  stored_.resize(n);
}

template <typename F>
void Contractor::parallel_for(size_t n, F&& f) const {
  const size_t workers = std::min<size_t>(std::max(1u, params_.threads), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      for (size_t i = next++; i < n && !failed; i = next++) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<StationId> Contractor::out_remaining(StationId v) const {
  std::vector<StationId> r;
  for (uint32_t id : g_.out_edges(v)) {
    StationId w = g_.edge(id).to;
    if (w != v && remaining_[w]) r.push_back(w);
  }
  return r;
}

std::vector<StationId> Contractor::in_remaining(StationId v) const {
  std::vector<StationId> r;
  for (uint32_t id : g_.in_edges(v)) {
    StationId u = g_.edge(id).from;
    if (u != v && remaining_[u]) r.push_back(u);
  }
  return r;
}

EdgeFilter Contractor::remaining_filter() const {
  const uint8_t* rem = remaining_.data();
  return [rem](const GraphEdge& e) { return rem[e.from] && rem[e.to]; };
}

size_t Contractor::removed_edges(StationId v) const {
  size_t n = out_remaining(v).size() + in_remaining(v).size();
  if (g_.find_edge(v, v) != kNoIndex) ++n;
  return n;
}

double Contractor::priority(StationId v) const {
  return priority_score(stored_[v].size(), removed_edges(v), depth_[v],
                        params_);
}

EdgeConnectionSet Contractor::loop_closure(StationId v) const {
  const EdgeConnectionSet* loop = g_.connections(v, v);
  if (!loop) return {};
  return close_loop(*loop, g_.timetable(), v, false).closed;
}

EdgeConnectionSet Contractor::candidate_connections(StationId u, StationId v,
                                                    StationId w) const {
  return candidates(g_, u, v, w, loop_closure(v));
}

Contractor::Decisions Contractor::decide_from(StationId u,
                                              StationId only_v) const {
  struct Cand {
    StationId v, w;
    EdgeConnectionSet conns;
  };
  Decisions d;
  std::vector<Cand> cands;
  Minutes longest = 0;
  for (StationId v : out_remaining(u)) {
    if (only_v != kNoIndex && v != only_v) continue;
    d.touched.push_back(v);
    EdgeConnectionSet loop = loop_closure(v);
    for (StationId w : out_remaining(v)) {
      EdgeConnectionSet c = candidates(g_, u, v, w, loop);
      if (c.empty()) continue;
      longest = std::max(longest, c.max_length());
      cands.push_back({v, w, std::move(c)});
    }
  }
  if (cands.empty()) return d;
  ProfileSearchOptions opt;
  opt.filter = remaining_filter();
  opt.hop_limit = params_.hop_limit;
  opt.transfer_limit = params_.transfer_limit;
  opt.duration_bound = longest + params_.duration_slack;
  ProfileSearch search(g_, u, std::move(opt));
  search.run();
  for (const Cand& c : cands) {
    if (any_survives(c.conns, search.labels(c.w), g_.timetable(), u, c.w)) {
      d.necessary.push_back({c.v, {u, c.w}});
    }
  }
  return d;
}

Contractor::Decisions Contractor::decide_to(StationId w) const {
  struct Cand {
    StationId u, v;
    EdgeConnectionSet conns;
  };
  Decisions d;
  std::vector<Cand> cands;
  Minutes longest = 0;
  for (StationId v : in_remaining(w)) {
    d.touched.push_back(v);
    EdgeConnectionSet loop = loop_closure(v);
    for (StationId u : in_remaining(v)) {
      EdgeConnectionSet c = candidates(g_, u, v, w, loop);
      if (c.empty()) continue;
      longest = std::max(longest, c.max_length());
      cands.push_back({u, v, std::move(c)});
    }
  }
  if (cands.empty()) return d;
  ProfileSearchOptions opt;
  opt.backward = true;
  opt.filter = remaining_filter();
  opt.hop_limit = params_.hop_limit;
  opt.transfer_limit = params_.transfer_limit;
  opt.duration_bound = longest + params_.duration_slack;
  ProfileSearch search(g_, w, std::move(opt));
  search.run();
  for (const Cand& c : cands) {
    if (any_survives(c.conns, search.labels(c.u), g_.timetable(), c.u, w)) {
      d.necessary.push_back({c.v, {c.u, w}});
    }
  }
  return d;
}

void Contractor::apply(const Decisions& d, bool from_side, StationId fixed) {
  for (StationId v : d.touched) {
    auto& list = stored_[v];
    list.erase(std::remove_if(list.begin(), list.end(),
                              [&](const ShortcutPair& p) {
                                return (from_side ? p.first : p.second) == fixed;
                              }),
               list.end());
  }
  for (const auto& [v, pair] : d.necessary) {
    auto& list = stored_[v];
    auto it = std::lower_bound(list.begin(), list.end(), pair);
    if (it == list.end() || *it != pair) list.insert(it, pair);
  }
}

void Contractor::precompute() {
  std::vector<StationId> all;
  for (StationId u = 0; u < g_.num_nodes(); ++u) {
    if (remaining_[u]) all.push_back(u);
  }
  refresh({}, std::move(all), {});
}

void Contractor::refresh(std::vector<StationId> loops,
                         std::vector<StationId> sources,
                         std::vector<StationId> targets) {
  auto unique_sorted = [](std::vector<StationId>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  };
  unique_sorted(loops);
  unique_sorted(sources);
  unique_sorted(targets);

  // Everything at a node with a new loop; candidates through it changed.
  for (StationId x : loops) stored_[x].clear();
  std::vector<std::pair<StationId, StationId>> loop_jobs;
  for (StationId x : loops) {
    for (StationId u : in_remaining(x)) loop_jobs.push_back({u, x});
  }
  std::vector<Decisions> results(loop_jobs.size());
  parallel_for(loop_jobs.size(), [&](size_t i) {
    results[i] = decide_from(loop_jobs[i].first, loop_jobs[i].second);
  });
  for (size_t i = 0; i < loop_jobs.size(); ++i) {
    apply(results[i], true, loop_jobs[i].first);
  }

  results.assign(sources.size(), {});
  parallel_for(sources.size(),
               [&](size_t i) { results[i] = decide_from(sources[i], kNoIndex); });
  for (size_t i = 0; i < sources.size(); ++i) apply(results[i], true, sources[i]);

  results.assign(targets.size(), {});
  parallel_for(targets.size(),
               [&](size_t i) { results[i] = decide_to(targets[i]); });
  for (size_t i = 0; i < targets.size(); ++i) apply(results[i], false, targets[i]);
}

void Contractor::contract_round(std::span<const StationId> set) {
  struct Work {
    LoopClosure loop;
    bool has_loop = false;
    std::vector<std::pair<ShortcutPair, EdgeConnectionSet>> shortcuts;
  };
  for (StationId v : set) {
    if (v >= g_.num_nodes() || !remaining_[v]) {
      throw std::invalid_argument("contract_round: station not remaining");
    }
  }
  const Timetable& tt = g_.timetable();
  std::vector<Work> work(set.size());
  parallel_for(set.size(), [&](size_t i) {
    const StationId v = set[i];
    Work& w = work[i];
    if (const EdgeConnectionSet* loop = g_.connections(v, v)) {
      w.loop = close_loop(*loop, tt, v, true);
      w.has_loop = true;
    }
    for (const ShortcutPair& p : stored_[v]) {
      if (!remaining_[p.first] || !remaining_[p.second]) continue;
      EdgeConnectionSet c = candidates(g_, p.first, v, p.second, w.loop.closed);
      if (!c.empty()) w.shortcuts.push_back({p, std::move(c)});
    }
  });

  std::vector<StationId> loops, sources, targets;
  for (size_t i = 0; i < set.size(); ++i) {
    const StationId v = set[i];
    Work& w = work[i];
    if (w.has_loop && !w.loop.levels.empty()) {
      const uint32_t offset = static_cast<uint32_t>(g_.snapshots().size());
      for (const EdgeConnectionSet& level : w.loop.levels) {
        g_.add_snapshot(remap_snapshots(level, offset, tt, v));
      }
      g_.set_edge(v, v, remap_snapshots(w.loop.closed, offset, tt, v));
    }
    for (auto& [pair, conns] : w.shortcuts) {
      ++shortcuts_;
      if (g_.merge_edge(pair.first, pair.second, conns)) {
        if (pair.first == pair.second) loops.push_back(pair.first);
        sources.push_back(pair.first);
        targets.push_back(pair.second);
      }
    }
    std::vector<StationId> neighbours = out_remaining(v);
    auto ins = in_remaining(v);
    neighbours.insert(neighbours.end(), ins.begin(), ins.end());
    for (StationId x : neighbours) {
      depth_[x] = std::max(depth_[x], depth_[v] + 1);
      auto& list = stored_[x];
      list.erase(std::remove_if(list.begin(), list.end(),
                                [&](const ShortcutPair& p) {
                                  return p.first == v || p.second == v;
                                }),
                 list.end());
    }
    stored_[v].clear();
    contracted_[v] = 1;
    remaining_[v] = 0;
    --remaining_count_;
    order_.push_back(v);
  }
  // Sources/targets that were contracted in this round need no refresh.
  auto drop_contracted = [&](std::vector<StationId>& xs) {
    xs.erase(std::remove_if(xs.begin(), xs.end(),
                            [&](StationId s) { return !remaining_[s]; }),
             xs.end());
  };
  drop_contracted(loops);
  drop_contracted(sources);
  drop_contracted(targets);
  refresh(std::move(loops), std::move(sources), std::move(targets));
}

void Contractor::contract_node(StationId v) {
  contract_round(std::span<const StationId>(&v, 1));
}

Hierarchy Contractor::finish() && {
  if (remaining_count_ != 0) {
    throw std::logic_error("finish: contraction incomplete");
  }
  Hierarchy h;
  h.rank.assign(g_.num_nodes(), 0);
  for (size_t i = 0; i < order_.size(); ++i) {
    h.rank[order_[i]] = static_cast<uint32_t>(i);
  }
  h.graph = std::move(g_);
  h.params = params_;
  h.shortcuts = shortcuts_;
  return h;
}

Hierarchy build_hierarchy(StationGraph g, const ContractionParams& p,
                          const RoundObserver& observer) {
  Contractor c(std::move(g), p);
  c.precompute();
  std::vector<double> prio(c.graph().num_nodes(), 0.0);
  size_t round = 0;
  while (c.remaining_count() > 0) {
    for (StationId v = 0; v < prio.size(); ++v) {
      if (!c.contracted(v)) prio[v] = c.priority(v);
    }
    auto set = select_contraction_set(c.graph(), c.remaining(), prio);
    c.contract_round(set);
    ++round;
    if (observer) observer(c, round);
  }
  return std::move(c).finish();
}

}  // namespace sgch
