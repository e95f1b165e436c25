#include "sgch/benchmark.h"

#include <chrono>
#include <random>
#include <sstream>

#include "sgch/ch_query.h"

namespace sgch {

std::vector<BenchQuery> generate_queries(size_t stations, size_t count,
                                         uint64_t seed) {
  std::vector<BenchQuery> qs;
  if (stations == 0) return qs;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<StationId> pick(
      0, static_cast<StationId>(stations - 1));
  std::uniform_int_distribution<Minutes> minute(0, kMinutesPerDay - 1);
  for (size_t i = 0; i < count; ++i) {
    BenchQuery q;
    q.a = pick(rng);
    do {
      q.b = pick(rng);
    } while (stations > 1 && q.b == q.a);
    q.t0 = minute(rng);
    qs.push_back(q);
  }
  return qs;
}

const BenchmarkRow* BenchmarkReport::find(const std::string& engine,
                                          const std::string& kind) const {
  for (const BenchmarkRow& r : rows) {
    if (r.engine == engine && r.kind == kind) return &r;
  }
  return nullptr;
}

std::string BenchmarkReport::csv() const {
  std::ostringstream out;
  out << "engine,kind,delete_mins_mean,time_us_mean,speedup\n";
  for (const BenchmarkRow& r : rows) {
    out << r.engine << ',' << r.kind << ',' << r.delete_mins_mean << ','
        << r.time_us_mean << ',' << r.speedup << '\n';
  }
  return out.str();
}

bool same_profile(const EdgeConnectionSet& x, const EdgeConnectionSet& y,
                  const Timetable& tt) {
  auto covered = [&](const EdgeConnectionSet& from,
                     const EdgeConnectionSet& in) {
    for (const Connection& p : from.connections()) {
      bool found = false;
      for (const Connection& q : in.connections()) {
        if (q.dep == p.dep && equivalent_connections(p, q, tt)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  return covered(x, y) && covered(y, x);
}

namespace {

struct Sample {
  double delete_mins = 0;
  double micros = 0;
};

template <typename F>
auto timed(Sample& s, F&& f) {
  auto t1 = std::chrono::steady_clock::now();
  auto r = f();
  auto t2 = std::chrono::steady_clock::now();
  s.micros += std::chrono::duration<double, std::micro>(t2 - t1).count();
  return r;
}

std::string describe(const char* kind, const BenchQuery& q) {
  std::ostringstream out;
  out << kind << " query " << q.a << " -> " << q.b;
  if (kind[0] == 't') out << " at " << format_clock(q.t0);
  return out.str();
}

void add_rows(BenchmarkReport& rep, const char* kind, size_t n,
              const Sample& base, const Sample& ch) {
  if (n == 0) return;
  const double d = static_cast<double>(n);
  BenchmarkRow b{"dijkstra", kind, n, base.delete_mins / d, base.micros / d, 1.0};
  BenchmarkRow c{"ch", kind, n, ch.delete_mins / d, ch.micros / d, 0.0};
  c.speedup = c.time_us_mean > 0 ? b.time_us_mean / c.time_us_mean : 0.0;
  rep.rows.push_back(b);
  rep.rows.push_back(c);
}

}  // namespace

BenchmarkReport run_benchmark(const StationGraph& g, const Hierarchy& h,
                              const BenchmarkOptions& opt) {
  if (h.graph.num_nodes() != g.num_nodes()) {
    throw std::invalid_argument("hierarchy does not match the graph");
  }
  const size_t total = std::max(opt.time_queries, opt.profile_queries);
  const auto qs = generate_queries(g.num_nodes(), total, opt.seed);
  BenchmarkReport rep;

  Sample base, ch;
  for (size_t i = 0; i < opt.time_queries; ++i) {
    const BenchQuery& q = qs[i];
    auto x = timed(base, [&] { return time_query(g, q.a, q.b, q.t0); });
    auto y = timed(ch, [&] { return ch_time_query(h, q.a, q.b, q.t0); });
    base.delete_mins += static_cast<double>(x.delete_mins);
    ch.delete_mins += static_cast<double>(y.result.delete_mins);
    if (x.arrival != y.result.arrival) {
      throw BenchmarkMismatch(describe("time", q) + ": baseline " +
                              format_absolute(x.arrival) + ", ch " +
                              format_absolute(y.result.arrival));
    }
  }
  add_rows(rep, "time", opt.time_queries, base, ch);

  base = ch = {};
  for (size_t i = 0; i < opt.profile_queries; ++i) {
    const BenchQuery& q = qs[i];
    auto x = timed(base, [&] { return profile_query(g, q.a, q.b); });
    auto y = timed(ch, [&] { return ch_profile_query(h, q.a, q.b); });
    base.delete_mins += static_cast<double>(x.delete_mins);
    ch.delete_mins += static_cast<double>(y.delete_mins);
    if (!same_profile(x.conns, y.conns, g.timetable())) {
      throw BenchmarkMismatch(describe("profile", q) + ": baseline " +
                              std::to_string(x.conns.size()) +
                              " connections, ch " +
                              std::to_string(y.conns.size()));
    }
  }
  add_rows(rep, "profile", opt.profile_queries, base, ch);
  return rep;
}

}  // namespace sgch
