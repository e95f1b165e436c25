// Command-line front end: build, contract, query, gen, bench, selftest.

#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sgch/benchmark.h"
#include "sgch/ch_query.h"
#include "sgch/examples.h"
#include "sgch/hierarchy_io.h"
#include "sgch/synthetic.h"
#include "sgch/timetable_io.h"

using namespace sgch;

namespace {

bool is_hierarchy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[5] = {};
  in.read(magic, sizeof magic);
  return in && std::memcmp(magic, "SGCH1", 5) == 0;
}

// Either input kind yields the baseline graph; the hierarchy is built on
// demand when a timetable is given.
struct Loaded {
  std::shared_ptr<const Timetable> tt;
  std::optional<StationGraph> graph;
  std::optional<Hierarchy> hierarchy;

  const StationGraph& base() {
    if (!graph) graph = build_station_graph(tt);
    return *graph;
  }
  const Hierarchy& ch(const ContractionParams& p) {
    if (!hierarchy) hierarchy = build_hierarchy(base(), p);
    return *hierarchy;
  }
};

Loaded load_input(const std::string& path) {
  Loaded l;
  if (is_hierarchy_file(path)) {
    l.hierarchy = load_hierarchy(path);
    l.tt = l.hierarchy->graph.timetable_ptr();
  } else {
    l.tt = std::make_shared<const Timetable>(load_timetable(path));
  }
  return l;
}

StationId resolve_station(const Timetable& tt, const std::string& token) {
  for (const Station& s : tt.stations()) {
    if (s.name == token) return s.id;
  }
  try {
    size_t used = 0;
    unsigned long id = std::stoul(token, &used);
    if (used == token.size() && id < tt.num_stations()) {
      return static_cast<StationId>(id);
    }
  } catch (const std::exception&) {
  }
  throw std::runtime_error("unknown station " + token);
}

void print_legs(const Timetable& tt, std::span<const TimedLeg> legs) {
  for (const TimedLeg& l : legs) {
    const ElementaryConnection& c = tt.elementary()[l.elementary];
    const StopEvent& z = tt.stop_event(c.z1);
    std::cout << "  train " << tt.trains()[z.train].name << "  "
              << tt.station(c.s1).name << " " << format_absolute(l.dep)
              << " -> " << tt.station(c.s2).name << " "
              << format_absolute(l.arr) << "\n";
  }
}

int cmd_build(const std::string& input) {
  auto tt = std::make_shared<const Timetable>(load_timetable(input));
  StationGraph g = build_station_graph(tt);
  std::cout << "stations " << tt->num_stations() << "\n"
            << "trains " << tt->trains().size() << "\n"
            << "elementary_connections " << tt->elementary().size() << "\n"
            << "edges " << g.num_edges() << "\n"
            << "edge_connections " << g.total_connections() << "\n";
  return 0;
}

int cmd_contract(const std::string& input, const std::string& output,
                 const ContractionParams& p) {
  auto tt = std::make_shared<const Timetable>(load_timetable(input));
  StationGraph g = build_station_graph(tt);
  const size_t edges = g.num_edges();
  Hierarchy h = build_hierarchy(std::move(g), p, [](const Contractor& c,
                                                    size_t round) {
    std::cerr << "round " << round << ": " << c.remaining_count()
              << " stations left\n";
  });
  save_hierarchy(h, output);
  std::cout << "edges " << edges << " -> " << h.graph.num_edges() << "\n"
            << "shortcuts " << h.shortcuts << "\n"
            << "edge_connections " << h.graph.total_connections() << "\n";
  return 0;
}

int cmd_query_time(const std::string& input, const std::string& from,
                   const std::string& to, const std::string& at,
                   const std::string& engine, const ContractionParams& p) {
  Loaded l = load_input(input);
  const StationId a = resolve_station(*l.tt, from);
  const StationId b = resolve_station(*l.tt, to);
  auto t0 = parse_clock(at);
  if (!t0) throw std::runtime_error("bad time " + at + " (expected hh:mm)");
  TimeQueryResult r;
  std::vector<TimedLeg> legs;
  if (engine == "ch") {
    const Hierarchy& h = l.ch(p);
    r = ch_time_query(h, a, b, *t0).result;
    legs = extract_journey(h.graph, r);
  } else {
    r = time_query(l.base(), a, b, *t0);
    legs = extract_journey(l.base(), r);
  }
  if (!r.reachable) {
    std::cout << "unreachable\n";
    return 0;
  }
  std::cout << "arrival " << format_absolute(r.arrival) << "\n"
            << "delete_mins " << r.delete_mins << "\n";
  print_legs(*l.tt, legs);
  return 0;
}

int cmd_query_profile(const std::string& input, const std::string& from,
                      const std::string& to, const std::string& engine,
                      bool show_legs, const ContractionParams& p) {
  Loaded l = load_input(input);
  const StationId a = resolve_station(*l.tt, from);
  const StationId b = resolve_station(*l.tt, to);
  ProfileQueryResult r;
  const StationGraph* g = nullptr;
  if (engine == "ch") {
    const Hierarchy& h = l.ch(p);
    r = ch_profile_query(h, a, b);
    g = &h.graph;
  } else {
    r = profile_query(l.base(), a, b);
    g = &l.base();
  }
  std::cout << "connections " << r.conns.size() << "\n"
            << "delete_mins " << r.delete_mins << "\n";
  for (const Connection& c : r.conns.connections()) {
    std::cout << format_clock(c.dep) << " -> " << format_absolute(c.arr)
              << "  transfers " << c.transfers << "\n";
    if (show_legs) print_legs(*l.tt, extract_journey(*g, r, c));
  }
  return 0;
}

int cmd_bench(const std::string& input, const SyntheticSpec& spec,
              const BenchmarkOptions& opt, const ContractionParams& p) {
  Loaded l;
  if (input.empty()) {
    l.tt = std::make_shared<const Timetable>(generate_synthetic(spec));
  } else {
    l = load_input(input);
  }
  const Hierarchy& h = l.ch(p);
  try {
    BenchmarkReport rep = run_benchmark(l.base(), h, opt);
    std::cout << rep.csv();
  } catch (const BenchmarkMismatch& e) {
    std::cerr << "cross-check failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// The worked examples, checked end to end.
int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "ok    " : "FAIL  ") << what << "\n";
    if (!ok) ++failures;
  };

  auto overnight = std::make_shared<const Timetable>(
      parse_timetable(examples::kOvernight));
  StationGraph g1 = build_station_graph(overnight);
  Hierarchy h1 = build_hierarchy(g1, {});
  const Minutes t1 = 23 * 60 + 5;
  TimeQueryResult r1 = time_query(g1, 0, 4, t1);
  check(r1.arrival == 29 * 60, "overnight A->E at 23:05 arrives " +
                                   format_absolute(r1.arrival));
  check(ch_time_query(h1, 0, 4, t1).result.arrival == 29 * 60,
        "overnight A->E on the hierarchy");
  auto legs = extract_journey(g1, r1);
  check(!legs.empty() && check_consistency(legs, *overnight).consistent,
        "overnight journey is consistent");
  if (!legs.empty()) {
    // Swap the 04:00 train for the 03:00 one, which leaves too early.
    auto swapped = legs;
    swapped.back() = {3, 27 * 60, 28 * 60};
    check(!check_consistency(swapped, *overnight).consistent,
          "catching the 03:00 train at C is rejected");
  }

  auto loop = std::make_shared<const Timetable>(parse_timetable(examples::kLoop));
  StationGraph g3 = build_station_graph(loop);
  check(time_query(g3, 0, 3, 12 * 60).arrival == 12 * 60 + 4,
        "loop network A->D at 12:00 arrives 12:04");
  Contractor c(g3, {});
  c.precompute();
  c.contract_node(2);
  check(c.graph().find_edge(1, 1) != kNoIndex,
        "contracting C adds a loop at B");
  Hierarchy h3 = build_hierarchy(g3, {});
  check(ch_time_query(h3, 0, 3, 12 * 60).result.arrival == 12 * 60 + 4,
        "loop network A->D on the hierarchy");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Station graph contraction hierarchies for timetables"};
  app.require_subcommand(1);

  ContractionParams params;
  auto add_contraction_options = [&](CLI::App* cmd) {
    cmd->add_option("--hop-limit", params.hop_limit, "Witness search hop limit")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--transfer-limit", params.transfer_limit,
                    "Witness search transfer limit");
    cmd->add_option("--threads", params.threads, "Worker threads")
        ->check(CLI::PositiveNumber);
  };

  std::string input, output;
  auto* build = app.add_subcommand("build", "Parse a timetable and build the station graph");
  build->add_option("timetable", input, "Timetable file")->required();

  auto* contract = app.add_subcommand("contract", "Build a contraction hierarchy");
  contract->add_option("timetable", input, "Timetable file")->required();
  contract->add_option("-o,--output", output, "Hierarchy file")->required();
  add_contraction_options(contract);

  auto* query = app.add_subcommand("query", "Run a query");
  query->require_subcommand(1);
  std::string from, to, at, engine = "dijkstra";
  bool show_legs = false;
  auto* qtime = query->add_subcommand("time", "Earliest arrival query");
  auto* qprof = query->add_subcommand("profile", "Profile query");
  for (auto* q : {qtime, qprof}) {
    q->add_option("input", input, "Timetable or hierarchy file")->required();
    q->add_option("from", from, "Source station (id or name)")->required();
    q->add_option("to", to, "Target station (id or name)")->required();
    if (q == qtime) q->add_option("t0", at, "Departure hh:mm")->required();
    q->add_option("--engine", engine)->check(CLI::IsMember({"dijkstra", "ch"}));
    add_contraction_options(q);
  }
  qprof->add_flag("--legs", show_legs, "Print the legs of every connection");

  SyntheticSpec spec;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic timetable");
  auto* bench = app.add_subcommand("bench", "Compare baseline and CH queries");
  for (auto* cmd : {gen, bench}) {
    cmd->add_option("--stations", spec.stations)->check(CLI::PositiveNumber);
    cmd->add_option("--clusters", spec.clusters)->check(CLI::PositiveNumber);
    cmd->add_option("--backbone-degree", spec.backbone_degree);
    cmd->add_option("--trains-per-route", spec.trains_per_route)
        ->check(CLI::PositiveNumber);
  }
  gen->add_option("--seed", spec.seed);
  gen->add_option("-o,--output", output, "Output file (default stdout)");

  BenchmarkOptions bopt;
  bench->add_option("input", input, "Timetable or hierarchy file (default: synthetic)");
  bench->add_option("--queries", bopt.time_queries, "Time queries");
  bench->add_option("--profile-queries", bopt.profile_queries, "Profile queries");
  bench->add_option("--seed", bopt.seed, "Query and network seed");
  add_contraction_options(bench);

  auto* selftest = app.add_subcommand("selftest", "Check the worked examples");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(input);
    if (*contract) return cmd_contract(input, output, params);
    if (*qtime) return cmd_query_time(input, from, to, at, engine, params);
    if (*qprof) {
      return cmd_query_profile(input, from, to, engine, show_legs, params);
    }
    if (*gen) {
      std::string text = print_timetable(generate_synthetic(spec));
      if (output.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(output);
        out << text;
        if (!out) throw std::runtime_error("cannot write " + output);
      }
      return 0;
    }
    if (*bench) {
      if (bench->count("--seed")) spec.seed = bopt.seed;
      return cmd_bench(input, spec, bopt, params);
    }
    if (*selftest) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
