#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sgch/contraction.h"

namespace sgch {

struct BenchQuery {
  StationId a = 0;
  StationId b = 0;
  Minutes t0 = 0;

  friend bool operator==(const BenchQuery&, const BenchQuery&) = default;
};

/// Uniform random pairs (a != b when possible) and departure minutes.
std::vector<BenchQuery> generate_queries(size_t stations, size_t count,
                                         uint64_t seed);

struct BenchmarkRow {
  std::string engine;
  std::string kind;
  size_t queries = 0;
  double delete_mins_mean = 0;
  double time_us_mean = 0;
  /// Mean baseline time over mean engine time for the same kind.
  double speedup = 1.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;

  const BenchmarkRow* find(const std::string& engine,
                           const std::string& kind) const;
  std::string csv() const;
};

/// Thrown when an engine disagrees with the baseline.
class BenchmarkMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchmarkOptions {
  size_t time_queries = 1000;
  /// Profile queries use the first this many pairs of the query set.
  size_t profile_queries = 100;
  uint64_t seed = 1;
};

/// Runs the seeded query set on the baseline and the CH engine and checks
/// every answer. `h` must have been built from the timetable of `g`.
BenchmarkReport run_benchmark(const StationGraph& g, const Hierarchy& h,
                              const BenchmarkOptions& opt);

/// Both profiles contain the same equivalence classes.
bool same_profile(const EdgeConnectionSet& x, const EdgeConnectionSet& y,
                  const Timetable& tt);

}  // namespace sgch
