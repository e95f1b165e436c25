#pragma once

#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "sgch/ch_query.h"
#include "sgch/timetable_io.h"

namespace sgch::testing {

std::shared_ptr<const Timetable> parse_shared(std::string_view text);
std::string data_path(const std::string& name);

struct RandomSpec {
  uint32_t stations = 8;
  uint32_t trains = 20;
  uint32_t max_stops = 6;
  Minutes max_leg = 200;
  Minutes max_dwell = 6;
  Minutes max_transfer = 8;
  /// Chance that a train revisits a station it already served.
  double revisit = 0.15;
};

/// Random daily trains over random station walks; long legs and late
/// departures make midnight wraps common.
Timetable random_timetable(uint64_t seed, const RandomSpec& spec = {});

/// Short legs, tiny dwells and frequent revisits: trains circle through
/// the same stations within a few minutes, so contraction has to close
/// loops under repeated traversal.
RandomSpec loopy_spec();

/// Random spec within the limits used by the oracle suites.
RandomSpec random_small_spec(std::mt19937_64& rng);

}  // namespace sgch::testing
