#include "sgch/synthetic.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgch {

namespace {

using Rng = std::mt19937_64;

Minutes uniform(Rng& rng, Minutes lo, Minutes hi) {
  return std::uniform_int_distribution<Minutes>(lo, hi)(rng);
}

// Runs `count` trains along `route` in one direction. Departures are spread
// over the day with jitter; run and dwell times are fixed per route so
// trains of a line behave alike.
void add_line(TimetableBuilder& b, Rng& rng, const std::vector<StationId>& route,
              const std::vector<Minutes>& run, const std::vector<Minutes>& dwell,
              uint32_t count, const std::string& name) {
  const Minutes headway = kMinutesPerDay / static_cast<Minutes>(count);
  const Minutes offset = uniform(rng, 0, headway - 1);
  for (uint32_t k = 0; k < count; ++k) {
    Minutes t = (offset + static_cast<Minutes>(k) * headway +
                 uniform(rng, 0, std::max<Minutes>(0, headway / 4))) %
                kMinutesPerDay;
    std::vector<TrainStop> stops(route.size());
    for (size_t i = 0; i < route.size(); ++i) {
      stops[i].station = route[i];
      if (i > 0) {
        t = (t + run[i - 1]) % kMinutesPerDay;
        stops[i].arrival = t;
      }
      if (i + 1 < route.size()) {
        if (i > 0) t = (t + dwell[i]) % kMinutesPerDay;
        stops[i].departure = t;
      }
    }
    b.add_train(stops, name + "." + std::to_string(k));
  }
}

void add_route(TimetableBuilder& b, Rng& rng, std::vector<StationId> route,
               Minutes run_lo, Minutes run_hi, uint32_t trains,
               const std::string& name) {
  std::vector<Minutes> run(route.size() - 1), dwell(route.size(), 0);
  for (Minutes& r : run) r = uniform(rng, run_lo, run_hi);
  for (size_t i = 1; i + 1 < route.size(); ++i) dwell[i] = uniform(rng, 0, 2);
  add_line(b, rng, route, run, dwell, trains, name + "f");
  std::reverse(route.begin(), route.end());
  std::reverse(run.begin(), run.end());
  std::reverse(dwell.begin(), dwell.end());
  add_line(b, rng, route, run, dwell, trains, name + "r");
}

}  // namespace

Timetable generate_synthetic(const SyntheticSpec& spec) {
  if (spec.stations == 0) throw std::invalid_argument("stations must be positive");
  if (spec.clusters == 0 || spec.clusters > spec.stations) {
    throw std::invalid_argument("clusters must be in [1, stations]");
  }
  if (spec.trains_per_route == 0) {
    throw std::invalid_argument("trains per route must be positive");
  }
  Rng rng(spec.seed);
  TimetableBuilder b;
  for (uint32_t s = 0; s < spec.stations; ++s) {
    b.add_station("S" + std::to_string(s), uniform(rng, 2, 10));
  }
  if (spec.stations == 1) return std::move(b).build();

  // Station s belongs to cluster s % clusters; the lowest id is the hub.
  std::vector<std::vector<StationId>> members(spec.clusters);
  for (StationId s = 0; s < spec.stations; ++s) {
    members[s % spec.clusters].push_back(s);
  }
  std::vector<StationId> hubs;
  for (uint32_t c = 0; c < spec.clusters; ++c) {
    hubs.push_back(members[c].front());
    std::vector<StationId> rest(members[c].begin() + 1, members[c].end());
    std::shuffle(rest.begin(), rest.end(), rng);
    // Local lines of 2..6 stations hanging off the hub, sometimes passing
    // through it.
    size_t i = 0;
    int line = 0;
    while (i < rest.size()) {
      size_t len = std::min<size_t>(rest.size() - i, uniform(rng, 2, 6));
      std::vector<StationId> route(rest.begin() + i, rest.begin() + i + len);
      route.insert(route.begin() + uniform(rng, 0, static_cast<Minutes>(len)),
                   hubs.back());
      add_route(b, rng, route, 2, 12, spec.trains_per_route,
                "L" + std::to_string(c) + "_" + std::to_string(line++));
      i += len;
    }
    // A cross line between two non-hub stations adds local alternatives.
    if (rest.size() >= 4) {
      std::vector<StationId> cross{rest[0], rest[rest.size() / 2],
                                   rest.back()};
      add_route(b, rng, cross, 4, 15, std::max(1u, spec.trains_per_route / 2),
                "X" + std::to_string(c));
    }
  }
  if (hubs.size() >= 2) {
    // Ring of long-distance lines over consecutive hub triples.
    const size_t h = hubs.size();
    for (size_t k = 0; k < h; k += 2) {
      std::vector<StationId> route{hubs[k], hubs[(k + 1) % h]};
      if (h > 2) route.push_back(hubs[(k + 2) % h]);
      add_route(b, rng, route, 20, 90, spec.trains_per_route,
                "B" + std::to_string(k));
    }
    for (size_t k = 0; k < h; ++k) {
      for (uint32_t d = 0; d < spec.backbone_degree; ++d) {
        StationId other = hubs[uniform(rng, 0, static_cast<Minutes>(h) - 1)];
        if (other == hubs[k]) continue;
        add_route(b, rng, {hubs[k], other}, 30, 150,
                  std::max(1u, spec.trains_per_route / 2),
                  "C" + std::to_string(k) + "_" + std::to_string(d));
      }
    }
  }
  return std::move(b).build();
}

}  // namespace sgch
