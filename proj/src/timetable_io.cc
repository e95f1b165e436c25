#include "sgch/timetable_io.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace sgch {

namespace {

std::vector<std::string_view> split_ws(std::string_view line, size_t max_parts) {
  std::vector<std::string_view> parts;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    if (parts.size() + 1 == max_parts) {
      size_t end = line.find_last_not_of(" \t\r");
      parts.push_back(line.substr(i, end + 1 - i));
      break;
    }
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    parts.push_back(line.substr(i, j - i));
    i = j;
  }
  return parts;
}

template <typename T>
std::optional<T> parse_int(std::string_view s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<Minutes> parse_clock(std::string_view s) {
  size_t colon = s.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto h = parse_int<int>(s.substr(0, colon));
  auto m = parse_int<int>(s.substr(colon + 1));
  if (!h || !m || s.size() - colon - 1 != 2 || *h < 0 || *h > 23 || *m < 0 ||
      *m > 59) {
    return std::nullopt;
  }
  return *h * 60 + *m;
}

Timetable parse_timetable(std::string_view text) {
  TimetableBuilder b;
  size_t stations = 0;
  std::set<std::string, std::less<>> train_ids;
  std::string train_name;
  size_t train_line = 0;
  std::vector<TrainStop> stops;
  bool in_train = false;

  auto flush = [&]() {
    if (!in_train) return;
    try {
      b.add_train(stops, train_name);
    } catch (const std::invalid_argument& e) {
      throw ParseError(train_line, "train " + train_name + ": " + e.what());
    }
    stops.clear();
    in_train = false;
  };

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto head = split_ws(line, 2);
    if (head.empty()) continue;
    std::string_view kw = head[0];
    if (kw == "STATION") {
      auto parts = split_ws(line, 4);
      if (parts.size() != 4) {
        throw ParseError(line_no, "expected STATION <id> <transfer> <name>");
      }
      auto id = parse_int<uint32_t>(parts[1]);
      auto transfer = parse_int<Minutes>(parts[2]);
      if (!id) throw ParseError(line_no, "bad station id");
      if (*id != stations) {
        throw ParseError(line_no, "station ids must be 0, 1, 2, ... in order");
      }
      if (!transfer || *transfer < 0) {
        throw ParseError(line_no, "bad transfer time");
      }
      if (in_train) {
        throw ParseError(line_no, "STATION inside a train block");
      }
      b.add_station(std::string(parts[3]), *transfer);
      ++stations;
    } else if (kw == "TRAIN") {
      auto parts = split_ws(line, 3);
      if (parts.size() != 2) throw ParseError(line_no, "expected TRAIN <id>");
      flush();
      train_name = std::string(parts[1]);
      if (!train_ids.insert(train_name).second) {
        throw ParseError(line_no, "duplicate train id " + train_name);
      }
      train_line = line_no;
      in_train = true;
    } else if (kw == "STOP") {
      auto parts = split_ws(line, 5);
      if (parts.size() != 4) {
        throw ParseError(line_no, "expected STOP <station> <arr|-> <dep|->");
      }
      if (!in_train) throw ParseError(line_no, "STOP outside a train block");
      auto st = parse_int<uint32_t>(parts[1]);
      if (!st || *st >= stations) {
        throw ParseError(line_no, "unknown station " + std::string(parts[1]));
      }
      TrainStop s;
      s.station = *st;
      for (int k = 0; k < 2; ++k) {
        std::string_view tok = parts[2 + k];
        if (tok == "-") continue;
        auto t = parse_clock(tok);
        if (!t) throw ParseError(line_no, "bad time " + std::string(tok));
        (k == 0 ? s.arrival : s.departure) = *t;
      }
      stops.push_back(s);
    } else {
      throw ParseError(line_no, "unknown directive " + std::string(kw));
    }
  }
  flush();
  return std::move(b).build();
}

Timetable load_timetable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_timetable(ss.str());
}

std::string print_timetable(const Timetable& tt) {
  std::ostringstream out;
  for (const Station& s : tt.stations()) {
    out << "STATION " << s.id << ' ' << s.transfer << ' ' << s.name << '\n';
  }
  for (const Train& t : tt.trains()) {
    out << "TRAIN " << t.name << '\n';
    for (StopEventId z : t.stops) {
      const StopEvent& e = tt.stop_event(z);
      out << "STOP " << e.station << ' '
          << (e.arrival ? format_clock(*e.arrival) : "-") << ' '
          << (e.departure ? format_clock(*e.departure) : "-") << '\n';
    }
  }
  return out.str();
}

}  // namespace sgch
