#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "sgch/timetable.h"

namespace sgch {

class ParseError : public std::runtime_error {
 public:
  ParseError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Text format, one directive per line, '#' starts a comment:
//   STATION <id> <transfer-minutes> <name>
//   TRAIN <id>
//   STOP <station-id> <arr hh:mm|-> <dep hh:mm|->
// Station ids are 0, 1, 2, ... in declaration order.
Timetable parse_timetable(std::string_view text);
Timetable load_timetable(const std::string& path);

/// Canonical text form; parse_timetable(print_timetable(tt)) == tt.
std::string print_timetable(const Timetable& tt);

/// Parses hh:mm into a minute of day; nullopt on malformed input.
std::optional<Minutes> parse_clock(std::string_view s);

}  // namespace sgch
