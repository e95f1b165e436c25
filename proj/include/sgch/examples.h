#pragma once

#include <string_view>

namespace sgch::examples {

// Overnight journey A -> E with one transfer at C (transfer time 5). Train
// 2 leaves C at 03:00 and cannot be caught from the 02:57 arrival, so the
// earliest arrival at E for a 23:05 departure is 1+05:00.
// Elementary connections: 0 A-B, 1 B-C, 2 C-D, 3 C-E (03:00), 4 C-E (04:00).
inline constexpr std::string_view kOvernight = R"(STATION 0 5 A
STATION 1 5 B
STATION 2 5 C
STATION 3 5 D
STATION 4 5 E
TRAIN 1
STOP 0 - 23:05
STOP 1 00:55 01:02
STOP 2 02:57 03:00
STOP 3 04:20 -
TRAIN 2
STOP 2 - 03:00
STOP 4 04:00 -
TRAIN 3
STOP 2 - 04:00
STOP 4 05:00 -
)";

// A train visiting B twice. Contracting C leaves a loop B -> B; the
// earliest arrival at D for a 12:00 departure from A is 12:04.
inline constexpr std::string_view kLoop = R"(STATION 0 0 A
STATION 1 5 B
STATION 2 0 C
STATION 3 0 D
TRAIN 1
STOP 0 - 12:00
STOP 1 12:01 12:01
STOP 2 12:02 12:02
STOP 1 12:03 12:03
STOP 3 12:04 -
)";

}  // namespace sgch::examples
