#pragma once

#include <string>

#include "shipsched/instance.hpp"
#include "shipsched/schedule.hpp"

namespace shipsched {

/// One row per berth time window, one bar per vessel loading interval
/// [t, t + loading time]. The schedule must already have passed
/// check_schedule; overlapping bars in one window abort the render.
std::string render_gantt_svg(const Instance& inst, const Schedule& schedule);
std::string render_gantt_text(const Instance& inst, const Schedule& schedule);

}  // namespace shipsched
