#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shipsched/model.hpp"

namespace shipsched {

/// Fixed-format MPS with OBJSENSE/ROWS/COLUMNS/RHS/RANGES/BOUNDS
/// sections. Names are mangled deterministically to 8 characters
/// (C0000001/R0000001); values use shortest exact round-trip form, so
/// re-importing reproduces the coefficients bit for bit.
std::string export_mps(const MilpModel& model);

/// Mangled-name to descriptive-name table, one "short long" pair per line.
std::string export_name_table(const MilpModel& model);

/// Parse an MPS document produced by export_mps (or a compatible
/// whitespace-delimited file). The result carries no network metadata:
/// it can be solved and re-exported, not schedule-extracted.
MilpModel import_mps(const std::string& text);

/// Read a solution file of "name value" lines (mangled column names).
/// Unlisted variables default to zero; unknown or duplicate names are
/// errors.
std::vector<double> import_solution(const std::string& text, const MilpModel& model);

/// Order-independent structural checksum over bounds, integrality,
/// objective and rows (exact double bit patterns).
std::uint64_t model_checksum(const MilpModel& model);

}  // namespace shipsched
