#ifndef MGSCHED_MILP_MPS_HPP
#define MGSCHED_MILP_MPS_HPP

#include <string>

#include "mgsched/milp/model.hpp"

namespace mgsched::milp {

// Free-format MPS with OBJSENSE, ROWS/COLUMNS/RHS/RANGES/BOUNDS and
// INTORG/INTEND markers.  Deterministic bytes for a given model; every
// variable gets explicit bounds; numbers use %.17g so coefficients round-trip
// exactly.
std::string export_mps(const MilpModel& model);

// Parses the dialect written by export_mps plus the common extensions needed
// to read third-party files (RANGES, comment lines, BV/FR/MI/PL/FX bounds).
MilpModel import_mps(const std::string& text);

} // namespace mgsched::milp

#endif
