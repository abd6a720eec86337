#pragma once

#include <string>
#include <vector>

#include "meso/milp.hpp"

namespace meso::mps {

// Fixed-format MPS with two documented liberties:
//  - numeric fields use shortest round-trip notation and may run past the
//    classic 12-character field (tokens stay whitespace-separated);
//  - the objective constant is carried as a negated RHS entry on the
//    objective row.
// Names longer than 8 characters (or blank/duplicate/whitespace) force all
// rows and columns to be renamed R%07d/C%07d; the original names are then
// recorded in a "<path>.map" sidecar which read() consults to restore them.
void write(const MilpProblem& p, const std::string& path,
           const std::string& problem_name = "MESO");

MilpProblem read(const std::string& path);

// Parses "name value" pairs (one per line, '#' comments allowed) against the
// problem's variable names. Unlisted variables default to zero.
std::vector<double> import_solution(const std::string& path, const MilpProblem& p);

} // namespace meso::mps
