#pragma once

#include <string>

#include "sdsim/simulate.hpp"

namespace sdsim {

// Header `time,<names in definition order>`, one row per save point, values
// in shortest round-trip form, LF endings. Names containing a comma, quote,
// or newline are quoted per RFC 4180.
std::string csv_text(const RunResult& result);

// Writes csv_text to path; throws IoError naming the path on failure.
void write_csv(const RunResult& result, const std::string& path);

}  // namespace sdsim
