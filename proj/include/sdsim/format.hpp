#pragma once

#include <string>

namespace sdsim {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace sdsim
