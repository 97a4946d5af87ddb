#pragma once

#include <string>
#include <vector>

namespace ccd {

// Numerical warning channel (quadrature limits, clipped windows, rim traces).
// Warnings accumulate until drained; the CLI summarizes them into the run log.
void log_warning(const std::string& msg);
std::vector<std::string> drain_warnings();
size_t warning_count();

}  // namespace ccd
