#pragma once

#include <string>
#include <vector>

namespace slope {

/// Runs the command-line front end on already-split arguments (without the
/// program name). Exit codes: 0 converged, 1 not converged, 2 usage/IO error.
int run_cli(const std::vector<std::string>& args);

}  // namespace slope
