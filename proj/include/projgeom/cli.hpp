#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace projgeom::cli {

/// Exit codes: 0 success, 1 demo assertion failed, 2 invalid input or usage,
/// 3 numerical failure.
int run(int argc, char** argv);

/// Same, with explicit arguments (argv[0] excluded) and streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace projgeom::cli
