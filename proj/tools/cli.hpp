#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace octaframe::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kNotConverged = 2,
    kIo = 3,
    kMesh = 4,
    kSolver = 5,
};

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace octaframe::cli
