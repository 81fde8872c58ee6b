#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace probound::cli {

// Runs one invocation; args exclude the program name. Exit status: 0 on
// success/Feasible, 1 Infeasible (or a failed validity check), 2 input
// error, 3 resource guard.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace probound::cli
