#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace backnet::cli {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kPlanInfeasible = 1,  // validate: the plan breaks at least one constraint
    kParseError = 2,
    kInfeasible = 3,
    kInternalError = 4,
    kCapExceeded = 5,
};

// args excludes the program name. Machine output goes to out, human text to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace backnet::cli
