#pragma once

#include <exception>
#include <iosfwd>
#include <string>

#include "spreadmm/config.hpp"

namespace spreadmm {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitMgfDomain = 4,
    kExitNumerics = 5,
};

int exit_code_for(const std::exception& e);

// Six significant digits.
std::string format_number(double v);

int cmd_price(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_table(int table_id, const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_mc(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_moments(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace spreadmm
