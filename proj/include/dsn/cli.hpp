#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dsn/error.hpp"

namespace dsn {

/// 0 success, 1 infeasible or not a member, 2 parse error, 3 bad arguments,
/// 4 size guard.
int exit_code(ErrorKind kind);

/// Runs one subcommand; args exclude the program name. JSON goes to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsn
