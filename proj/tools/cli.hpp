#pragma once

#include <ostream>

namespace sampdisc::cli {

/// Runs the command line. Exit codes: 0 success, 1 error or usage problem,
/// 2 certificate failed verification.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sampdisc::cli
