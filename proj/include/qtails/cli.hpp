#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qtails::cli {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 success, 1 a verified identity failed, 2 usage, domain or
/// builder errors.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace qtails::cli
