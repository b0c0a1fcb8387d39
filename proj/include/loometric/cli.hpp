#pragma once

#include <ostream>
#include <span>
#include <string>

namespace loometric {

/// Entry point of the command-line tool. `args` excludes the program name.
/// Exit codes: 0 success, 1 structured negative result, 2 usage or I/O error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace loometric
