#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnet {

// Command-line driver. args excludes the program name. Returns 0 on
// success, 1 when an evaluation ran but recorded SUT contract violations,
// 2 on input/configuration errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnet
