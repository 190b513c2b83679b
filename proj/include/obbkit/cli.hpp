#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace obbkit::cli {

// Runs one subcommand. `args` excludes the program name. Returns 0 on
// success, 1 on a usage error (usage text goes to `err`) and 2 on bad input
// data.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace obbkit::cli
