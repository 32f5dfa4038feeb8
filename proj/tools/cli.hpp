#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wrangle::tools {

/// Entry point of the `wrangle` executable. `args` excludes the program
/// name. Returns 0 when a recommendation was accepted (or a non-assistant
/// command succeeded), 2 for conflicting or exhausted constraints and 1 for
/// every other failure.
int cli_run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace wrangle::tools
