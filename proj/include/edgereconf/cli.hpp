#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgereconf {

/// Entry point of the `edgereconf` tool. Subcommands: scenario, run, sweep,
/// solve, report. Returns 0 iff the operation completed and every audit
/// passed; 1 when an audit or cross-check failed; 2 on usage or input errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace edgereconf
