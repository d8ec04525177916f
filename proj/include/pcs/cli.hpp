#ifndef PCS_CLI_HPP
#define PCS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pcs {

/// Entry point behind the pcsamp binary; also callable in-process from
/// tests. Data goes to files or `out`; diagnostics and the run manifest
/// go to `err`. Exit codes: 0 success, 1 input error, 2 extraction
/// finished with per-file errors, 3 interaction cap exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pcs

#endif
