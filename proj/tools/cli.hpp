#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qrep::cli {

/// Runs one invocation (arguments without the program name). Reports go to
/// `out`, diagnostics to `err`. Returns the exit code:
/// 0 all properties hold / IsCover / Unknown (with a warning line),
/// 1 a property fails / NotCover / a precondition fails,
/// 2 invalid input or refusal.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrep::cli
