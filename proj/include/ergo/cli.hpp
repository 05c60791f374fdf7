#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ergo {

/// Entry point of the `ergo` binary; args excludes the program name.
/// Returns 0 on success, 1 on validation failure (including a failed
/// verdict under `verify`) and 2 on resource errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergo
