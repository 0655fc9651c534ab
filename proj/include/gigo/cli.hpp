#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gigo::cli {

/// Entry point behind the `gigo` binary; exposed so the command surface can
/// be exercised in-process. Exit codes: 0 success, 1 invalid configuration,
/// 2 output I/O failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gigo::cli
