#pragma once

#include <string>
#include <vector>

namespace qst {

/// Entry point behind main(): parses the subcommand and options, runs the
/// pipeline. Exit codes: 0 success, 1 runtime or validation failure,
/// 2 configuration/usage error.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace qst
