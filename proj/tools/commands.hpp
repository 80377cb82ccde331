#pragma once

#include <string>
#include <vector>

#include "options.hpp"

namespace z2lgt::cli {

// Exit codes: 0 success, 2 invalid configuration, 3 verification failure,
// 4 capacity exceeded (the message names the required budget).
enum ExitCode { kOk = 0, kBadConfig = 2, kCheckFailed = 3, kCapacity = 4 };

std::vector<std::string> command_names();

// Runs the named command with the given options; writes the CSV to
// opts["out"] (default "<command>.csv").
int run_command(const std::string& name, Options& opts);

}  // namespace z2lgt::cli
