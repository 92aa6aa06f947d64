#pragma once

#include <string>
#include <vector>

#include "fbp/config.hpp"

namespace fbp {

// dispatches one subcommand; writes artifacts into rc.out_dir. returns 0 on
// success, 3 when a check command's property fails. solver and config
// problems surface as the matching exceptions for the caller to map
int run_command(const std::string& cmd, const RunConfig& rc, bool verbose);

const std::vector<std::string>& command_names();

}  // namespace fbp
