// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netclust {

/// Command dispatcher behind the netclust binary; separated so tests can run
/// commands in-process. `args` excludes the program name. Returns the
/// process exit code: 0 success (check-aep: partition is an AEP), 1
/// check-aep verdict "not an AEP", 2 any error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace netclust
