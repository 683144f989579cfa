#pragma once

namespace rlqas {

// Command-line front end. Exit codes: 0 ok, 2 usage, 3 I/O failure,
// 4 numeric failure, 5 malformed input.
int run_cli(int argc, const char* const* argv);

}  // namespace rlqas
