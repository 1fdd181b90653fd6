#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sbss {

/// Entry point of the `sbss` command: ingest, suggest, metrics, run.
/// Returns the process exit code (0 ok, 2 usage/validation, 3 numeric,
/// 4 io). argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same with the arguments as strings (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sbss
