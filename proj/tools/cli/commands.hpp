#pragma once

#include <ostream>

#include "run_config.hpp"

namespace esn::cli {

// Runs one configured command, writing the table to `out` and diagnostics
// (plus the simulate summary in CSV mode) to `err`.  Returns the exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// parse_args followed by run, honouring --out.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace esn::cli
