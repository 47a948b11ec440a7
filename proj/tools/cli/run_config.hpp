#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace esn::cli {

enum class Command { Eval, Bounds, Tail, Constants, Rates, Simulate };
enum class Format { Csv, Json };

const char* to_string(Command c);

struct RunConfig {
    Command command = Command::Eval;
    double alpha = 0;
    double tau = 0;
    double x_min = 0;
    double x_max = 0;
    int x_steps = 1;
    std::vector<double> ln_n_list;
    int precision_digits = 34;
    std::uint64_t seed = 1;
    std::int64_t block_size = 10000;
    std::int64_t replicates = 1000;
    bool closed_normalization = false;
    Format output_format = Format::Csv;
    std::optional<std::string> output_path;

    std::vector<double> x_grid() const;
};

// Thrown by parse_args when the process should stop: usage problems (2),
// regime violations (3), or --help (0, message goes to stdout).
struct cli_exit : std::runtime_error {
    cli_exit(int code, const std::string& message) : std::runtime_error(message), code(code) {}
    int code;
};

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_regime = 3;
constexpr int exit_numeric = 4;

RunConfig parse_args(int argc, const char* const* argv);

} // namespace esn::cli
