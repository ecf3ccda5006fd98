#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "iwalab/problem.hpp"

namespace iwalab {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { Prepare, Char, Euler, Akashi, FindTwist, Selftest };

std::optional<Command> parse_command(std::string_view name);
const char* to_string(Command command) noexcept;

struct RunOptions {
    std::optional<int> precision;  // overrides the problem's N
    int max_precision = PadicContext::kMaxPrecision;
    std::optional<int> budget;  // overrides the problem's budget
};

/// Exit codes of the command-line tool.
enum ExitCode { kExitDecided = 0, kExitError = 1, kExitIndeterminate = 2 };

struct RunReport {
    std::string json;   // machine-readable block
    std::string table;  // human-readable summary
    int exit_code = kExitDecided;
};

/// Executes one command on a parsed problem. `input_text` is hashed into the
/// report. Throws CommandMismatch when the command does not apply to the stanza.
RunReport run(const Problem& problem, Command command, const RunOptions& options, const std::string& input_text);

/// Runs the built-in agreement corpus (no problem file needed).
RunReport run_selftest(const RunOptions& options);

std::string sha256_hex(const std::string& data);

/// The report with its "timing" member removed, for byte comparisons.
std::string strip_timing(const std::string& report_json);

}  // namespace iwalab
