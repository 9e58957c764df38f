#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conjoint/complex_matrix.hpp"

namespace conjoint::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationFailure = 1,
    kUsageError = 2,
    kNumericalFailure = 3,
};

enum class Format { Text, Csv };

inline constexpr std::uint64_t kDefaultSeed = 20240521;

struct Options {
    Format format = Format::Text;
    Tolerance tol{};
    std::optional<std::uint64_t> n;
    std::uint64_t seed = kDefaultSeed;
};

/// `out` goes to standard output, `err` to standard error. `out` is empty
/// whenever exit_code != 0.
struct CommandOutcome {
    int exit_code = kSuccess;
    std::string out;
    std::string err;
};

CommandOutcome cmd_validate(const std::string& path, const Options& opts = {});
CommandOutcome cmd_joint(const std::string& path, const Options& opts = {});
CommandOutcome cmd_predict(const std::string& path, const Options& opts = {});
CommandOutcome cmd_retrodict(const std::string& path, const Options& opts = {});
CommandOutcome cmd_compare(const std::string& path, const Options& opts = {});
CommandOutcome cmd_sample(const std::string& path, const Options& opts = {});

/// Parses argv (CLI11) and dispatches to a subcommand.
CommandOutcome run(const std::vector<std::string>& args);

}  // namespace conjoint::cli
