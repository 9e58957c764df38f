#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conjoint/experiment.hpp"

namespace conjoint {

inline constexpr int kFormatVersion = 1;

struct ScenarioDocument {
    int format_version = kFormatVersion;
    std::string name;
    std::string description;
    Scenario scenario;

    friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    Severity severity = Severity::Error;
    std::string path;  ///< dotted field path, "" for the document root
    std::string message;
    std::optional<double> residual;
};

/// The document is present only when no Error-severity diagnostic occurred.
struct ParseResult {
    std::optional<ScenarioDocument> document;
    std::vector<ParseDiagnostic> diagnostics;

    [[nodiscard]] bool ok() const { return document.has_value(); }
};

/// Strict parse of a `.scenario` file: JSON object syntax, unknown and
/// duplicate keys rejected, `format_version` first, complex numbers as
/// [re, im], matrices as arrays of rows, bases either "standard" or an
/// array of vectors. All problems are collected, then the assembled
/// scenario is checked with validate_scenario at `tol`.
ParseResult parse_scenario(std::string_view text, Tolerance tol = {});

/// Canonical text: fixed key order, two-space indent, every real at 17
/// significant digits, trailing newline.
std::string write_scenario(const ScenarioDocument& doc);

/// %.17g with -0 normalized to 0.
std::string format_real(double x);

std::string to_string(Severity s);

}  // namespace conjoint
