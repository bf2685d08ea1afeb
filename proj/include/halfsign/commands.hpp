#pragma once

// Command-line surface: subcommands expand, verify, angles, signs, simulate
// and report. `run` is the whole program minus process setup.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "halfsign/densities.hpp"
#include "halfsign/satotate.hpp"

namespace halfsign::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationFailure = 1,
    kComputationFailure = 2,
    kAcceptanceFailure = 3,
};

inline constexpr const char* kReportSchema = "halfsign.density-report/1";
inline constexpr const char* kAngleStatsSchema = "halfsign.angle-stats/1";

using Json = nlohmann::ordered_json;

/// Runs the program on argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

Json report_to_json(const densities::DensityReport& report, std::string_view mode,
                    std::span<const densities::OscillationRow> oscillation);

/// Throws ComputationError if any number in the document is NaN or infinite.
void require_finite(const Json& doc);

struct IdentityResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The exact and numerical identity groups behind `verify`. A group named in
/// `inject_fault` is run on deliberately corrupted input.
std::vector<IdentityResult> run_identity_suite(std::size_t order, const std::string& inject_fault = {});

}  // namespace halfsign::cli
