#pragma once

// Command implementations behind the CLI. Each cmd_* validates its config,
// writes its outputs into the output directory and returns an exit status;
// run_command maps exceptions to the documented exit codes.

#include "mixhess/config.hpp"
#include "mixhess/disc.hpp"
#include "mixhess/radial.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace mixhess {

enum ExitCode : int {
    exit_ok = 0,
    exit_property_violation = 1,
    exit_solver_failure = 2,
    exit_verification_failure = 3,
    exit_config_error = 64,
};

struct CommandOptions {
    std::filesystem::path out = ".";
    std::optional<std::uint64_t> seed;  ///< overrides [run] seed
    std::optional<int> threads;         ///< overrides [run] threads; 0 = automatic
    std::ostream* log = nullptr;        ///< progress and failure messages; stderr when null
};

// Problem assembly from a validated config.
DomainSpec domain_from_config(const Config& c);
SolverTolerances tolerances_from_config(const Config& c);
ProblemData problem_from_config(const Config& c, double eps);
std::shared_ptr<const Grid> grid_from_config(const Config& c, int N);
/// The radial oracle for a ball with general (radial polynomial) coefficients.
RadialProblem radial_from_config(const Config& c);
/// phi on the boundary sphere of a radial config.
double radial_phi(const Config& c);

int cmd_identities(const Config& c, const CommandOptions& o);
int cmd_solve(const Config& c, const CommandOptions& o);
int cmd_continue(const Config& c, const CommandOptions& o);
int cmd_oracle(const Config& c, const CommandOptions& o);
int cmd_compare(const Config& c, const CommandOptions& o);
int cmd_verify(const Config& c, const CommandOptions& o);

/// Schema check, thread setup, dispatch and exception-to-exit-code mapping.
int run_command(const std::string& command, const Config& c, const CommandOptions& o);

}  // namespace mixhess
