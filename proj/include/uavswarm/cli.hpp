#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavswarm/mc.hpp"
#include "uavswarm/scenario.hpp"

namespace uavswarm::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kNumericalError = 3,
    kPlacementError = 4,
    kIoError = 5,
    kUsageError = 64,
};

/// Bad flag combination or argument value.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kSeedEnvVar = "UAVSWARM_SEED";
inline constexpr std::uint64_t kDefaultSeed = 0x5eed2023ULL;

struct SeedChoice {
    std::uint64_t seed = kDefaultSeed;
    std::string source = "default";  // flag | env | default
};

/// Flag beats environment beats the built-in default.
SeedChoice resolve_seed(std::optional<std::uint64_t> flag, const char* env_value);

enum class Engine { Analytic, Mc, Both };
Engine parse_engine(const std::string& text);

struct RunOptions {
    std::size_t trials = 20000;
    SeedChoice seed;
    unsigned workers = 0;
};

struct SweepSpec {
    std::string variable;
    std::vector<double> values;
    Engine engine = Engine::Both;
    ProtocolKind protocol;
};

/// Variables a sweep may vary.
const std::vector<std::string>& sweep_variables();

/// start, start + step, ... up to stop (inclusive within rounding); values are
/// rounded to 12 significant digits so grid points print cleanly.
std::vector<double> expand_range(double start, double stop, double step);

/// Config with `variable` set to `value` (rounds is a protocol setting and is
/// ignored here).
ScenarioConfig apply_sweep_value(const ScenarioConfig& base, const std::string& variable, double value);

void cmd_analyze(const Scenario& scenario, std::ostream& out);
void cmd_simulate(const Scenario& scenario, const ProtocolKind& protocol, const RunOptions& run, std::ostream& out);
void cmd_compare(const Scenario& scenario, const RunOptions& run, std::ostream& out);
void cmd_sweep(const ScenarioConfig& base, const SweepSpec& spec, const RunOptions& run, std::ostream& out);
/// Writes the grid CSV and returns the best tau_phase1_s (ties -> smaller).
double cmd_optimize_tau(const ScenarioConfig& base, std::vector<double> grid, Engine engine,
                        const RunOptions& run, std::ostream& out);
void cmd_dist_k(const Scenario& scenario, const RunOptions& run, std::ostream& out, std::ostream* log = nullptr);

/// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uavswarm::cli
