#pragma once

// Command-line front end: scenario configs, simulation runs, the
// verification suite and one-shot transforms.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dampreg/integrate.hpp"

namespace dampreg {

/// Malformed or inconsistent input. The message names the field (as a JSON
/// pointer) or the line and column of a syntax error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  SystemId system = SystemId::AutonomousKepler2D;
  SystemParams params;
  std::vector<double> position;  ///< q, or U for regularized systems
  std::vector<double> velocity;  ///< dq/dt, or dU/dtau
  double time = 0.0;             ///< initial independent variable
  double physical_time = 0.0;    ///< initial co-integrated t (regularized systems)
  std::optional<double> script_e;
  std::optional<double> kepler_energy;
  IntegratorConfig integrator;
  std::vector<std::string> outputs;

  /// Flat initial state in the layout rhs() expects.
  std::vector<double> initial_state() const;
  /// Context with script_e / kepler_energy filled in (from the ICs when absent).
  RhsContext context() const;
};

inline constexpr int kSchemaVersion = 1;

ScenarioConfig parse_scenario(const std::string& json_text);

/// CSV header for a scenario: time, state components, requested outputs.
std::vector<std::string> trajectory_columns(const ScenarioConfig& cfg);

int exit_code(Status s);

int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::ostream& out,
                 std::ostream& err, bool quiet);

int cmd_verify(const std::string& filter, const std::string& out_path, std::uint64_t seed,
               unsigned threads, std::ostream& out, std::ostream& err, bool quiet);

/// Evaluates one transform described by a JSON request and returns the result
/// document. Throws ConfigError.
std::string run_transform(const std::string& json_text);

int cmd_transform(const std::string& spec_path, std::ostream& out, std::ostream& err);

/// Entry point used by the executable.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dampreg
