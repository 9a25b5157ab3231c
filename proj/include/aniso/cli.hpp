#pragma once

// aniso-emit: command-line front end. Everything below is callable in-process
// so the tests can check output bytes and exit codes without spawning.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aniso/biaxial.hpp"
#include "aniso/localfield.hpp"
#include "aniso/media.hpp"

namespace aniso::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitToleranceNotReached = 3;
inline constexpr int kExitRoutesDisagree = 4;

/// Relative disagreement between the Fermi and Green's routes that fails `greens`.
inline constexpr double kRouteTolerance = 1e-8;

inline constexpr const char* kSweepHeader =
    "eps_sweep,gamma_numeric,gamma_model,gamma_closed,rel_error,quad_order,quad_err";
inline constexpr const char* kAngularHeader = "theta_rad,f_theta";
inline constexpr const char* kRateHeader =
    "gamma_normalized,method,branch_1,gamma_branch_1,branch_2,gamma_branch_2,quad_order,quad_err,"
    "converged,gamma_si";
inline constexpr const char* kValidateHeader = "name,samples,worst_defect,tolerance,passed";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { rate, angular, sweep, greens, validate };
enum class Method { automatic, closed, numeric, model };
enum class OutputFormat { csv, json };

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  /// count values from start to stop inclusive; the last one is stop exactly.
  std::vector<double> values() const;
};

struct SiRequest {
  double omega = 0.0;      // rad/s
  double dipole_si = 0.0;  // C m
};

struct RunConfig {
  Command command = Command::rate;
  std::array<std::optional<double>, 3> eps;  // unset entries allowed only for the swept axis
  Direction dipole = Direction::axis(2);     // crystal frame once frame is applied
  MaterialFrame frame = MaterialFrame::identity();
  Method method = Method::automatic;
  QuadratureSpec quadrature = default_rate_spec();
  std::optional<int> sweep_axis;
  SweepRange range;
  std::optional<LocalFieldTensor> local_field;
  std::optional<OutputFormat> output;  // default depends on the command
  std::string output_path;             // empty: standard output
  std::uint64_t seed = 42;
  int samples = 181;
  std::optional<SiRequest> si;
  bool inject_fault = false;  // hidden; validate and greens report a planted failure

  /// Complete tensor; throws ConfigError if an entry is missing.
  PermittivityTensor tensor() const;
  OutputFormat format() const;
};

/// Parses "1.5", "-2e3", and with allow_degrees "30deg" (converted to radians).
/// Throws ConfigError on anything else.
double parse_number(const std::string& text, bool allow_degrees = false);
std::vector<double> parse_list(const std::string& text, std::size_t expected, bool allow_degrees = false);
SweepRange parse_range(const std::string& text);

/// Defaults, then ANISO_EMIT_TOL, then the --config file, then flags.
/// Throws ConfigError.
RunConfig parse_args(const std::vector<std::string>& args);

/// Runs a parsed configuration; returns the exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run, mapping every failure onto the exit-code contract.
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "%.17g"; non-finite values print as nan/inf.
std::string format_number(double value);

}  // namespace aniso::cli
