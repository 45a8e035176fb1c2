#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "qdarwin/axy.hpp"
#include "qdarwin/experiments.hpp"

// Command front end: bath config files, CSV artifacts and the run driver the
// CLI binary delegates to. File formats are flat "key = value" text with
// dotted keys; numbers are serialized with 12 significant digits and no
// locale dependence, so identical configs and seeds give byte-identical
// output.
namespace qdarwin {

inline constexpr std::string_view kToolVersion = "0.1.0";

// exit 2: unparseable or invalid configuration input
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// exit 4: filesystem failures while writing artifacts
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { kSurface, kGhz, kChernoff, kRamsey, kEcho, kAxyDesign, kRandomBath };

std::string_view command_name(Command command);

struct RunConfig {
  Command command = Command::kSurface;
  std::string bath_path;         // empty: the bundled register
  std::string output_dir = ".";  // QDARWIN_OUTDIR env var takes precedence

  // time grid in microseconds (surface, chernoff, ramsey, random-bath)
  double t_min_us = 0.0;
  double t_max_us = 30.0;
  int n_times = 61;

  int max_fragment = -1;  // -1: whole bath
  bool corrected = true;
  double delta = 0.36787944117144233;  // 1/e
  int ghz_spins = 3;

  int echo_spins = 3;
  double echo_dt_us = 0.1;
  int echo_points = 2048;

  std::vector<double> f_dd_values{0.2};
  double tau_s = 0.0;  // 0: resonance spacing of the strongest bath spin

  double concentration = 0.011;
  double radius_nm = 2.0;
  uint64_t seed = 1;
  int realizations = 10;
  double polarization = 1.0;
};

/// Parses a bath config file. Keys: larmor_hz, dephasing_rate_hz,
/// spins[i].a_parallel_hz, spins[i].a_perp_hz, spins[i].polarization.
/// '#' starts a comment. Missing polarizations default to 1.0 with a notice
/// on stderr; schema violations raise ConfigError with file:line context.
BathConfig load_bath(const std::string& path);

/// 12 significant digits, '.' decimal separator.
std::string format_number(double v);

/// Executes the configured command, writing the documented CSV artifacts and
/// a .meta sidecar (tool version, seed, config echo) into the output
/// directory. Returns the process exit status: 0 success, 2 config errors,
/// 3 domain errors, 4 I/O failures; failures are diagnosed on stderr.
int run(const RunConfig& config);

}  // namespace qdarwin
