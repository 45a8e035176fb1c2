// qdarwin: command line front end for the central-spin information toolkit.
// Parses flags into a RunConfig and delegates to qdarwin::run, which writes
// the CSV artifacts and a .meta sidecar per command.
#include <CLI11.hpp>

#include <iostream>

#include "qdarwin/io.hpp"

namespace {

void add_time_grid(CLI::App* cmd, qdarwin::RunConfig& config) {
  cmd->add_option("--tmin-us", config.t_min_us, "Start of the time grid in microseconds");
  cmd->add_option("--tmax-us", config.t_max_us, "End of the time grid in microseconds");
  cmd->add_option("--nt", config.n_times, "Number of grid points");
}

void add_bath_and_output(CLI::App* cmd, qdarwin::RunConfig& config) {
  cmd->add_option("--bath", config.bath_path,
                  "Bath config file (default: the bundled four-spin register)");
  cmd->add_option("--out", config.output_dir,
                  "Output directory (QDARWIN_OUTDIR overrides when set)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Central-spin decoherence and environment-record toolkit"};
  app.set_version_flag("--version", std::string(qdarwin::kToolVersion));
  app.require_subcommand(1);

  qdarwin::RunConfig config;

  auto* surface =
      app.add_subcommand("surface", "Averaged chi/I/D versus time and fragment size");
  add_bath_and_output(surface, config);
  add_time_grid(surface, config);
  surface->add_option("--max-fragment", config.max_fragment,
                      "Largest fragment size (-1: whole bath)");
  surface->add_flag("--corrected,!--uncorrected", config.corrected,
                    "Run with unit polarizations (default) or the configured P_k");
  surface->callback([&] { config.command = qdarwin::Command::kSurface; });

  auto* ghz = app.add_subcommand("ghz", "Holevo plateau of the GHZ creation protocol");
  add_bath_and_output(ghz, config);
  ghz->add_option("--spins", config.ghz_spins, "Number of strongest spins to entangle");
  ghz->callback([&] { config.command = qdarwin::Command::kGhz; });

  auto* chernoff =
      app.add_subcommand("chernoff", "Mean quantum Chernoff information versus time");
  add_bath_and_output(chernoff, config);
  add_time_grid(chernoff, config);
  chernoff->callback([&] { config.command = qdarwin::Command::kChernoff; });

  auto* ramsey = app.add_subcommand("ramsey", "Free-induction population signal");
  add_bath_and_output(ramsey, config);
  add_time_grid(ramsey, config);
  ramsey->callback([&] { config.command = qdarwin::Command::kRamsey; });

  auto* echo = app.add_subcommand("echo", "Loschmidt echo sweep and its spectrum");
  add_bath_and_output(echo, config);
  echo->add_option("--spins", config.echo_spins, "Number of strongest spins to entangle");
  echo->add_option("--dt-us", config.echo_dt_us, "Sweep step in microseconds");
  echo->add_option("--points", config.echo_points, "Number of sweep points");
  echo->callback([&] { config.command = qdarwin::Command::kEcho; });

  auto* axy = app.add_subcommand("axy-design", "Solve pulse timings for target filter values");
  add_bath_and_output(axy, config);
  axy->add_option("--f-dd", config.f_dd_values, "Target first-harmonic coefficients")
      ->expected(-1);
  axy->add_option("--tau-s", config.tau_s,
                  "Interpulse spacing in seconds (default: strongest-spin resonance)");
  axy->callback([&] { config.command = qdarwin::Command::kAxyDesign; });

  auto* random = app.add_subcommand("random-bath", "Record counts over random bath realizations");
  add_bath_and_output(random, config);
  add_time_grid(random, config);
  random->add_option("--concentration", config.concentration, "13C fraction in (0, 1]");
  random->add_option("--radius-nm", config.radius_nm, "Lattice radius in nanometers");
  random->add_option("--seed", config.seed, "Realization seed");
  random->add_option("--realizations", config.realizations, "Number of bath realizations");
  random->add_option("--polarization", config.polarization, "Initial nuclear polarization");
  random->add_option("--delta", config.delta, "Information deficit in (0, 1)");
  random->callback([&] { config.command = qdarwin::Command::kRandomBath; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  return qdarwin::run(config);
}
