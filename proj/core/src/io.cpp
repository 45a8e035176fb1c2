#include "qdarwin/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace qdarwin {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": not a number: '" + text + "'");
  }
}

struct SpinFields {
  double a_parallel = 0;
  bool have_parallel = false;
  double a_perp = 0;
  bool have_perp = false;
  double polarization = 1.0;
  bool have_polarization = false;
  int line = 0;
};

std::string line_context(const std::string& path, int line) {
  return path + ":" + std::to_string(line);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os << content;
  if (!os) throw IoError("write failed: " + path.string());
}

std::vector<double> time_grid_seconds(const RunConfig& config) {
  if (config.n_times < 1) throw ConfigError("time grid needs at least one point");
  if (config.t_min_us < 0) throw ConfigError("time grid starts before zero");
  if (config.n_times > 1 && !(config.t_max_us > config.t_min_us))
    throw ConfigError("time grid must be increasing");
  std::vector<double> times;
  for (int i = 0; i < config.n_times; ++i) {
    double frac = config.n_times == 1 ? 0.0 : static_cast<double>(i) / (config.n_times - 1);
    times.push_back((config.t_min_us + frac * (config.t_max_us - config.t_min_us)) * 1e-6);
  }
  return times;
}

std::string bath_echo(const BathConfig& bath) {
  std::ostringstream os;
  os << "bath.larmor_hz = " << format_number(bath.larmor_hz) << "\n";
  os << "bath.dephasing_rate_hz = " << format_number(bath.dephasing_rate_hz) << "\n";
  for (int k = 0; k < bath.size(); ++k) {
    os << "bath.spins[" << k << "].a_parallel_hz = " << format_number(bath.spins[k].a_parallel_hz)
       << "\n";
    os << "bath.spins[" << k << "].a_perp_hz = " << format_number(bath.spins[k].a_perp_abs_hz)
       << "\n";
    os << "bath.spins[" << k << "].polarization = " << format_number(bath.spins[k].polarization)
       << "\n";
  }
  return os.str();
}

std::string config_echo(const RunConfig& config, const BathConfig& bath) {
  std::ostringstream os;
  os << "tool.version = " << kToolVersion << "\n";
  os << "command = " << command_name(config.command) << "\n";
  os << "seed = " << config.seed << "\n";
  os << "bath_path = " << (config.bath_path.empty() ? "<bundled>" : config.bath_path) << "\n";
  os << "t_min_us = " << format_number(config.t_min_us) << "\n";
  os << "t_max_us = " << format_number(config.t_max_us) << "\n";
  os << "n_times = " << config.n_times << "\n";
  os << "max_fragment = " << config.max_fragment << "\n";
  os << "corrected = " << (config.corrected ? "true" : "false") << "\n";
  os << "delta = " << format_number(config.delta) << "\n";
  os << "ghz_spins = " << config.ghz_spins << "\n";
  os << "echo_spins = " << config.echo_spins << "\n";
  os << "echo_dt_us = " << format_number(config.echo_dt_us) << "\n";
  os << "echo_points = " << config.echo_points << "\n";
  os << "tau_s = " << format_number(config.tau_s) << "\n";
  {
    os << "f_dd_values =";
    for (double f : config.f_dd_values) os << " " << format_number(f);
    os << "\n";
  }
  os << "concentration = " << format_number(config.concentration) << "\n";
  os << "radius_nm = " << format_number(config.radius_nm) << "\n";
  os << "realizations = " << config.realizations << "\n";
  os << "polarization = " << format_number(config.polarization) << "\n";
  os << bath_echo(bath);
  return os.str();
}

std::string curve_csv(const std::vector<double>& times_s, const std::vector<double>& values) {
  std::string out = "time_us,value\n";
  for (size_t i = 0; i < times_s.size(); ++i)
    out += format_number(times_s[i] * 1e6) + "," + format_number(values[i]) + "\n";
  return out;
}

void run_surface(const RunConfig& config, const BathConfig& bath, const fs::path& dir) {
  const int max_fragment = config.max_fragment < 0 ? bath.size() : config.max_fragment;
  auto sweep = holevo_surface(bath, time_grid_seconds(config), max_fragment, config.corrected);
  std::string csv = "time_us,fragment_size,chi_bits,mi_bits,discord_bits\n";
  for (size_t i = 0; i < sweep.times_s.size(); ++i)
    for (size_t j = 0; j < sweep.fragment_sizes.size(); ++j)
      csv += format_number(sweep.times_s[i] * 1e6) + "," +
             std::to_string(sweep.fragment_sizes[j]) + "," + format_number(sweep.chi_surface[i][j]) +
             "," + format_number(sweep.mi_surface[i][j]) + "," +
             format_number(sweep.discord_surface[i][j]) + "\n";
  write_file(dir / "surface.csv", csv);

  std::string meta = config_echo(config, sweep.bath);
  meta += "fragment_sample_seed = " + std::to_string(sweep.seed) + "\n";
  meta += "polarization_corrected = " + std::string(sweep.polarization_corrected ? "true" : "false") +
          "\n";
  write_file(dir / "surface.meta", meta);
}

void run_ghz(const RunConfig& config, const BathConfig& bath, const fs::path& dir) {
  auto plateau = ghz_plateau(bath, config.ghz_spins);
  std::string csv = "fragment_size,chi_corrected_bits,chi_uncorrected_bits\n";
  for (size_t m = 0; m < plateau.fragment_sizes.size(); ++m)
    csv += std::to_string(plateau.fragment_sizes[m]) + "," +
           format_number(plateau.chi_corrected[m]) + "," +
           format_number(plateau.chi_uncorrected[m]) + "\n";
  write_file(dir / "ghz.csv", csv);
  write_file(dir / "ghz.meta", config_echo(config, bath));
}

void run_chernoff(const RunConfig& config, const BathConfig& bath, const fs::path& dir) {
  auto times = time_grid_seconds(config);
  auto curve = chernoff_curve(bath, times);
  write_file(dir / "chernoff.csv", curve_csv(times, curve.xi_bar_nats));
  write_file(dir / "chernoff.meta", config_echo(config, bath));
}

void run_ramsey(const RunConfig& config, const BathConfig& bath, const fs::path& dir) {
  auto times = time_grid_seconds(config);
  std::vector<double> signal;
  for (double t : times) signal.push_back(ramsey_signal(bath, t));
  write_file(dir / "ramsey.csv", curve_csv(times, signal));
  write_file(dir / "ramsey.meta", config_echo(config, bath));
}

void run_echo(const RunConfig& config, const BathConfig& bath, const fs::path& dir) {
  if (config.echo_points < 8) throw ConfigError("echo needs at least 8 sweep points");
  if (!(config.echo_dt_us > 0)) throw ConfigError("echo step must be positive");
  std::vector<double> taus;
  for (int i = 0; i < config.echo_points; ++i) taus.push_back(i * config.echo_dt_us * 1e-6);
  auto echo = loschmidt_echo(bath, config.echo_spins, taus);
  write_file(dir / "echo.csv", curve_csv(echo.taus_s, echo.signal));
  std::string spectrum = "frequency_hz,magnitude\n";
  for (size_t i = 0; i < echo.frequencies_hz.size(); ++i)
    spectrum += format_number(echo.frequencies_hz[i]) + "," +
                format_number(echo.spectrum_magnitude[i]) + "\n";
  write_file(dir / "echo_spectrum.csv", spectrum);
  write_file(dir / "echo.meta", config_echo(config, bath));
}

void run_axy_design(const RunConfig& config, const BathConfig& bath, const fs::path& dir) {
  double tau = config.tau_s;
  if (tau <= 0.0) {
    const int strongest = strongest_spins(bath, 1).at(0);
    tau = resonance_spacing(bath.larmor_hz, bath.spins[strongest].a_parallel_hz);
  }
  std::vector<FilterDesign> designs;
  for (double f : config.f_dd_values) designs.push_back(solve_timings(f, tau));
  std::ostringstream os;
  write_timing_table_csv(os, designs);
  write_file(dir / "axy_timings.csv", os.str());
  write_file(dir / "axy_timings.meta", config_echo(config, bath));
}

void run_random_bath(const RunConfig& config, const BathConfig& bath, const fs::path& dir) {
  RandomBathSpec spec;
  spec.concentration = config.concentration;
  spec.lattice_radius_nm = config.radius_nm;
  spec.seed = config.seed;
  spec.n_realizations = config.realizations;
  spec.initial_polarization = config.polarization;
  auto curve = record_count_vs_time(spec, time_grid_seconds(config), config.delta);

  write_file(dir / "record_count.csv", curve_csv(curve.times_s, curve.mean_record_count));
  std::string meta = config_echo(config, bath);
  meta += "environment_sizes =";
  for (int n : curve.environment_sizes) meta += " " + std::to_string(n);
  meta += "\n";
  meta += "asymptotic_overcount = " +
          std::string(curve.any_exceeds_environment ? "true" : "false") + "\n";
  write_file(dir / "record_count.meta", meta);
}

}  // namespace

std::string_view command_name(Command command) {
  switch (command) {
    case Command::kSurface:
      return "surface";
    case Command::kGhz:
      return "ghz";
    case Command::kChernoff:
      return "chernoff";
    case Command::kRamsey:
      return "ramsey";
    case Command::kEcho:
      return "echo";
    case Command::kAxyDesign:
      return "axy-design";
    case Command::kRandomBath:
      return "random-bath";
  }
  return "unknown";
}

BathConfig load_bath(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open bath file: " + path);

  BathConfig bath;
  bool have_larmor = false;
  std::map<int, SpinFields> spins;

  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = line_context(path, line_no);
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + ": expected 'key = value'");

    if (key == "larmor_hz") {
      bath.larmor_hz = parse_double(value, where);
      have_larmor = true;
    } else if (key == "dephasing_rate_hz") {
      bath.dephasing_rate_hz = parse_double(value, where);
    } else if (key.rfind("spins[", 0) == 0) {
      auto close = key.find(']');
      if (close == std::string::npos || key.size() < close + 2 || key[close + 1] != '.')
        throw ConfigError(where + ": malformed spin key '" + key + "'");
      int index = 0;
      try {
        index = std::stoi(key.substr(6, close - 6));
      } catch (const std::exception&) {
        throw ConfigError(where + ": malformed spin index in '" + key + "'");
      }
      if (index < 0) throw ConfigError(where + ": negative spin index");
      std::string field = key.substr(close + 2);
      SpinFields& spin = spins[index];
      spin.line = line_no;
      if (field == "a_parallel_hz") {
        spin.a_parallel = parse_double(value, where);
        spin.have_parallel = true;
      } else if (field == "a_perp_hz") {
        spin.a_perp = parse_double(value, where);
        spin.have_perp = true;
        if (spin.a_perp < 0.0)
          throw ConfigError(where + ": a_perp_hz must be a magnitude (got " + value + ")");
      } else if (field == "polarization") {
        spin.polarization = parse_double(value, where);
        spin.have_polarization = true;
        if (!(spin.polarization > 0.0 && spin.polarization <= 1.0))
          throw ConfigError(where + ": polarization outside (0, 1]");
      } else {
        throw ConfigError(where + ": unknown spin field '" + field + "'");
      }
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }

  if (!have_larmor) throw ConfigError(path + ": missing larmor_hz");
  if (spins.empty()) throw ConfigError(path + ": no spins defined");
  int expected = 0;
  for (const auto& [index, fields] : spins) {
    if (index != expected)
      throw ConfigError(path + ": spin indices must be contiguous from 0 (missing spins[" +
                        std::to_string(expected) + "])");
    ++expected;
    if (!fields.have_parallel)
      throw ConfigError(path + ": spins[" + std::to_string(index) + "] missing a_parallel_hz");
    if (!fields.have_perp)
      throw ConfigError(path + ": spins[" + std::to_string(index) + "] missing a_perp_hz");
    if (!fields.have_polarization)
      std::cerr << "qdarwin: " << path << ": spins[" << index
                << "].polarization missing, defaulting to 1.0\n";
    NuclearSpinParams s;
    s.a_parallel_hz = fields.a_parallel;
    s.a_perp_abs_hz = fields.a_perp;
    s.polarization = fields.polarization;
    bath.spins.push_back(s);
  }

  try {
    bath.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return bath;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int run(const RunConfig& config) {
  try {
    BathConfig bath =
        config.bath_path.empty() ? BathConfig::four_spin_register() : load_bath(config.bath_path);

    fs::path dir = config.output_dir;
    if (const char* env = std::getenv("QDARWIN_OUTDIR"); env && *env) dir = env;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
      throw IoError("cannot create output directory: " + dir.string());

    switch (config.command) {
      case Command::kSurface:
        run_surface(config, bath, dir);
        break;
      case Command::kGhz:
        run_ghz(config, bath, dir);
        break;
      case Command::kChernoff:
        run_chernoff(config, bath, dir);
        break;
      case Command::kRamsey:
        run_ramsey(config, bath, dir);
        break;
      case Command::kEcho:
        run_echo(config, bath, dir);
        break;
      case Command::kAxyDesign:
        run_axy_design(config, bath, dir);
        break;
      case Command::kRandomBath:
        run_random_bath(config, bath, dir);
        break;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "qdarwin: " << command_name(config.command) << ": config error: " << e.what()
              << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "qdarwin: " << command_name(config.command) << ": io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "qdarwin: " << command_name(config.command) << ": " << e.what() << "\n";
    return 3;
  }
}

}  // namespace qdarwin
