#pragma once

#include <cstdint>

#include "qdarwin/metrics.hpp"

// Orchestration of the figure-level studies: the time/fragment Holevo
// surface, the GHZ plateau, the Chernoff curve, and the record-count study
// over randomly generated baths. Everything is deterministic given
// (config, seed); grid points accumulate in index order.
namespace qdarwin {

struct SweepResult {
  std::vector<double> times_s;
  std::vector<int> fragment_sizes;
  // [time index][fragment-size index], bits
  std::vector<std::vector<double>> chi_surface;
  std::vector<std::vector<double>> mi_surface;
  std::vector<std::vector<double>> discord_surface;
  BathConfig bath;  // snapshot of the configuration actually used
  uint64_t seed = 0;
  bool polarization_corrected = false;

  void validate() const;
};

/// Averaged chi, I and D per (time, fragment size). corrected = true runs
/// with P_k = 1 (dark-green route); corrected = false keeps the configured
/// polarizations, synthesizing the uncorrected data.
SweepResult holevo_surface(const BathConfig& bath, const std::vector<double>& times_s,
                           int max_fragment, bool corrected);

struct GhzPlateau {
  std::vector<int> fragment_sizes;  // 0..n_spins
  std::vector<double> chi_corrected;
  std::vector<double> chi_uncorrected;
};

/// chi versus fragment size for the GHZ protocol state, with and without the
/// polarization correction. Optional polarization override (one value per
/// bath spin) replaces the configured P_k.
GhzPlateau ghz_plateau(const BathConfig& bath, int n_spins,
                       const std::vector<double>& polarizations = {});

struct ChernoffCurve {
  std::vector<double> times_s;
  std::vector<double> xi_bar_nats;
  std::vector<std::vector<double>> xi_per_spin_nats;  // [time][spin]
};

/// Mean quantum Chernoff information of the conditional pairs over the bath
/// spins (pure conditional states; the gamma-free path).
ChernoffCurve chernoff_curve(const BathConfig& bath, const std::vector<double>& times_s);

struct RandomBathSpec {
  double concentration = 0.011;     // 13C fraction in (0, 1]
  double lattice_radius_nm = 2.0;   // sites within this distance of the vacancy
  uint64_t seed = 1;
  int n_realizations = 10;
  double initial_polarization = 1.0;

  void validate() const;
};

/// Carbon sites of the diamond lattice (conventional cubic cell, two-atom
/// basis, a = 0.357 nm) within the radius, excluding the vacancy site and
/// its nearest-neighbor shell. Deterministic lexicographic order.
std::vector<Eigen::Vector3d> diamond_lattice_sites(double radius_nm);

/// n_realizations random baths: each lattice site is occupied with
/// probability = concentration, couplings from the secular point-dipole
/// formula with the NV axis along [111]. Deterministic given the seed.
std::vector<BathConfig> generate_random_bath(const RandomBathSpec& spec);

struct RecordCountCurve {
  std::vector<double> times_s;
  std::vector<double> mean_record_count;
  std::vector<std::vector<double>> per_realization;  // [realization][time]
  std::vector<int> environment_sizes;
  bool any_exceeds_environment = false;
};

/// Mean number of pointer-state records over bath realizations:
/// xi_bar(t) #E / ln(1/delta) per realization, averaged in index order.
RecordCountCurve record_count_vs_time(const RandomBathSpec& spec,
                                      const std::vector<double>& times_s, double delta);

}  // namespace qdarwin
