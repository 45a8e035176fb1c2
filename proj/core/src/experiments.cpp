#include "qdarwin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qdarwin {

namespace {

constexpr uint64_t kSurfaceSampleSeed = 20200715;  // fragment sampling seed (fixed)
constexpr double kLatticeConstantNm = 0.357;
constexpr double kElectronGyromagneticHzPerTesla = 28.024e9;
constexpr double kHbar = 1.054571817e-34;
constexpr int kMaxRedraws = 64;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool next_combination(std::vector<int>& c, int n) {
  const int m = static_cast<int>(c.size());
  for (int i = m - 1; i >= 0; --i) {
    if (c[i] < n - m + i) {
      ++c[i];
      for (int j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// point-dipole secular hyperfine components in Hz for a displacement in nm
void dipolar_couplings(const Eigen::Vector3d& r_nm, double& a_par_hz, double& a_perp_hz) {
  static const Eigen::Vector3d nv_axis = Eigen::Vector3d(1, 1, 1).normalized();
  const double r_m = r_nm.norm() * 1e-9;
  const double cos_t = r_nm.normalized().dot(nv_axis);
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  const double prefactor = 1e-7 * 2.0 * M_PI * kElectronGyromagneticHzPerTesla *
                           kC13GyromagneticHzPerTesla * kHbar / (r_m * r_m * r_m);
  a_par_hz = prefactor * (1.0 - 3.0 * cos_t * cos_t);
  a_perp_hz = prefactor * 3.0 * std::abs(sin_t * cos_t);
}

}  // namespace

void SweepResult::validate() const {
  const size_t nt = times_s.size(), nm = fragment_sizes.size();
  require(chi_surface.size() == nt && mi_surface.size() == nt && discord_surface.size() == nt,
          "SweepResult: surface row count mismatch");
  for (size_t i = 0; i < nt; ++i) {
    require(chi_surface[i].size() == nm && mi_surface[i].size() == nm &&
                discord_surface[i].size() == nm,
            "SweepResult: surface column count mismatch");
    for (size_t j = 0; j < nm; ++j) {
      require(chi_surface[i][j] >= -1e-9, "SweepResult: negative chi entry");
      require(mi_surface[i][j] >= -1e-9, "SweepResult: negative mutual information entry");
    }
  }
}

SweepResult holevo_surface(const BathConfig& bath, const std::vector<double>& times_s,
                           int max_fragment, bool corrected) {
  require(!times_s.empty(), "holevo_surface: empty time grid");
  for (size_t i = 1; i < times_s.size(); ++i)
    require(times_s[i] > times_s[i - 1], "holevo_surface: times must be ascending");
  if (max_fragment < 0 || max_fragment > bath.size())
    throw std::invalid_argument("holevo_surface: fragment size exceeds bath");

  SweepResult out;
  out.bath = corrected ? with_unit_polarization(bath) : bath;
  out.seed = kSurfaceSampleSeed;
  out.polarization_corrected = corrected;
  out.times_s = times_s;
  for (int m = 0; m <= max_fragment; ++m) out.fragment_sizes.push_back(m);

  auto initial = initial_branched_state(out.bath);
  const int n = out.bath.size();
  for (double t : times_s) {
    auto state = evolve_branches(initial, out.bath, t);
    std::vector<double> chi_row, mi_row, d_row;
    for (int m = 0; m <= max_fragment; ++m) {
      if (m == 0) {
        chi_row.push_back(0.0);
        mi_row.push_back(0.0);
        d_row.push_back(0.0);
        continue;
      }
      double chi_sum = 0, mi_sum = 0, d_sum = 0;
      long count = 0;
      std::vector<int> combo(m);
      for (int i = 0; i < m; ++i) combo[i] = i;
      do {
        auto info = info_breakdown(state, Fragment{combo});
        chi_sum += info.holevo_bits;
        mi_sum += info.mutual_information_bits;
        d_sum += info.discord_bits;
        ++count;
      } while (next_combination(combo, n));
      chi_row.push_back(chi_sum / count);
      mi_row.push_back(mi_sum / count);
      d_row.push_back(d_sum / count);
    }
    out.chi_surface.push_back(std::move(chi_row));
    out.mi_surface.push_back(std::move(mi_row));
    out.discord_surface.push_back(std::move(d_row));
  }
  out.validate();
  return out;
}

GhzPlateau ghz_plateau(const BathConfig& bath, int n_spins,
                       const std::vector<double>& polarizations) {
  BathConfig configured = bath;
  if (!polarizations.empty()) {
    require(polarizations.size() == static_cast<size_t>(bath.size()),
            "ghz_plateau: polarization override size mismatch");
    for (int k = 0; k < bath.size(); ++k) configured.spins[k].polarization = polarizations[k];
  }

  GhzPlateau out;
  auto uncorrected = ghz_protocol(configured, n_spins);
  auto corrected = ghz_protocol(with_unit_polarization(configured), n_spins);
  for (int m = 0; m <= configured.size(); ++m) {
    out.fragment_sizes.push_back(m);
    out.chi_corrected.push_back(fragment_average_chi(corrected, m));
    out.chi_uncorrected.push_back(fragment_average_chi(uncorrected, m));
  }
  return out;
}

ChernoffCurve chernoff_curve(const BathConfig& bath, const std::vector<double>& times_s) {
  bath.validate();
  ChernoffCurve out;
  out.times_s = times_s;
  auto initial = initial_branched_state(bath);
  for (double t : times_s) {
    auto state = evolve_branches(initial, bath, t);
    std::vector<double> xi(bath.size());
    double sum = 0.0;
    for (int k = 0; k < bath.size(); ++k) {
      auto up = DensityOperator::from_pure({Vector(state.spins[k].up)});
      auto down = DensityOperator::from_pure({Vector(state.spins[k].down)});
      xi[k] = chernoff_information(up, down);
      sum += xi[k];
    }
    out.xi_bar_nats.push_back(sum / bath.size());
    out.xi_per_spin_nats.push_back(std::move(xi));
  }
  return out;
}

void RandomBathSpec::validate() const {
  require(concentration > 0.0 && concentration <= 1.0,
          "RandomBathSpec: concentration outside (0,1]");
  require(lattice_radius_nm > 0.0, "RandomBathSpec: radius must be positive");
  require(n_realizations >= 1, "RandomBathSpec: need at least one realization");
  require(initial_polarization > 0.0 && initial_polarization <= 1.0,
          "RandomBathSpec: polarization outside (0,1]");
}

std::vector<Eigen::Vector3d> diamond_lattice_sites(double radius_nm) {
  require(radius_nm > 0.0, "diamond_lattice_sites: radius must be positive");
  // integer coordinates in units of a/4: fcc offsets plus the (1,1,1) basis
  static const int fcc[4][3] = {{0, 0, 0}, {0, 2, 2}, {2, 0, 2}, {2, 2, 0}};
  const int cells = static_cast<int>(std::ceil(radius_nm / kLatticeConstantNm)) + 1;
  const double unit = kLatticeConstantNm / 4.0;
  const double nn_cutoff = kLatticeConstantNm * std::sqrt(3.0) / 4.0 * (1.0 + 1e-9);

  std::vector<Eigen::Vector3i> integer_sites;
  for (int i = -cells; i <= cells; ++i)
    for (int j = -cells; j <= cells; ++j)
      for (int k = -cells; k <= cells; ++k)
        for (int b = 0; b < 8; ++b) {
          Eigen::Vector3i s(4 * i + fcc[b % 4][0] + (b < 4 ? 0 : 1),
                            4 * j + fcc[b % 4][1] + (b < 4 ? 0 : 1),
                            4 * k + fcc[b % 4][2] + (b < 4 ? 0 : 1));
          const double r = s.cast<double>().norm() * unit;
          if (r > radius_nm || r <= nn_cutoff) continue;  // outside, vacancy or nearest neighbor
          integer_sites.push_back(s);
        }
  std::sort(integer_sites.begin(), integer_sites.end(),
            [](const Eigen::Vector3i& a, const Eigen::Vector3i& b) {
              if (a.x() != b.x()) return a.x() < b.x();
              if (a.y() != b.y()) return a.y() < b.y();
              return a.z() < b.z();
            });
  std::vector<Eigen::Vector3d> sites;
  sites.reserve(integer_sites.size());
  for (const auto& s : integer_sites) sites.push_back(s.cast<double>() * unit);
  return sites;
}

std::vector<BathConfig> generate_random_bath(const RandomBathSpec& spec) {
  spec.validate();
  const auto sites = diamond_lattice_sites(spec.lattice_radius_nm);
  std::vector<BathConfig> baths;
  for (int r = 0; r < spec.n_realizations; ++r) {
    std::seed_seq seq{static_cast<uint32_t>(spec.seed), static_cast<uint32_t>(spec.seed >> 32),
                      static_cast<uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    BathConfig bath;
    bath.larmor_hz = larmor_from_field_tesla(0.044);
    for (int attempt = 0; attempt < kMaxRedraws && bath.spins.empty(); ++attempt) {
      for (const auto& site : sites) {
        if (u(rng) >= spec.concentration) continue;
        NuclearSpinParams s;
        dipolar_couplings(site, s.a_parallel_hz, s.a_perp_abs_hz);
        s.polarization = spec.initial_polarization;
        bath.spins.push_back(s);
      }
    }
    if (bath.spins.empty())
      throw std::runtime_error("generate_random_bath: no spins drawn after repeated attempts");
    baths.push_back(std::move(bath));
  }
  return baths;
}

RecordCountCurve record_count_vs_time(const RandomBathSpec& spec,
                                      const std::vector<double>& times_s, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("record_count_vs_time: delta outside (0,1)");
  const auto baths = generate_random_bath(spec);

  RecordCountCurve out;
  out.times_s = times_s;
  out.mean_record_count.assign(times_s.size(), 0.0);
  for (const auto& bath : baths) {
    out.environment_sizes.push_back(bath.size());
    std::vector<double> counts;
    auto initial = initial_branched_state(bath);
    for (size_t i = 0; i < times_s.size(); ++i) {
      const double t = times_s[i];
      double xi_sum = 0.0;
      if (spec.initial_polarization == 1.0) {
        // pure conditionals: xi_k = -ln cos^2(pi A_k t) in closed form
        for (const auto& s : bath.spins)
          xi_sum += -std::log(std::norm(std::cos(M_PI * s.a_parallel_hz * t)));
      } else {
        auto state = evolve_branches(initial, bath, t);
        for (int k = 0; k < bath.size(); ++k) {
          Eigen::Matrix2cd uu = state.spins[k].up * state.spins[k].up.adjoint();
          Eigen::Matrix2cd dd = state.spins[k].down * state.spins[k].down.adjoint();
          const double p = state.polarizations[k];
          uu(0, 1) *= p;
          uu(1, 0) *= p;
          dd(0, 1) *= p;
          dd(1, 0) *= p;
          xi_sum += chernoff_information(DensityOperator::from_matrix(uu),
                                         DensityOperator::from_matrix(dd));
        }
      }
      auto rc = record_count(xi_sum / bath.size(), bath.size(), delta);
      out.any_exceeds_environment = out.any_exceeds_environment || rc.exceeds_environment;
      counts.push_back(rc.value);
      out.mean_record_count[i] += rc.value;
    }
    out.per_realization.push_back(std::move(counts));
  }
  for (double& v : out.mean_record_count) v /= baths.size();
  return out;
}

}  // namespace qdarwin
