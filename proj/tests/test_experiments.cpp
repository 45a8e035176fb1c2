#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdarwin/experiments.hpp"
#include "test_util.hpp"

using namespace qdarwin;

TEST_CASE("holevo surface") {
  auto bath = BathConfig::four_spin_register();
  std::vector<double> times{0.0, 5e-6, 14.5e-6, 20e-6};
  auto corrected = holevo_surface(bath, times, 4, true);
  auto raw = holevo_surface(bath, times, 4, false);
  corrected.validate();
  raw.validate();

  // t = 0 rows are identically zero
  for (int m = 0; m <= 4; ++m) {
    CHECK(corrected.chi_surface[0][m] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(corrected.mi_surface[0][m] == doctest::Approx(0.0).epsilon(1e-10));
  }

  // corrected single-spin average at 14.5 us clears the 1-1/e plateau
  CHECK(corrected.chi_surface[2][1] >= 1.0 - 1.0 / std::numbers::e);

  // the uncorrected run sits strictly below wherever information flows
  for (size_t i = 1; i < times.size(); ++i)
    for (int m = 1; m <= 4; ++m)
      if (corrected.chi_surface[i][m] > 1e-9)
        CHECK(raw.chi_surface[i][m] < corrected.chi_surface[i][m]);

  CHECK(corrected.polarization_corrected);
  for (const auto& s : corrected.bath.spins) CHECK(s.polarization == 1.0);

  CHECK_THROWS_AS(holevo_surface(bath, times, 5, true), std::invalid_argument);
  CHECK_THROWS_AS(holevo_surface(bath, {3e-6, 1e-6}, 2, true), std::invalid_argument);
}

TEST_CASE("surface chi agrees with the explicit full-register route") {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());
  bath.dephasing_rate_hz = 0.0;
  std::vector<double> times{3e-6, 9e-6, 14.5e-6, 17e-6};
  auto sweep = holevo_surface(bath, times, 4, true);

  auto initial = initial_branched_state(bath);
  int checked = 0;
  for (size_t i = 0; i < times.size(); ++i) {
    auto rho = to_density_operator(evolve_branches(initial, bath, times[i]));
    for (int m : {1, 4}) {
      // average explicit-path chi over all fragments of size m
      std::vector<int> combo(m);
      for (int j = 0; j < m; ++j) combo[j] = j;
      double sum = 0;
      long count = 0;
      do {
        std::vector<int> keep{0};
        for (int s : combo) keep.push_back(s + 1);
        sum += holevo(partial_trace(rho, keep));
        ++count;
        bool more = false;
        for (int j = m - 1; j >= 0; --j)
          if (combo[j] < 4 - m + j) {
            ++combo[j];
            for (int l = j + 1; l < m; ++l) combo[l] = combo[l - 1] + 1;
            more = true;
            break;
          }
        if (!more) break;
      } while (true);
      CHECK(std::abs(sweep.chi_surface[i][m] - sum / count) < 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 8);
}

TEST_CASE("ghz plateau") {
  auto bath = BathConfig::four_spin_register();
  bath.spins.resize(3);
  auto plateau = ghz_plateau(bath, 3);

  CHECK(plateau.chi_corrected[0] == 0.0);
  CHECK(plateau.chi_uncorrected[0] == 0.0);
  for (int m = 1; m <= 3; ++m)
    CHECK(plateau.chi_corrected[m] == doctest::Approx(1.0).epsilon(1e-12));

  // imperfect polarization: single spin holds 1 - h2((1+P)/2), about half a bit
  const double expected_single = 1.0 - binary_entropy(0.5 * (1.0 + 0.75));
  CHECK(plateau.chi_uncorrected[1] == doctest::Approx(expected_single).epsilon(1e-12));
  for (int m = 1; m <= 3; ++m) CHECK(plateau.chi_uncorrected[m] < plateau.chi_corrected[m]);

  // polarization override replaces the configured values
  auto overridden = ghz_plateau(bath, 3, {0.9, 0.9, 0.9});
  CHECK(overridden.chi_uncorrected[1] ==
        doctest::Approx(1.0 - binary_entropy(0.5 * (1.0 + 0.9))).epsilon(1e-12));
}

TEST_CASE("chernoff curve") {
  auto bath = BathConfig::four_spin_register();
  std::vector<double> times{0.0, 1.7e-6, 4.2e-6, 8.9e-6};
  auto curve = chernoff_curve(bath, times);

  CHECK(curve.xi_bar_nats[0] == doctest::Approx(0.0).epsilon(1e-7));
  for (size_t i = 0; i < times.size(); ++i) {
    double expected = 0.0;
    for (const auto& s : bath.spins)
      expected += -std::log(std::norm(std::cos(M_PI * s.a_parallel_hz * times[i])));
    CHECK(curve.xi_bar_nats[i] == doctest::Approx(expected / 4.0).epsilon(1e-6));
  }

  // periodic zero of one spin: xi_2 vanishes at t = 1/A_2
  auto at_recurrence = chernoff_curve(bath, {1.0 / 49.5e3});
  CHECK(at_recurrence.xi_per_spin_nats[0][1] < 1e-6);

  // permutation invariance of the average
  BathConfig permuted = bath;
  std::swap(permuted.spins[0], permuted.spins[3]);
  std::swap(permuted.spins[1], permuted.spins[2]);
  auto curve_p = chernoff_curve(permuted, times);
  for (size_t i = 0; i < times.size(); ++i)
    CHECK(std::abs(curve.xi_bar_nats[i] - curve_p.xi_bar_nats[i]) < 1e-12);
}

TEST_CASE("diamond lattice") {
  auto sites = diamond_lattice_sites(1.0);
  CHECK(sites.size() > 0);
  const double nn = 0.357 * std::sqrt(3.0) / 4.0;
  for (const auto& s : sites) {
    CHECK(s.norm() <= 1.0 + 1e-12);
    CHECK(s.norm() > nn);  // vacancy and nearest neighbors excluded
  }
  // density: 8 atoms per cell of volume a^3 minus the exclusions
  const double expected = 4.0 / 3.0 * M_PI / std::pow(0.357, 3) * 8.0;  // sites per nm^3 * V(1nm)
  CHECK(std::abs(static_cast<double>(sites.size()) - expected) / expected < 0.15);
}

TEST_CASE("random bath generation is deterministic and statistically sound") {
  RandomBathSpec spec;
  spec.concentration = 0.011;
  spec.lattice_radius_nm = 2.0;
  spec.seed = 424242;
  spec.n_realizations = 200;

  auto baths = generate_random_bath(spec);
  auto again = generate_random_bath(spec);
  REQUIRE(baths.size() == 200);
  for (int r : {0, 57, 199}) {
    REQUIRE(baths[r].size() == again[r].size());
    for (int k = 0; k < baths[r].size(); ++k) {
      CHECK(baths[r].spins[k].a_parallel_hz == again[r].spins[k].a_parallel_hz);
      CHECK(baths[r].spins[k].a_perp_abs_hz == again[r].spins[k].a_perp_abs_hz);
    }
  }

  // mean spin count within 3 sigma of sites * concentration
  const double n_sites = static_cast<double>(diamond_lattice_sites(2.0).size());
  double mean = 0.0;
  for (const auto& b : baths) mean += b.size();
  mean /= baths.size();
  const double expected = n_sites * spec.concentration;
  const double sigma_mean =
      std::sqrt(n_sites * spec.concentration * (1 - spec.concentration) / baths.size());
  CHECK(std::abs(mean - expected) <= 3.0 * sigma_mean);

  for (const auto& b : baths) {
    CHECK(b.size() >= 1);
    for (const auto& s : b.spins) CHECK(s.a_perp_abs_hz >= 0.0);
  }

  RandomBathSpec bad = spec;
  bad.concentration = 0.0;
  CHECK_THROWS_AS(generate_random_bath(bad), std::invalid_argument);
}

TEST_CASE("record count versus time") {
  RandomBathSpec spec;
  spec.concentration = 0.011;
  spec.lattice_radius_nm = 1.5;
  spec.seed = 7;
  spec.n_realizations = 10;

  // the closest admissible site (~0.25 nm) couples at ~2.5 MHz, so stay below
  // its half-cycle at ~0.2 us to observe the one-way early rise
  std::vector<double> times{0.0, 2e-8, 4e-8, 6e-8, 8e-8};
  auto curve = record_count_vs_time(spec, times, 1.0 / std::numbers::e);

  CHECK(curve.mean_record_count[0] == doctest::Approx(0.0));
  for (size_t i = 1; i < times.size(); ++i)
    CHECK(curve.mean_record_count[i] > curve.mean_record_count[i - 1]);

  // higher concentration gives a higher early-time curve
  RandomBathSpec denser = spec;
  denser.concentration = 0.05;
  auto curve_denser = record_count_vs_time(denser, times, 1.0 / std::numbers::e);
  for (size_t i = 1; i < times.size(); ++i)
    CHECK(curve_denser.mean_record_count[i] > curve.mean_record_count[i]);

  // polarization-damped conditionals lower the count
  RandomBathSpec hazy = spec;
  hazy.initial_polarization = 0.7;
  auto curve_hazy = record_count_vs_time(hazy, times, 1.0 / std::numbers::e);
  for (size_t i = 1; i < times.size(); ++i)
    CHECK(curve_hazy.mean_record_count[i] < curve.mean_record_count[i]);

  CHECK_THROWS_AS(record_count_vs_time(spec, times, 0.0), std::domain_error);

  // near-orthogonal records push the asymptotic formula past #E
  RandomBathSpec tiny = spec;
  tiny.n_realizations = 3;
  auto late = record_count_vs_time(tiny, {0.0, 40e-6}, 1.0 / std::numbers::e);
  CHECK(late.any_exceeds_environment);
}
