#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdarwin/metrics.hpp"
#include "test_util.hpp"

using namespace qdarwin;

namespace {

// closed-form single-spin Holevo information for a |+> initial state
double chi_single_spin(double a_par_hz, double t) {
  return binary_entropy(0.5 * (1.0 + std::abs(std::cos(M_PI * a_par_hz * t))));
}

BathConfig uniform_bath(int n, double a_hz) {
  BathConfig bath;
  bath.larmor_hz = 471e3;
  for (int k = 0; k < n; ++k) {
    NuclearSpinParams s;
    s.a_parallel_hz = a_hz;
    bath.spins.push_back(s);
  }
  return bath;
}

}  // namespace

TEST_CASE("mutual information basics") {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());
  auto t0 = initial_branched_state(bath);

  // product state: no correlations anywhere
  auto joint = fragment_joint_state(t0, Fragment{{0, 1}});
  CHECK(mutual_information(joint) == doctest::Approx(0.0).epsilon(1e-10));

  // Bell state: 2 bits
  BathConfig one = bath;
  one.spins.resize(1);
  auto bell = fragment_joint_state(ghz_protocol(one, 1), Fragment{{0}});
  CHECK(mutual_information(bell) == doctest::Approx(2.0).epsilon(1e-9));

  // GHZ-time whole environment: I = 2 H_S (pure global state forces H_SE = 0)
  auto u = uniform_bath(3, 50e3);
  auto ghz_time = evolve_branches(initial_branched_state(u), u, 1.0 / (2 * 50e3));
  auto full = fragment_joint_state(ghz_time, Fragment{{0, 1, 2}});
  double h_s = von_neumann_entropy(partial_trace(full, {0}));
  CHECK(mutual_information(full) == doctest::Approx(2.0 * h_s).epsilon(1e-9));
  CHECK(h_s == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("holevo closed form against both computation routes") {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());
  auto state0 = initial_branched_state(bath);

  for (const Fragment& f : {Fragment{{0}}, Fragment{{2}}, Fragment{{1, 3}}})
    CHECK(holevo(state0, f) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(holevo(state0, Fragment{{}}) == 0.0);

  for (double t : {2.0e-6, 7.7e-6, 14.5e-6, 19.2e-6}) {
    auto state = evolve_branches(state0, bath, t);
    for (int k = 0; k < 4; ++k) {
      double expected = chi_single_spin(bath.spins[k].a_parallel_hz, t);
      CHECK(holevo(state, Fragment{{k}}, HolevoMethod::kClosedForm) ==
            doctest::Approx(expected).epsilon(1e-11));
      CHECK(holevo(state, Fragment{{k}}, HolevoMethod::kDensityMatrix) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("perfect GHZ: every single spin holds one full bit") {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());
  auto state = ghz_protocol(bath, 4);
  for (int k = 0; k < 4; ++k)
    CHECK(holevo(state, Fragment{{k}}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fast and explicit paths agree on all fragments across times") {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());
  auto state0 = initial_branched_state(bath);
  for (double t : {1.3e-6, 6.2e-6, 14.5e-6, 23.9e-6}) {
    auto state = evolve_branches(state0, bath, t);
    std::vector<int> combo;
    for (int mask = 1; mask < 16; ++mask) {
      combo.clear();
      for (int k = 0; k < 4; ++k)
        if (mask & (1 << k)) combo.push_back(k);
      Fragment f{combo};
      CHECK(std::abs(holevo(state, f, HolevoMethod::kClosedForm) -
                     holevo(state, f, HolevoMethod::kDensityMatrix)) < 1e-10);
    }
  }
}

TEST_CASE("discord") {
  // classical-classical diagonal state has zero discord
  Matrix cc = Matrix::Zero(4, 4);
  cc(0, 0) = 0.5;
  cc(3, 3) = 0.5;
  auto rho_cc = DensityOperator::from_matrix(cc, {2, 2});
  CHECK(discord(rho_cc) == doctest::Approx(0.0).epsilon(1e-10));

  // Bell state in the pointer basis: 1 bit
  auto bath = with_unit_polarization(BathConfig::four_spin_register());
  BathConfig one = bath;
  one.spins.resize(1);
  auto bell = fragment_joint_state(ghz_protocol(one, 1), Fragment{{0}});
  CHECK(discord(bell) == doctest::Approx(1.0).epsilon(1e-9));

  // GHZ-time full environment: D = I - chi = 2 H_S - H_S = 1 bit
  auto u = uniform_bath(3, 50e3);
  auto ghz_time = evolve_branches(initial_branched_state(u), u, 1.0 / (2 * 50e3));
  CHECK(discord(ghz_time, Fragment{{0, 1, 2}}) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("info breakdown satisfies the decomposition identity everywhere") {
  auto bath = BathConfig::four_spin_register();  // P = 0.75, gamma > 0
  auto state0 = initial_branched_state(bath);
  for (double t : {0.0, 3.3e-6, 9.1e-6, 14.5e-6, 21.7e-6}) {
    auto state = evolve_branches(state0, bath, t);
    for (const Fragment& f : {Fragment{{0}}, Fragment{{1, 2}}, Fragment{{0, 1, 2, 3}}}) {
      auto info = info_breakdown(state, f);  // validate() runs inside
      CHECK(info.holevo_bits <= pointer_entropy(state) + 1e-9);
      CHECK(info.mutual_information_bits >= -1e-9);
    }
  }
}

TEST_CASE("uptick: whole-environment mutual information doubles the system entropy") {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());
  bath.dephasing_rate_hz = 0.0;
  auto state0 = initial_branched_state(bath);
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> pick_t(0.0, 30e-6);
  for (int trial = 0; trial < 16; ++trial) {
    auto state = evolve_branches(state0, bath, pick_t(rng));
    auto full = fragment_joint_state(state, Fragment{{0, 1, 2, 3}});
    double h_s = von_neumann_entropy(partial_trace(full, {0}));
    CHECK(std::abs(mutual_information(full) - 2.0 * h_s) < 1e-8);
    CHECK(holevo(full) <= h_s + 1e-9);
  }
}

TEST_CASE("fragment averages and the plateau") {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());

  CHECK(fragment_average_chi(initial_branched_state(bath), 0) == 0.0);

  auto ghz = ghz_protocol(bath, 4);
  for (int m = 1; m <= 4; ++m)
    CHECK(fragment_average_chi(ghz, m) == doctest::Approx(1.0).epsilon(1e-12));

  // t = 14.5 us: every single-spin value exceeds 1 - 1/e
  auto state = evolve_branches(initial_branched_state(bath), bath, 14.5e-6);
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    double chi_k = holevo(state, Fragment{{k}});
    CHECK(chi_k >= 1.0 - 1.0 / std::numbers::e);
    sum += chi_k;
  }
  CHECK(fragment_average_chi(state, 1) == doctest::Approx(sum / 4.0).epsilon(1e-12));

  CHECK_THROWS_AS(fragment_average_chi(state, 5), std::invalid_argument);
}

TEST_CASE("fragment average is monotone in fragment size") {
  auto bath = BathConfig::four_spin_register();
  for (double t : {2.5e-6, 8.8e-6, 14.5e-6, 20.2e-6}) {
    for (bool corrected : {false, true}) {
      auto b = corrected ? with_unit_polarization(bath) : bath;
      auto state = evolve_branches(initial_branched_state(b), b, t);
      double prev = 0.0;
      for (int m = 0; m <= 4; ++m) {
        double cur = fragment_average_chi(state, m);
        CHECK(cur >= prev - 1e-9);
        prev = cur;
      }
    }
  }
}

TEST_CASE("redundancy") {
  auto bath = with_unit_polarization(BathConfig::four_spin_register());

  auto plateau = redundancy(ghz_protocol(bath, 4), 1.0 / std::numbers::e);
  CHECK(plateau.attainable);
  CHECK(plateau.f_delta == 1);
  CHECK(plateau.redundancy == doctest::Approx(4.0));

  auto at_zero = redundancy(initial_branched_state(bath), 1.0 / std::numbers::e);
  CHECK_FALSE(at_zero.attainable);
  CHECK(at_zero.f_delta == 0);

  // recurrence of spin 2 at t = 1/(49.5 kHz): its chi collapses and the
  // single-spin average dips accordingly
  const double t_rec = 1.0 / 49.5e3;
  auto state = evolve_branches(initial_branched_state(bath), bath, t_rec);
  CHECK(holevo(state, Fragment{{1}}) < 1e-6);
  double expected_avg = 0.0;
  for (int k = 0; k < 4; ++k) expected_avg += chi_single_spin(bath.spins[k].a_parallel_hz, t_rec);
  expected_avg /= 4.0;
  auto dip = redundancy(state, 1.0 / std::numbers::e);
  CHECK(dip.chi_curve[1] == doctest::Approx(expected_avg).epsilon(1e-10));

  CHECK_THROWS_AS(redundancy(state, 0.0), std::domain_error);
  CHECK_THROWS_AS(redundancy(state, 1.0), std::domain_error);
}

TEST_CASE("ghz state with imperfect polarization") {
  auto bath = BathConfig::four_spin_register();  // P = 0.75
  bath.spins.resize(3);
  auto state = ghz_protocol(bath, 3);

  // single spin: chi = 1 - h2((1+P)/2), "about half a bit"
  const double p = 0.75;
  const double expected_single = 1.0 - binary_entropy(0.5 * (1.0 + p));
  CHECK(holevo(state, Fragment{{0}}) == doctest::Approx(expected_single).epsilon(1e-12));
  CHECK(expected_single == doctest::Approx(0.4564).epsilon(1e-3));

  // whole environment: oracle eigenvalues in the per-spin sigma_y eigenbasis,
  // lambda(j) = (q^j (1-q)^(3-j) + (1-q)^j q^(3-j)) / 2 with q = (1+P)/2
  const double q = 0.5 * (1.0 + p);
  double h_mix = 0.0;
  for (int j = 0; j <= 3; ++j) {
    double count = (j == 0 || j == 3) ? 1.0 : 3.0;
    double lam = 0.5 * (std::pow(q, j) * std::pow(1 - q, 3 - j) +
                        std::pow(1 - q, j) * std::pow(q, 3 - j));
    h_mix -= count * lam * std::log2(lam);
  }
  const double expected_full = h_mix - 3.0 * binary_entropy(q);
  CHECK(holevo(state, Fragment{{0, 1, 2}}) == doctest::Approx(expected_full).epsilon(1e-10));
  // suppressed well below the 1-bit plateau
  CHECK(expected_full < 0.85);
  CHECK(expected_full > 0.25);
}

TEST_CASE("chernoff information") {
  std::mt19937_64 rng(1848);
  auto rho = test_util::random_density(2, rng);
  CHECK(chernoff_information(rho, rho) == doctest::Approx(0.0).epsilon(1e-7));

  // orthogonal pure states: infinite sentinel
  auto zero = DensityOperator::from_pure({Vector(ket_up())});
  auto one = DensityOperator::from_pure({Vector(ket_down())});
  CHECK(std::isinf(chernoff_information(zero, one)));

  // pure conditional pair: flat overlap in c and xi = -ln cos^2(pi A t)
  const double a = 93.5e3;
  for (double t : {1.9e-6, 3.7e-6, 8.4e-6}) {
    auto bath = uniform_bath(1, a);
    auto state = evolve_branches(initial_branched_state(bath), bath, t);
    auto r0 = DensityOperator::from_pure({Vector(state.spins[0].up)});
    auto r1 = DensityOperator::from_pure({Vector(state.spins[0].down)});
    const double expected = std::norm(std::cos(M_PI * a * t));
    for (double c : {0.1, 0.3, 0.5, 0.7, 0.9})
      CHECK(std::abs(chernoff_overlap(r0, r1, c) - expected) < 1e-9);
    CHECK(chernoff_information(r0, r1) == doctest::Approx(-std::log(expected)).epsilon(1e-8));
  }

  auto wide = test_util::random_density(4, rng);
  CHECK_THROWS_AS(chernoff_information(rho, wide), std::invalid_argument);
}

TEST_CASE("record count") {
  auto r = record_count(0.5, 100, 1.0 / std::numbers::e);
  CHECK(r.value == doctest::Approx(50.0).epsilon(1e-12));
  CHECK_FALSE(r.exceeds_environment);

  CHECK(record_count(0.0, 100, 0.3).value == 0.0);

  auto over = record_count(2.0, 10, 1.0 / std::numbers::e);
  CHECK(over.value == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(over.exceeds_environment);

  CHECK_THROWS_AS(record_count(0.5, 10, 0.0), std::domain_error);
  CHECK_THROWS_AS(record_count(0.5, 10, 1.0), std::domain_error);
  CHECK_THROWS_AS(record_count(-0.5, 10, 0.5), std::invalid_argument);
}

TEST_CASE("fragment joint state matches tracing the full register") {
  // exercises the analytic electron-coherence factors of the traced spins,
  // with dephasing and imperfect polarization switched on
  auto bath = BathConfig::four_spin_register();
  auto initial = initial_branched_state(bath);
  for (double t : {0.0, 4.4e-6, 11.3e-6, 19.8e-6}) {
    auto state = evolve_branches(initial, bath, t);
    auto full = to_density_operator(state);
    for (const Fragment& f :
         {Fragment{{0}}, Fragment{{2}}, Fragment{{0, 3}}, Fragment{{1, 2, 3}}}) {
      std::vector<int> keep{0};
      for (int k : f.indices) keep.push_back(k + 1);
      auto traced = partial_trace(full, keep);
      auto analytic = fragment_joint_state(state, f);
      CHECK((traced.matrix - analytic.matrix).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("sampled fragment averaging beyond the exact-enumeration limit") {
  // uniform 22-spin bath: every size-m fragment has identical chi, so the
  // sampled mean must equal the closed-form value exactly
  BathConfig bath;
  bath.larmor_hz = 471e3;
  for (int k = 0; k < 22; ++k) {
    NuclearSpinParams s;
    s.a_parallel_hz = 40e3;
    bath.spins.push_back(s);
  }
  const double t = 6e-6;
  auto state = evolve_branches(initial_branched_state(bath), bath, t);
  const double o = std::abs(std::cos(M_PI * 40e3 * t));
  for (int m : {1, 3}) {
    double expected = binary_entropy(0.5 * (1.0 + std::pow(o, m)));
    double sampled = fragment_average_chi(state, m);
    CHECK(sampled == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sampled == fragment_average_chi(state, m));  // deterministic
  }
}

TEST_CASE("fragment validation") {
  Fragment duplicate{{0, 0}}, outside{{4}}, unsorted{{3, 1}};
  CHECK_THROWS_AS(duplicate.validate(4), std::invalid_argument);
  CHECK_THROWS_AS(outside.validate(4), std::invalid_argument);
  CHECK_NOTHROW(unsorted.validate(4));
}
