#include "qdarwin/axy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace qdarwin {

namespace {

constexpr int kGridPoints = 64;
constexpr int kNewtonSeeds = 48;
constexpr double kResidualTol = 1e-12;

struct Root {
  double theta1, theta2;
};

double f1(double t1, double t2) {
  return 4.0 / M_PI * (2.0 * std::sin(2.0 * M_PI * t1) - 2.0 * std::sin(2.0 * M_PI * t2) + 1.0);
}

double f3(double t1, double t2) {
  return 4.0 / (3.0 * M_PI) *
         (2.0 * std::sin(6.0 * M_PI * t1) - 2.0 * std::sin(6.0 * M_PI * t2) - 1.0);
}

bool inside_domain(double t1, double t2) {
  return t1 > 1e-9 && t2 < 0.5 - 1e-9 && t1 < t2;
}

// damped Newton on (f1 - target, f3) with the analytic Jacobian
bool newton_solve(double target, double& t1, double& t2) {
  for (int it = 0; it < 100; ++it) {
    const double r1 = f1(t1, t2) - target;
    const double r3 = f3(t1, t2);
    if (std::abs(r1) < kResidualTol && std::abs(r3) < kResidualTol) return true;
    const double j11 = 16.0 * std::cos(2.0 * M_PI * t1);
    const double j12 = -16.0 * std::cos(2.0 * M_PI * t2);
    const double j21 = 16.0 * std::cos(6.0 * M_PI * t1);
    const double j22 = -16.0 * std::cos(6.0 * M_PI * t2);
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-12) return false;
    const double d1 = (j22 * r1 - j12 * r3) / det;
    const double d2 = (-j21 * r1 + j11 * r3) / det;
    double damp = 1.0;
    bool stepped = false;
    while (damp > 1e-6) {
      const double n1 = t1 - damp * d1, n2 = t2 - damp * d2;
      if (inside_domain(n1, n2)) {
        const double g1 = f1(n1, n2) - target, g3 = f3(n1, n2);
        if (g1 * g1 + g3 * g3 < r1 * r1 + r3 * r3) {
          t1 = n1;
          t2 = n2;
          stepped = true;
          break;
        }
      }
      damp *= 0.5;
    }
    if (!stepped) return false;
  }
  return false;
}

}  // namespace

double filter_coefficient(double theta1, double theta2, int k) {
  if (k < 1 || k > 4) throw std::domain_error("filter_coefficient: harmonic outside 1..4");
  if (!(theta1 > 0.0 && theta1 < 0.5 && theta2 > 0.0 && theta2 < 0.5))
    throw std::domain_error("filter_coefficient: theta outside (0, 1/2)");
  const double parity = (k % 2 == 0) ? 0.0 : -2.0;  // (-1)^k - 1
  double sum = 0.0;
  const double th[2] = {theta1, theta2};
  for (int j = 1; j <= 2; ++j)
    sum += ((j % 2 == 0) ? 1.0 : -1.0) * parity * std::sin(2.0 * M_PI * k * th[j - 1]);
  sum += std::sin(k * M_PI / 2.0);
  return 4.0 / (M_PI * k) * sum;
}

double coupling_bound() { return (16.0 * std::cos(M_PI / 9.0) - 8.0) / M_PI; }

void validate_coupling(double f_dd) {
  if (!std::isfinite(f_dd) || std::abs(f_dd) >= coupling_bound()) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "effective coupling out of range: |f_dd| = %.6g reaches the bound %.12g",
                  std::abs(f_dd), coupling_bound());
    throw std::domain_error(msg);
  }
}

FilterDesign solve_timings(double f_dd, double tau_s) {
  validate_coupling(f_dd);
  if (!(tau_s > 0.0)) throw std::domain_error("solve_timings: tau must be positive");

  // grid scan for seeds
  struct Seed {
    double r, t1, t2;
  };
  std::vector<Seed> seeds;
  seeds.reserve(kGridPoints * kGridPoints / 2);
  for (int i = 1; i < kGridPoints; ++i) {
    for (int j = i + 1; j < kGridPoints; ++j) {
      const double t1 = 0.5 * i / kGridPoints;
      const double t2 = 0.5 * j / kGridPoints;
      const double r1 = f1(t1, t2) - f_dd;
      const double r3 = f3(t1, t2);
      seeds.push_back({r1 * r1 + r3 * r3, t1, t2});
    }
  }
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.r < b.r; });

  std::vector<Root> roots;
  const int tries = std::min<int>(kNewtonSeeds, static_cast<int>(seeds.size()));
  for (int s = 0; s < tries; ++s) {
    double t1 = seeds[s].t1, t2 = seeds[s].t2;
    if (!newton_solve(f_dd, t1, t2)) continue;
    if (!inside_domain(t1, t2)) continue;
    bool duplicate = false;
    for (const Root& r : roots)
      if (std::abs(r.theta1 - t1) < 1e-8 && std::abs(r.theta2 - t2) < 1e-8) duplicate = true;
    if (!duplicate) roots.push_back({t1, t2});
  }
  if (roots.empty()) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "solve_timings: no (theta1, theta2) root in the ordered domain for f_dd = %.6g",
                  f_dd);
    throw std::runtime_error(msg);
  }

  // prefer designs whose pulse block fits the half period, then the
  // shortest inner delay, then the smaller theta1
  auto better = [](const Root& a, const Root& b) {
    const bool fits_a = a.theta2 <= 0.25 + 1e-12;
    const bool fits_b = b.theta2 <= 0.25 + 1e-12;
    if (fits_a != fits_b) return fits_a;
    const double da = a.theta2 - a.theta1, db = b.theta2 - b.theta1;
    if (std::abs(da - db) > 1e-12) return da < db;
    return a.theta1 < b.theta1;
  };
  Root best = roots[0];
  for (const Root& r : roots)
    if (better(r, best)) best = r;

  FilterDesign design;
  design.f_dd = f_dd;
  design.theta1 = best.theta1;
  design.theta2 = best.theta2;
  design.tau_s = tau_s;
  design.omega_dd_hz = 1.0 / (2.0 * tau_s);
  design.tau1_s = best.theta1 / design.omega_dd_hz;
  design.tau2_s = (best.theta2 - best.theta1) / design.omega_dd_hz;
  design.tau3_s = 1.0 / (4.0 * design.omega_dd_hz);
  design.residual_f1 = std::abs(f1(best.theta1, best.theta2) - f_dd);
  design.residual_f3 = std::abs(f3(best.theta1, best.theta2));
  return design;
}

Matrix effective_hamiltonian(double f_dd, const NuclearSpinParams& spin) {
  validate_coupling(f_dd);
  Matrix sz_shifted = Matrix::Zero(2, 2);
  sz_shifted(0, 0) = 0.5;   // S_z - 1/2 on |up>
  sz_shifted(1, 1) = -0.5;  // and |down>
  Matrix ix = 0.5 * pauli_x();
  return 0.5 * f_dd * spin.a_perp_abs_hz * tensor_product(sz_shifted, ix);
}

EffectiveCoupling effective_coupling(double f_dd, const NuclearSpinParams& spin, int target_spin) {
  validate_coupling(f_dd);
  return EffectiveCoupling{0.5 * f_dd * spin.a_perp_abs_hz, target_spin};
}

double resonance_spacing(double larmor_hz, double a_parallel_hz) {
  const double effective = larmor_hz + 0.5 * a_parallel_hz;
  if (!(effective > 0.0))
    throw std::domain_error("resonance_spacing: non-positive effective frequency");
  return 1.0 / (2.0 * effective);
}

EntanglingGate entangling_gate(const FilterDesign& design, const NuclearSpinParams& spin,
                               double repetitions) {
  if (repetitions < 0) throw std::invalid_argument("entangling_gate: negative repetition count");
  const double duration = 8.0 * repetitions * design.tau_s;
  const double angle = 0.5 * M_PI * design.f_dd * spin.a_perp_abs_hz * duration;
  Matrix u = hermitian_propagator(2.0 * M_PI * effective_hamiltonian(design.f_dd, spin), duration);
  return EntanglingGate{std::move(u), angle, duration};
}

double repetitions_for_angle(const FilterDesign& design, const NuclearSpinParams& spin,
                             double angle_rad) {
  const double per_repetition = 0.5 * M_PI * design.f_dd * spin.a_perp_abs_hz * 8.0 * design.tau_s;
  if (per_repetition == 0.0) {
    if (angle_rad == 0.0) return 0.0;
    throw std::invalid_argument("repetitions_for_angle: zero coupling with nonzero requested angle");
  }
  return angle_rad / per_repetition;
}

PulseSequence iswap_sequence(const FilterDesign& design, int spin_index) {
  validate_coupling(design.f_dd);
  // exp(i pi/4 sz(x)sx) and exp(i pi/4 sz(x)sy) are the conditional gates with
  // up-branch angle -pi/2; electron basis changes rotate sz into sx / sy.
  using T = GateEvent::Target;
  using A = GateEvent::Axis;
  using C = GateEvent::Condition;
  const double q = M_PI / 2;
  return PulseSequence{
      {T::kElectron, 0, A::kX, 0.0, q, C::kNone},
      {T::kNuclear, spin_index, A::kY, 0.0, -q, C::kOppositeSign},
      {T::kElectron, 0, A::kX, 0.0, -q, C::kNone},
      {T::kElectron, 0, A::kY, 0.0, -q, C::kNone},
      {T::kNuclear, spin_index, A::kX, 0.0, -q, C::kOppositeSign},
      {T::kElectron, 0, A::kY, 0.0, q, C::kNone},
  };
}

void write_timing_table_csv(std::ostream& os, const std::vector<FilterDesign>& designs) {
  os << "f_dd,theta1,theta2,tau1_s,tau2_s,tau3_s,tau_s\n";
  char line[256];
  for (const FilterDesign& d : designs) {
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", d.f_dd,
                  d.theta1, d.theta2, d.tau1_s, d.tau2_s, d.tau3_s, d.tau_s);
    os << line;
  }
}

}  // namespace qdarwin
