#pragma once

#include <iosfwd>

#include "qdarwin/bath.hpp"

// Adaptive-XY dynamical decoupling filter design. Each composite pi-pulse is
// a symmetric five-pulse block; the inner pulse times are fractions theta1,
// theta2 of the filter period 2*tau (the center pulse sits at the quarter
// period). The harmonic coefficients of the resulting modulation function are
//   f_k = 4/(pi k) [ sum_{j=1,2} (-1)^j ((-1)^k - 1) sin(2 pi k theta_j)
//                    + sin(k pi/2) ],
// so even harmonics vanish identically and the design problem is the root
// system f_1 = f_DD, f_3 = 0 over 0 < theta1 < theta2 < 1/2.
namespace qdarwin {

struct FilterDesign {
  double f_dd = 0;
  double theta1 = 0;
  double theta2 = 0;
  double tau1_s = 0;   // theta1 / omega_dd
  double tau2_s = 0;   // (theta2 - theta1) / omega_dd
  double tau3_s = 0;   // 1 / (4 omega_dd)
  double omega_dd_hz = 0;  // 1 / (2 tau)
  double tau_s = 0;        // interpulse spacing
  double residual_f1 = 0;  // |f1(theta) - f_dd| after the solve
  double residual_f3 = 0;  // |f3(theta)|
};

struct EffectiveCoupling {
  double strength_hz = 0;  // f_dd * A_perp / 2
  int target_spin = 0;
};

/// Filter coefficient f_k for k in 1..4.
double filter_coefficient(double theta1, double theta2, int k);

/// Largest representable |f_dd|: (16 cos(pi/9) - 8) / pi.
double coupling_bound();

/// Throws std::domain_error (with the bound in the message) when |f_dd|
/// reaches or exceeds coupling_bound().
void validate_coupling(double f_dd);

/// Solves f_1 = f_dd, f_3 = 0 by a damped Newton iteration seeded from a
/// 64x64 grid scan. All distinct roots inside the ordered domain are
/// collected; designs whose five-pulse block fits the half period
/// (theta2 <= 1/4) are preferred, then the smallest theta2 - theta1, then
/// the smaller theta1. Throws std::runtime_error when the target admits no
/// root (not every value below coupling_bound() does; see the no-root tests).
FilterDesign solve_timings(double f_dd, double tau_s);

/// Resonant effective two-qubit Hamiltonian (electron x nucleus) in Hz:
/// (f_dd A_perp / 2) (S_z - 1/2) I_x.
Matrix effective_hamiltonian(double f_dd, const NuclearSpinParams& spin);

EffectiveCoupling effective_coupling(double f_dd, const NuclearSpinParams& spin, int target_spin);

/// Interpulse spacing resonant with the hyperfine-shifted precession:
/// omega_dd = nu_L + A_par/2, so tau = 1 / (2 (nu_L + A_par/2)).
double resonance_spacing(double larmor_hz, double a_parallel_hz);

struct EntanglingGate {
  Matrix unitary;      // 4x4, electron outermost
  double angle_rad;    // accumulated conditional rotation in the up branch
  double duration_s;   // 8 * repetitions * tau
};

/// Propagator of the effective Hamiltonian over an AXY8^N train of duration
/// 8 N tau: conditional x-rotations by +-angle with
/// angle = (pi/2) f_dd A_perp T.
EntanglingGate entangling_gate(const FilterDesign& design, const NuclearSpinParams& spin,
                               double repetitions);

/// Repetition count accumulating the requested conditional angle. Errors on
/// zero effective coupling with a nonzero angle.
double repetitions_for_angle(const FilterDesign& design, const NuclearSpinParams& spin,
                             double angle_rad);

/// Pulse sequence composing the symmetric and asymmetric entangling gates
/// with electron basis changes into an iSwap,
/// exp(i pi/2 sx Ix) exp(i pi/2 sy Iy).
PulseSequence iswap_sequence(const FilterDesign& design, int spin_index);

/// CSV export, header "f_dd,theta1,theta2,tau1_s,tau2_s,tau3_s,tau_s",
/// 12 significant digits.
void write_timing_table_csv(std::ostream& os, const std::vector<FilterDesign>& designs);

}  // namespace qdarwin
