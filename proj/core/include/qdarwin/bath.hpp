#pragma once

#include <vector>

#include "qdarwin/qmath.hpp"

// Central-spin decoherence model: an electron spin qubit coupled to a
// register of nuclear spins through the parallel hyperfine component,
//   H = 2*pi * S_z * sum_k A_par^k I_z^k,   S_z = |up><up|  (shifted).
// Couplings are stored as ordinary frequencies in Hz; factors of 2*pi enter
// only in matrix exponents. The electron basis is {|up> = m_s=0, |down>},
// system spin first in all tensor orderings.
namespace qdarwin {

inline constexpr double kC13GyromagneticHzPerTesla = 10.705e6;

inline Eigen::Vector2cd ket_up() { return Eigen::Vector2cd(1, 0); }
inline Eigen::Vector2cd ket_down() { return Eigen::Vector2cd(0, 1); }
inline Eigen::Vector2cd ket_plus() { return Eigen::Vector2cd(1, 1) / std::sqrt(2.0); }

struct NuclearSpinParams {
  double a_parallel_hz = 0.0;   // signed, A_par / 2pi
  double a_perp_abs_hz = 0.0;   // |A_perp| / 2pi
  double polarization = 1.0;    // P_k in (0, 1]
  Eigen::Vector2cd initial_state = ket_plus();  // |phi_k> of the initial product state

  void validate() const;
};

struct BathConfig {
  double larmor_hz = 0.0;           // bare 13C precession frequency
  std::vector<NuclearSpinParams> spins;
  double dephasing_rate_hz = 0.0;   // electron dephasing rate gamma, 1/s

  int size() const { return static_cast<int>(spins.size()); }
  void validate() const;

  /// The four-spin register of the bundled dataset: A_par = (93.5, 49.5,
  /// -26.3, -47.1) kHz, |A_perp| = (45.8, 35.3, 22.0, 42.5) kHz, P_k = 0.75,
  /// |+> initial states, Larmor 471.02 kHz (440 G at 10.705 MHz/T).
  static BathConfig four_spin_register();
};

double larmor_from_field_tesla(double field_tesla);

/// Returns a copy with every polarization set to 1 (the "corrected" route).
BathConfig with_unit_polarization(BathConfig bath);

/// Indices of the n strongest-coupled spins by |A_par|, ties by lower index.
std::vector<int> strongest_spins(const BathConfig& bath, int n);

/// The branch decomposition of the pure-dephasing dynamics from a product start:
/// |psi> = sqrt(p_up)|up>|phi_up...> + sqrt(p_down)|down>|phi_down...>, with
/// the electron off-diagonal additionally damped by electron_coherence.
/// Polarizations ride along untouched; they are applied only when a full
/// density operator is assembled.
struct BranchedState {
  double p_up = 0.5;
  double p_down = 0.5;
  Complex electron_coherence = 1.0;
  struct SpinPair {
    Eigen::Vector2cd up, down;
  };
  std::vector<SpinPair> spins;
  std::vector<double> polarizations;

  int size() const { return static_cast<int>(spins.size()); }
  /// <phi_{k|up} | phi_{k|down}>
  Complex conditional_overlap(int k) const;
  void validate() const;
};

// --- pulse sequences -------------------------------------------------------

struct GateEvent {
  enum class Target { kElectron, kNuclear };
  enum class Axis { kX, kY, kZ, kXY };  // kXY rotates about cos(phase) x + sin(phase) y
  enum class Condition {
    kNone,          // unconditional rotation
    kUpOnly,        // acts only in the electron |up> branch
    kDownOnly,      // acts only in the electron |down> branch
    kOppositeSign,  // +angle in |up>, -angle in |down> (the (S_z - 1/2) structure)
  };

  Target target = Target::kElectron;
  int spin = 0;
  Axis axis = Axis::kX;
  double axis_phase_rad = 0.0;
  double angle_rad = 0.0;
  Condition condition = Condition::kNone;
};

using PulseSequence = std::vector<GateEvent>;

/// Composes a sequence acting on (electron ⊗ one nucleus) into a 4x4 unitary.
/// Events apply in list order.
Matrix two_qubit_unitary(const PulseSequence& seq);

void validate_sequence(const PulseSequence& seq, const BathConfig& bath);

// --- model operations ------------------------------------------------------

/// Full 2^(1+N) Hamiltonian of the register in rad/s, diagonal in the
/// computational basis. Throws on dimensions beyond 2^12.
Matrix build_hamiltonian(const BathConfig& bath);

/// Electron in |+>, each nucleus in |phi_k>; p_up = p_down = 1/2, both
/// conditional states equal, coherence 1.
BranchedState initial_branched_state(const BathConfig& bath);

/// Pure-dephasing evolution for time t: the |up> branch of spin k rotates by
/// exp(-i 2 pi A_k t I_z), the |down> branch is frozen, and the electron
/// coherence decays by exp(-gamma t).
BranchedState evolve_branches(const BranchedState& state, const BathConfig& bath, double t);

enum class PolarizationDirection {
  kSynthesize,  // multiply off-diagonals by P (model imperfect initialization)
  kCorrect,     // divide off-diagonals by P (normalize measured data)
};

/// The single-spin polarization map: off-diagonal elements scaled by P or
/// 1/P depending on direction. The two directions are mutual inverses.
DensityOperator polarization_correction(const DensityOperator& rho_spin, double p,
                                        PolarizationDirection direction);

/// Assembles the full 2^(1+N) density operator of a branched state:
/// pointer-diagonal blocks p_s rho_{E|s}, electron off-diagonal block scaled
/// by electron_coherence, with each per-spin factor damped by its P_k
/// (the synthesize direction of polarization_correction).
DensityOperator to_density_operator(const BranchedState& state);

/// Statevector of a branched state with unit coherence and unit
/// polarizations (the pure-state regime).
PureState branched_statevector(const BranchedState& state);

/// Fixed-step RK4 integration of
///   drho/dt = -i[H, rho] + (gamma/2)(Z rho Z - rho),   Z = sigma_z ⊗ 1,
/// which damps electron off-diagonals by exactly exp(-gamma t), matching the
/// branched-path coherence factor. Step size <= 1/(800 max(|A|, gamma)).
DensityOperator evolve_lindblad(const DensityOperator& rho, const BathConfig& bath, double t);

/// Exact propagation of the same master equation, available because the
/// register Hamiltonian is diagonal: phases on all elements, exp(-gamma t) on
/// electron off-diagonal blocks.
DensityOperator evolve_dephasing_exact(const DensityOperator& rho, const BathConfig& bath,
                                       double t);

/// GHZ creation protocol: the n strongest spins are polarized to |0>, the
/// electron is put in |+>, and each target spin receives a conditional
/// R_x(+-pi/2), leaving orthogonal |-y>/|+y> records. Untargeted spins keep
/// their initial state in both branches.
BranchedState ghz_protocol(const BathConfig& bath, int n_spins);

/// Electron coherence after (pi/2 - wait t - pi/2):
/// exp(-gamma t) * prod_k <phi_k| exp(-i 2 pi A_k t I_z) |phi_k>.
Complex ramsey_coherence(const BathConfig& bath, double t);

/// The Ramsey coherence mapped to a population signal in [0, 1].
double ramsey_signal(const BathConfig& bath, double t);

struct EchoResult {
  std::vector<double> taus_s;
  std::vector<double> signal;
  std::vector<double> frequencies_hz;      // DFT bins 0..N/2
  std::vector<double> spectrum_magnitude;  // |DFT| of the mean-subtracted signal
};

/// Loschmidt echo on the n strongest spins: conditional R_x(pi/2) entangling
/// gates around a free evolution in which the two branches precess at
/// nu_L ± A_k/2. The returned trace combines the electron echo coherence
/// (which carries the multi-spin sum frequency near n*nu_L) with the
/// transverse nuclear coherences read out by tomography (which carry the
/// single-spin lines at nu_L ± A_k/2).
EchoResult loschmidt_echo(const BathConfig& bath, int n_spins, const std::vector<double>& taus_s);

}  // namespace qdarwin
