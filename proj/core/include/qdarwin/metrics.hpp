#pragma once

#include "qdarwin/bath.hpp"

// Information-theoretic quantities over fragments of the nuclear environment:
// mutual information I = H_S + H_F - H_SF, the Holevo bound
// chi = H_F - sum_s p_s H_{F|s} for the pointer (S_z) measurement, discord as
// the complement I - chi, fragment-size averages, redundancy and the quantum
// Chernoff bound. Entropies are in bits; Chernoff exponents are in nats.
namespace qdarwin {

/// Subset of bath spin indices an observer intercepts.
struct Fragment {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  void validate(int bath_size) const;  // no duplicates, in range
};

struct InfoBreakdown {
  double mutual_information_bits = 0;
  double holevo_bits = 0;
  double discord_bits = 0;
  double h_s_bits = 0, h_f_bits = 0, h_sf_bits = 0;
  double p_up = 0, p_down = 0;
  double h_f_given_up_bits = 0, h_f_given_down_bits = 0;

  // Decomposition identity |I - (chi + D)| < 1e-9 plus nonnegativity of I and chi.
  void validate() const;
};

struct RedundancyResult {
  double delta = 0;
  bool attainable = false;
  int f_delta = 0;              // smallest average fragment size meeting the bound
  double redundancy = 0;        // #E / f_delta when attainable
  std::vector<double> chi_curve;  // averaged chi, indexed by fragment size m = 0..#E
};

struct RecordCount {
  double value = 0;
  bool exceeds_environment = false;  // asymptotic formula overshooting #E
};

enum class HolevoMethod {
  kAuto,           // closed form when every fragment polarization is 1, else matrices
  kClosedForm,     // rank-2 analytic route (pure conditional products only)
  kDensityMatrix,  // explicit 2^|F| mixture diagonalization
};

/// Entropy of the pointer variable, h2(p_up).
double pointer_entropy(const BranchedState& state);

/// Holevo information of a fragment for the branched state.
double holevo(const BranchedState& state, const Fragment& fragment,
              HolevoMethod method = HolevoMethod::kAuto);

/// Holevo information from an explicit joint state (system qubit first):
/// conditional states are the normalized pointer-diagonal blocks.
double holevo(const DensityOperator& rho_sf);

/// I(S:F) for a joint state with the system as subsystem 0.
double mutual_information(const DensityOperator& rho_sf);

/// Quantum discord as the complement I - chi (no basis optimization).
double discord(const DensityOperator& rho_sf);
double discord(const BranchedState& state, const Fragment& fragment);

/// Joint density operator of the system and a fragment, traced analytically
/// from the branched form (spins outside the fragment contribute their
/// conditional overlaps to the electron coherence block).
DensityOperator fragment_joint_state(const BranchedState& state, const Fragment& fragment);

/// All information measures for one fragment. holevo_bits uses the branch path;
/// discord complements the direct conditional-entropy evaluation, so the
/// identity check in validate() compares the two chi routes.
InfoBreakdown info_breakdown(const BranchedState& state, const Fragment& fragment);
InfoBreakdown info_breakdown(const DensityOperator& rho_sf);

/// Mean Holevo information over fragments of size m: exact enumeration of all
/// C(#E, m) subsets up to #E = 20, seeded uniform sampling (2000 subsets)
/// beyond that.
double fragment_average_chi(const BranchedState& state, int m,
                            HolevoMethod method = HolevoMethod::kAuto);

/// Smallest average fragment size with <chi> >= (1 - delta) H(pointer), and
/// the redundancy #E / f_delta. Unattainable thresholds are reported in the
/// result, not as errors.
RedundancyResult redundancy(const BranchedState& state, double delta);

/// tr(rho0^c rho1^(1-c)) with the support-projector convention at the
/// exponent endpoints.
double chernoff_overlap(const DensityOperator& rho0, const DensityOperator& rho1, double c);

/// Quantum Chernoff information -ln min_c tr(rho0^c rho1^(1-c)) in nats,
/// golden-section minimization over c in [0,1] to 1e-8, endpoints included.
/// Orthogonal supports give +infinity.
double chernoff_information(const DensityOperator& rho0, const DensityOperator& rho1);

/// Asymptotic record count xi_bar * n_env / ln(1/delta).
RecordCount record_count(double xi_bar_nats, int n_env, double delta);

}  // namespace qdarwin
