#include "qdarwin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qdarwin {

namespace {

constexpr uint64_t kFragmentSampleSeed = 20200715;
constexpr int kMaxExactEnumeration = 20;
constexpr int kSampleCount = 2000;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Eigen::Matrix2cd damp_offdiagonal(const Eigen::Matrix2cd& m, double p) {
  Eigen::Matrix2cd out = m;
  out(0, 1) *= p;
  out(1, 0) *= p;
  return out;
}

Eigen::Matrix2cd conditional_matrix(const BranchedState& state, int k, bool up) {
  const auto& v = up ? state.spins[k].up : state.spins[k].down;
  return damp_offdiagonal(v * v.adjoint(), state.polarizations[k]);
}

Matrix kron_chain(const std::vector<Eigen::Matrix2cd>& factors) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& f : factors) out = tensor_product(out, Matrix(f));
  return out;
}

double entropy_of_matrix(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(solver.eigenvalues());
}

bool fragment_is_pure(const BranchedState& state, const Fragment& fragment) {
  for (int k : fragment.indices)
    if (state.polarizations[k] != 1.0) return false;
  return true;
}

// entropy of p0 |a><a| + p1 |b><b| with overlap o = <a|b>
double rank2_mixture_entropy(double p0, double p1, double abs_overlap) {
  const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * p0 * p1 * (1.0 - abs_overlap * abs_overlap)));
  return binary_entropy(0.5 * (1.0 + disc));
}

// enumerate size-m subsets of {0..n-1} in lexicographic order
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

}  // namespace

void Fragment::validate(int bath_size) const {
  for (size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] >= 0 && indices[i] < bath_size, "Fragment: index outside bath");
    for (size_t j = i + 1; j < indices.size(); ++j)
      require(indices[i] != indices[j], "Fragment: duplicate index");
  }
}

void InfoBreakdown::validate() const {
  require(std::abs(mutual_information_bits - (holevo_bits + discord_bits)) < 1e-9,
          "InfoBreakdown: I != chi + D");
  require(holevo_bits >= -1e-9, "InfoBreakdown: negative Holevo information");
  require(mutual_information_bits >= -1e-9, "InfoBreakdown: negative mutual information");
}

double pointer_entropy(const BranchedState& state) { return binary_entropy(state.p_up); }

double holevo(const BranchedState& state, const Fragment& fragment, HolevoMethod method) {
  fragment.validate(state.size());
  if (fragment.size() == 0) return 0.0;  // empty fragment carries nothing by convention

  const bool pure = fragment_is_pure(state, fragment);
  if (method == HolevoMethod::kClosedForm && !pure)
    throw std::invalid_argument("holevo: closed form requires unit polarizations on the fragment");
  if (method == HolevoMethod::kClosedForm || (method == HolevoMethod::kAuto && pure)) {
    // conditional fragment states are pure products; the mixture has rank 2
    Complex o = 1.0;
    for (int k : fragment.indices) o *= state.conditional_overlap(k);
    return rank2_mixture_entropy(state.p_up, state.p_down, std::abs(o));
  }

  std::vector<Eigen::Matrix2cd> up_f, down_f;
  for (int k : fragment.indices) {
    up_f.push_back(conditional_matrix(state, k, true));
    down_f.push_back(conditional_matrix(state, k, false));
  }
  Matrix rho_up = kron_chain(up_f);
  Matrix rho_down = kron_chain(down_f);
  Matrix mix = state.p_up * rho_up + state.p_down * rho_down;
  return entropy_of_matrix(mix) - state.p_up * entropy_of_matrix(rho_up) -
         state.p_down * entropy_of_matrix(rho_down);
}

double holevo(const DensityOperator& rho_sf) {
  require(!rho_sf.subsystem_dims.empty() && rho_sf.subsystem_dims[0] == 2,
          "holevo: system qubit must be the first subsystem");
  const long df = rho_sf.dim() / 2;
  Matrix b_up = rho_sf.matrix.block(0, 0, df, df);
  Matrix b_down = rho_sf.matrix.block(df, df, df, df);
  const double p_up = b_up.trace().real();
  const double p_down = b_down.trace().real();
  double chi = entropy_of_matrix(b_up + b_down);
  if (p_up > 0) chi -= p_up * entropy_of_matrix(b_up / p_up);
  if (p_down > 0) chi -= p_down * entropy_of_matrix(b_down / p_down);
  return chi;
}

double mutual_information(const DensityOperator& rho_sf) {
  require(rho_sf.subsystem_count() >= 2, "mutual_information: need system and fragment factors");
  std::vector<int> fragment_subsystems(rho_sf.subsystem_count() - 1);
  for (size_t i = 0; i < fragment_subsystems.size(); ++i)
    fragment_subsystems[i] = static_cast<int>(i) + 1;
  const double h_s = von_neumann_entropy(partial_trace(rho_sf, {0}));
  const double h_f = von_neumann_entropy(partial_trace(rho_sf, fragment_subsystems));
  const double h_sf = von_neumann_entropy(rho_sf);
  return h_s + h_f - h_sf;
}

double discord(const DensityOperator& rho_sf) { return mutual_information(rho_sf) - holevo(rho_sf); }

double discord(const BranchedState& state, const Fragment& fragment) {
  auto joint = fragment_joint_state(state, fragment);
  return mutual_information(joint) - holevo(joint);
}

DensityOperator fragment_joint_state(const BranchedState& state, const Fragment& fragment) {
  state.validate();
  fragment.validate(state.size());

  Complex traced_overlap = 1.0;
  std::vector<bool> in_fragment(state.size(), false);
  for (int k : fragment.indices) in_fragment[k] = true;
  for (int k = 0; k < state.size(); ++k)
    if (!in_fragment[k])
      traced_overlap *= state.spins[k].down.dot(state.spins[k].up);  // tr |u><d|

  std::vector<Eigen::Matrix2cd> up_f, down_f, cross_f;
  for (int k : fragment.indices) {
    up_f.push_back(conditional_matrix(state, k, true));
    down_f.push_back(conditional_matrix(state, k, false));
    cross_f.push_back(
        damp_offdiagonal(state.spins[k].up * state.spins[k].down.adjoint(), state.polarizations[k]));
  }
  const long df = 1L << fragment.size();
  Matrix rho = Matrix::Zero(2 * df, 2 * df);
  rho.block(0, 0, df, df) = state.p_up * kron_chain(up_f);
  rho.block(df, df, df, df) = state.p_down * kron_chain(down_f);
  const Complex c =
      std::sqrt(state.p_up * state.p_down) * state.electron_coherence * traced_overlap;
  Matrix cross = kron_chain(cross_f);
  rho.block(0, df, df, df) = c * cross;
  rho.block(df, 0, df, df) = std::conj(c) * cross.adjoint();

  std::vector<int> dims(1 + fragment.size(), 2);
  return DensityOperator{std::move(rho), std::move(dims)};
}

InfoBreakdown info_breakdown(const BranchedState& state, const Fragment& fragment) {
  auto joint = fragment_joint_state(state, fragment);
  InfoBreakdown out = info_breakdown(joint);
  // branch-path Holevo; the complement keeps the direct evaluation, so
  // validate() cross-checks the two routes through the I = chi + D identity
  out.holevo_bits = holevo(state, fragment);
  out.validate();
  return out;
}

InfoBreakdown info_breakdown(const DensityOperator& rho_sf) {
  InfoBreakdown out;
  const long df = rho_sf.dim() / 2;
  Matrix b_up = rho_sf.matrix.block(0, 0, df, df);
  Matrix b_down = rho_sf.matrix.block(df, df, df, df);
  out.p_up = b_up.trace().real();
  out.p_down = b_down.trace().real();
  out.h_f_given_up_bits = out.p_up > 0 ? entropy_of_matrix(b_up / out.p_up) : 0.0;
  out.h_f_given_down_bits = out.p_down > 0 ? entropy_of_matrix(b_down / out.p_down) : 0.0;

  std::vector<int> fragment_subsystems(rho_sf.subsystem_count() - 1);
  for (size_t i = 0; i < fragment_subsystems.size(); ++i)
    fragment_subsystems[i] = static_cast<int>(i) + 1;
  out.h_s_bits = von_neumann_entropy(partial_trace(rho_sf, {0}));
  out.h_f_bits = von_neumann_entropy(partial_trace(rho_sf, fragment_subsystems));
  out.h_sf_bits = von_neumann_entropy(rho_sf);
  out.mutual_information_bits = out.h_s_bits + out.h_f_bits - out.h_sf_bits;

  const double chi_direct = out.h_f_bits - out.p_up * out.h_f_given_up_bits -
                            out.p_down * out.h_f_given_down_bits;
  out.holevo_bits = chi_direct;
  out.discord_bits = out.mutual_information_bits - chi_direct;
  out.validate();
  return out;
}

double fragment_average_chi(const BranchedState& state, int m, HolevoMethod method) {
  const int n = state.size();
  if (m < 0 || m > n) throw std::invalid_argument("fragment_average_chi: size out of range");
  if (m == 0) return 0.0;

  if (n <= kMaxExactEnumeration) {
    std::vector<int> combo(m);
    for (int i = 0; i < m; ++i) combo[i] = i;
    double sum = 0.0;
    long count = 0;
    do {
      sum += holevo(state, Fragment{combo}, method);
      ++count;
    } while (next_combination(combo, n));
    return sum / static_cast<double>(count);
  }

  // large environments: uniform random size-m subsets, fixed seed
  std::mt19937_64 rng(kFragmentSampleSeed);
  std::vector<int> pool(n);
  double sum = 0.0;
  for (int s = 0; s < kSampleCount; ++s) {
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < m; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<int> idx(pool.begin(), pool.begin() + m);
    std::sort(idx.begin(), idx.end());
    sum += holevo(state, Fragment{idx}, method);
  }
  return sum / kSampleCount;
}

RedundancyResult redundancy(const BranchedState& state, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("redundancy: delta outside (0,1)");
  RedundancyResult out;
  out.delta = delta;
  const int n = state.size();
  const double threshold = (1.0 - delta) * pointer_entropy(state);
  out.chi_curve.resize(n + 1);
  for (int m = 0; m <= n; ++m) out.chi_curve[m] = fragment_average_chi(state, m);
  for (int m = 1; m <= n; ++m) {
    if (out.chi_curve[m] >= threshold) {
      out.attainable = true;
      out.f_delta = m;
      out.redundancy = static_cast<double>(n) / m;
      break;
    }
  }
  return out;
}

double chernoff_overlap(const DensityOperator& rho0, const DensityOperator& rho1, double c) {
  if (c < 0.0 || c > 1.0) throw std::domain_error("chernoff_overlap: c outside [0,1]");
  require(rho0.dim() == rho1.dim(), "chernoff_overlap: dimension mismatch");
  Matrix a = matrix_fractional_power(rho0, c);
  Matrix b = matrix_fractional_power(rho1, 1.0 - c);
  return (a * b).trace().real();
}

double chernoff_information(const DensityOperator& rho0, const DensityOperator& rho1) {
  require(rho0.dim() == rho1.dim(), "chernoff_information: dimension mismatch");

  // spectral data once; Q(c) = sum_ij w0_i(c) w1_j(1-c) |<v0_i|v1_j>|^2
  EigenSystem e0 = hermitian_eigensystem(rho0.matrix);
  EigenSystem e1 = hermitian_eigensystem(rho1.matrix);
  const Eigen::Index d = e0.values.size();
  Eigen::MatrixXd gram(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      gram(i, j) = std::norm(e0.vectors.col(i).dot(e1.vectors.col(j)));

  auto weight = [](double lambda, double c) {
    if (lambda <= kEigenvalueClamp) return 0.0;  // clamp band counts as kernel
    if (c == 0.0) return 1.0;                    // support projector
    return std::pow(lambda, c);
  };
  auto q = [&](double c) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double w0 = weight(std::max(e0.values(i), 0.0), c);
      if (w0 == 0.0) continue;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double w1 = weight(std::max(e1.values(j), 0.0), 1.0 - c);
        if (w1 == 0.0) continue;
        acc += w0 * w1 * gram(i, j);
      }
    }
    return acc;
  };

  // golden-section on the convex overlap, endpoints included
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double c1 = hi - inv_phi * (hi - lo), c2 = lo + inv_phi * (hi - lo);
  double q1 = q(c1), q2 = q(c2);
  while (hi - lo > 1e-8) {
    if (q1 <= q2) {
      hi = c2;
      c2 = c1;
      q2 = q1;
      c1 = hi - inv_phi * (hi - lo);
      q1 = q(c1);
    } else {
      lo = c1;
      c1 = c2;
      q1 = q2;
      c2 = lo + inv_phi * (hi - lo);
      q2 = q(c2);
    }
  }
  double q_min = std::min({q(0.0), q(1.0), q1, q2});
  if (q_min <= 0.0) return std::numeric_limits<double>::infinity();  // orthogonal supports
  return -std::log(q_min);
}

RecordCount record_count(double xi_bar_nats, int n_env, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("record_count: delta outside (0,1)");
  require(xi_bar_nats >= 0.0, "record_count: negative Chernoff information");
  require(n_env >= 0, "record_count: negative environment size");
  RecordCount out;
  out.value = xi_bar_nats * static_cast<double>(n_env) / std::log(1.0 / delta);
  out.exceeds_environment = out.value > static_cast<double>(n_env);
  return out;
}

}  // namespace qdarwin
