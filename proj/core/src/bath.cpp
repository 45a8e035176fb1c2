#include "qdarwin/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdarwin {

namespace {

constexpr int kMaxQubits = 12;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_register_size(int n_qubits) {
  if (n_qubits > kMaxQubits)
    throw std::runtime_error("register dimension overflow: more than 2^12 states");
}

Eigen::Matrix2cd damp_offdiagonal(const Eigen::Matrix2cd& m, double p) {
  Eigen::Matrix2cd out = m;
  out(0, 1) *= p;
  out(1, 0) *= p;
  return out;
}

// kron of a list of 2x2 factors, first factor outermost
Matrix kron_chain(const std::vector<Eigen::Matrix2cd>& factors) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& f : factors) out = tensor_product(out, Matrix(f));
  return out;
}

Eigen::Vector2cd precess_z(const Eigen::Vector2cd& state, double freq_hz, double t) {
  const double half = M_PI * freq_hz * t;  // theta/2 with theta = 2 pi f t
  Eigen::Vector2cd out;
  out(0) = std::exp(Complex(0, -half)) * state(0);
  out(1) = std::exp(Complex(0, half)) * state(1);
  return out;
}

Eigen::Matrix2cd rotation_2x2(GateEvent::Axis axis, double phase, double angle) {
  switch (axis) {
    case GateEvent::Axis::kX:
      return rotation_x(angle);
    case GateEvent::Axis::kY:
      return rotation_y(angle);
    case GateEvent::Axis::kZ:
      return rotation_z(angle);
    case GateEvent::Axis::kXY: {
      // exp(-i angle (cos(phase) sx + sin(phase) sy) / 2)
      Eigen::Matrix2cd gen =
          std::cos(phase) * Eigen::Matrix2cd(pauli_x()) + std::sin(phase) * Eigen::Matrix2cd(pauli_y());
      double c = std::cos(angle / 2), s = std::sin(angle / 2);
      return c * Eigen::Matrix2cd::Identity() - Complex(0, s) * gen;
    }
  }
  throw std::invalid_argument("rotation_2x2: bad axis");
}

}  // namespace

void NuclearSpinParams::validate() const {
  require(a_perp_abs_hz >= 0.0, "NuclearSpinParams: a_perp must be a magnitude");
  require(polarization > 0.0 && polarization <= 1.0, "NuclearSpinParams: polarization outside (0,1]");
  require(std::isfinite(a_parallel_hz), "NuclearSpinParams: non-finite coupling");
  require(std::abs(initial_state.norm() - 1.0) <= kPureNormTol,
          "NuclearSpinParams: initial state not normalized");
}

void BathConfig::validate() const {
  require(larmor_hz > 0.0, "BathConfig: larmor frequency must be positive");
  require(dephasing_rate_hz >= 0.0, "BathConfig: negative dephasing rate");
  require(!spins.empty(), "BathConfig: at least one spin required");
  for (const auto& s : spins) s.validate();
}

BathConfig BathConfig::four_spin_register() {
  BathConfig bath;
  bath.larmor_hz = larmor_from_field_tesla(0.044);  // 440 G
  bath.dephasing_rate_hz = 25e3;
  const double a_par[4] = {93.5e3, 49.5e3, -26.3e3, -47.1e3};
  const double a_perp[4] = {45.8e3, 35.3e3, 22.0e3, 42.5e3};
  for (int k = 0; k < 4; ++k) {
    NuclearSpinParams s;
    s.a_parallel_hz = a_par[k];
    s.a_perp_abs_hz = a_perp[k];
    s.polarization = 0.75;
    bath.spins.push_back(s);
  }
  return bath;
}

double larmor_from_field_tesla(double field_tesla) {
  return kC13GyromagneticHzPerTesla * field_tesla;
}

BathConfig with_unit_polarization(BathConfig bath) {
  for (auto& s : bath.spins) s.polarization = 1.0;
  return bath;
}

std::vector<int> strongest_spins(const BathConfig& bath, int n) {
  if (n < 0 || n > bath.size())
    throw std::invalid_argument("strongest_spins: count exceeds bath size");
  std::vector<int> idx(bath.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(bath.spins[a].a_parallel_hz) > std::abs(bath.spins[b].a_parallel_hz);
  });
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Complex BranchedState::conditional_overlap(int k) const {
  return spins.at(k).up.dot(spins.at(k).down);  // conjugates the up branch
}

void BranchedState::validate() const {
  require(std::abs(p_up + p_down - 1.0) <= 1e-12, "BranchedState: branch probabilities must sum to 1");
  require(p_up >= 0 && p_down >= 0, "BranchedState: negative branch probability");
  require(polarizations.size() == spins.size(), "BranchedState: polarization list size mismatch");
  for (const auto& pair : spins) {
    require(std::abs(pair.up.norm() - 1.0) <= 1e-10, "BranchedState: up branch not normalized");
    require(std::abs(pair.down.norm() - 1.0) <= 1e-10, "BranchedState: down branch not normalized");
  }
  for (double p : polarizations)
    require(p > 0.0 && p <= 1.0, "BranchedState: polarization outside (0,1]");
}

Matrix two_qubit_unitary(const PulseSequence& seq) {
  Matrix u = identity_matrix(4);
  for (const auto& ev : seq) {
    require(std::isfinite(ev.angle_rad) && std::isfinite(ev.axis_phase_rad),
            "GateEvent: non-finite angle");
    Eigen::Matrix2cd r = rotation_2x2(ev.axis, ev.axis_phase_rad, ev.angle_rad);
    Matrix step;
    if (ev.target == GateEvent::Target::kElectron) {
      require(ev.condition == GateEvent::Condition::kNone, "GateEvent: conditioned electron pulse");
      step = tensor_product(Matrix(r), identity_matrix(2));
    } else {
      Eigen::Matrix2cd up = Eigen::Matrix2cd::Identity(), down = Eigen::Matrix2cd::Identity();
      switch (ev.condition) {
        case GateEvent::Condition::kNone:
          up = down = r;
          break;
        case GateEvent::Condition::kUpOnly:
          up = r;
          break;
        case GateEvent::Condition::kDownOnly:
          down = r;
          break;
        case GateEvent::Condition::kOppositeSign:
          up = r;
          down = rotation_2x2(ev.axis, ev.axis_phase_rad, -ev.angle_rad);
          break;
      }
      step = Matrix::Zero(4, 4);
      step.block(0, 0, 2, 2) = up;
      step.block(2, 2, 2, 2) = down;
    }
    u = step * u;
  }
  return u;
}

void validate_sequence(const PulseSequence& seq, const BathConfig& bath) {
  for (const auto& ev : seq) {
    require(std::isfinite(ev.angle_rad), "GateEvent: non-finite angle");
    if (ev.target == GateEvent::Target::kNuclear)
      require(ev.spin >= 0 && ev.spin < bath.size(), "GateEvent: spin index outside bath");
  }
}

Matrix build_hamiltonian(const BathConfig& bath) {
  bath.validate();
  const int n = bath.size();
  check_register_size(1 + n);
  const long dim = 1L << (1 + n);
  Matrix h = Matrix::Zero(dim, dim);
  for (long b = 0; b < dim; ++b) {
    const bool electron_up = ((b >> n) & 1) == 0;
    if (!electron_up) continue;  // shifted S_z: the |down> sector carries no coupling
    double e = 0.0;
    for (int k = 0; k < n; ++k) {
      const bool bit = ((b >> (n - 1 - k)) & 1) != 0;
      e += 2.0 * M_PI * bath.spins[k].a_parallel_hz * (bit ? -0.5 : 0.5);
    }
    h(b, b) = e;
  }
  return h;
}

BranchedState initial_branched_state(const BathConfig& bath) {
  bath.validate();
  BranchedState state;
  state.p_up = state.p_down = 0.5;
  state.electron_coherence = 1.0;
  for (const auto& s : bath.spins) {
    state.spins.push_back({s.initial_state, s.initial_state});
    state.polarizations.push_back(s.polarization);
  }
  return state;
}

BranchedState evolve_branches(const BranchedState& state, const BathConfig& bath, double t) {
  if (t < 0) throw std::invalid_argument("evolve_branches: negative time");
  require(state.size() == bath.size(), "evolve_branches: state/bath size mismatch");
  BranchedState out = state;
  for (int k = 0; k < state.size(); ++k)
    out.spins[k].up = precess_z(state.spins[k].up, bath.spins[k].a_parallel_hz, t);
  out.electron_coherence *= std::exp(-bath.dephasing_rate_hz * t);
  return out;
}

DensityOperator polarization_correction(const DensityOperator& rho_spin, double p,
                                        PolarizationDirection direction) {
  if (!(p > 0.0) || p > 1.0) throw std::domain_error("polarization_correction: p outside (0,1]");
  require(rho_spin.dim() == 2, "polarization_correction: expects a single-spin state");
  const double factor = direction == PolarizationDirection::kSynthesize ? p : 1.0 / p;
  Matrix m = rho_spin.matrix;
  m(0, 1) *= factor;
  m(1, 0) *= factor;
  return DensityOperator{std::move(m), rho_spin.subsystem_dims};
}

DensityOperator to_density_operator(const BranchedState& state) {
  state.validate();
  const int n = state.size();
  check_register_size(1 + n);
  const long env_dim = 1L << n;

  std::vector<Eigen::Matrix2cd> up_f, down_f, cross_f;
  for (int k = 0; k < n; ++k) {
    const double p = state.polarizations[k];
    const auto& u = state.spins[k].up;
    const auto& d = state.spins[k].down;
    up_f.push_back(damp_offdiagonal(u * u.adjoint(), p));
    down_f.push_back(damp_offdiagonal(d * d.adjoint(), p));
    cross_f.push_back(damp_offdiagonal(u * d.adjoint(), p));
  }
  Matrix r_up = kron_chain(up_f);
  Matrix r_down = kron_chain(down_f);
  Matrix cross = kron_chain(cross_f);

  const Complex c = std::sqrt(state.p_up * state.p_down) * state.electron_coherence;
  Matrix rho = Matrix::Zero(2 * env_dim, 2 * env_dim);
  rho.block(0, 0, env_dim, env_dim) = state.p_up * r_up;
  rho.block(env_dim, env_dim, env_dim, env_dim) = state.p_down * r_down;
  rho.block(0, env_dim, env_dim, env_dim) = c * cross;
  rho.block(env_dim, 0, env_dim, env_dim) = std::conj(c) * cross.adjoint();

  std::vector<int> dims(1 + n, 2);
  return DensityOperator{std::move(rho), std::move(dims)};
}

PureState branched_statevector(const BranchedState& state) {
  require(std::abs(std::abs(state.electron_coherence) - 1.0) <= 1e-12,
          "branched_statevector: state is not pure (decayed coherence)");
  const int n = state.size();
  check_register_size(1 + n);
  Vector up = Vector::Ones(1), down = Vector::Ones(1);
  for (int k = 0; k < n; ++k) {
    up = tensor_product(up, Vector(state.spins[k].up));
    down = tensor_product(down, Vector(state.spins[k].down));
  }
  Vector psi(2 * up.size());
  psi.head(up.size()) = std::sqrt(state.p_up) * up;
  psi.tail(down.size()) = std::sqrt(state.p_down) * state.electron_coherence * down;
  return PureState{psi};
}

DensityOperator evolve_lindblad(const DensityOperator& rho, const BathConfig& bath, double t) {
  if (t < 0) throw std::invalid_argument("evolve_lindblad: negative time");
  require(rho.dim() == (1L << (1 + bath.size())), "evolve_lindblad: state dim does not match bath");
  if (t == 0.0) return rho;

  const Matrix h = build_hamiltonian(bath);
  const double gamma = bath.dephasing_rate_hz;
  Matrix z = tensor_product(pauli_z(), identity_matrix(rho.dim() / 2));

  double rate = gamma;
  for (const auto& s : bath.spins) rate = std::max(rate, std::abs(s.a_parallel_hz));
  const double max_step = rate > 0 ? 1.0 / (800.0 * rate) : t;
  const long steps = std::max(1L, static_cast<long>(std::ceil(t / max_step)));
  const double dt = t / static_cast<double>(steps);
  if (!std::isfinite(dt) || dt <= 0.0)
    throw std::runtime_error("evolve_lindblad: integrator step-size failure");

  auto deriv = [&](const Matrix& m) -> Matrix {
    Matrix out = Complex(0, -1) * (h * m - m * h);
    if (gamma > 0) out += 0.5 * gamma * (z * m * z - m);
    return out;
  };

  Matrix m = rho.matrix;
  for (long s = 0; s < steps; ++s) {
    Matrix k1 = deriv(m);
    Matrix k2 = deriv(m + 0.5 * dt * k1);
    Matrix k3 = deriv(m + 0.5 * dt * k2);
    Matrix k4 = deriv(m + dt * k3);
    m += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!m.allFinite()) throw std::runtime_error("evolve_lindblad: integration diverged");
  }
  return DensityOperator{std::move(m), rho.subsystem_dims};
}

DensityOperator evolve_dephasing_exact(const DensityOperator& rho, const BathConfig& bath,
                                       double t) {
  if (t < 0) throw std::invalid_argument("evolve_dephasing_exact: negative time");
  require(rho.dim() == (1L << (1 + bath.size())),
          "evolve_dephasing_exact: state dim does not match bath");
  const Matrix h = build_hamiltonian(bath);
  const long dim = rho.dim();
  const long env = dim / 2;
  const double damp = std::exp(-bath.dephasing_rate_hz * t);
  Matrix out(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) {
      Complex phase = std::exp(Complex(0, -(h(i, i).real() - h(j, j).real()) * t));
      bool electron_differs = (i < env) != (j < env);
      out(i, j) = rho.matrix(i, j) * phase * (electron_differs ? damp : 1.0);
    }
  return DensityOperator{std::move(out), rho.subsystem_dims};
}

BranchedState ghz_protocol(const BathConfig& bath, int n_spins) {
  bath.validate();
  if (n_spins < 0 || n_spins > bath.size())
    throw std::invalid_argument("ghz_protocol: n_spins exceeds bath size");
  std::vector<int> targets = strongest_spins(bath, n_spins);

  BranchedState state = initial_branched_state(bath);
  const Eigen::Matrix2cd plus_rot = rotation_x(M_PI / 2);   // |0> -> |-y>
  const Eigen::Matrix2cd minus_rot = rotation_x(-M_PI / 2); // |0> -> |+y>
  for (int k : targets) {
    state.spins[k].up = plus_rot * ket_up();
    state.spins[k].down = minus_rot * ket_up();
  }
  return state;
}

Complex ramsey_coherence(const BathConfig& bath, double t) {
  if (t < 0) throw std::invalid_argument("ramsey_coherence: negative time");
  bath.validate();
  Complex acc = std::exp(-bath.dephasing_rate_hz * t);
  for (const auto& s : bath.spins) {
    Eigen::Vector2cd rotated = precess_z(s.initial_state, s.a_parallel_hz, t);
    acc *= s.initial_state.dot(rotated);
  }
  return acc;
}

double ramsey_signal(const BathConfig& bath, double t) {
  return 0.5 * (1.0 + ramsey_coherence(bath, t).real());
}

EchoResult loschmidt_echo(const BathConfig& bath, int n_spins, const std::vector<double>& taus_s) {
  bath.validate();
  if (taus_s.size() < 8) throw std::invalid_argument("loschmidt_echo: fewer than 8 sweep points");
  const double dt = taus_s[1] - taus_s[0];
  require(dt > 0, "loschmidt_echo: sweep must be increasing");
  for (size_t i = 1; i < taus_s.size(); ++i)
    require(std::abs((taus_s[i] - taus_s[i - 1]) - dt) <= 1e-9 * dt,
            "loschmidt_echo: non-uniform sweep spacing");

  std::vector<int> targets = strongest_spins(bath, n_spins);
  const Eigen::Matrix2cd gate_up = rotation_x(M_PI / 2);
  const Eigen::Matrix2cd gate_down = rotation_x(-M_PI / 2);

  EchoResult result;
  result.taus_s = taus_s;
  result.signal.reserve(taus_s.size());
  for (double tau : taus_s) {
    Complex echo = 1.0;
    double tomography = 0.0;
    for (int k : targets) {
      const double f_up = bath.larmor_hz + 0.5 * bath.spins[k].a_parallel_hz;
      const double f_down = bath.larmor_hz - 0.5 * bath.spins[k].a_parallel_hz;
      // entangle, free precession, disentangle
      Eigen::Vector2cd mid_up = precess_z(gate_up * ket_up(), f_up, tau);
      Eigen::Vector2cd mid_down = precess_z(gate_down * ket_up(), f_down, tau);
      Eigen::Vector2cd final_up = gate_down * mid_up;
      Eigen::Vector2cd final_down = gate_up * mid_down;
      echo *= final_down.dot(final_up);
      // transverse single-spin coherence probed before the disentangling gate
      auto sx = [](const Eigen::Vector2cd& v) { return 2.0 * (std::conj(v(0)) * v(1)).real(); };
      tomography += 0.5 * (sx(mid_up) + sx(mid_down));
    }
    result.signal.push_back(0.5 * (1.0 + echo.real()) + 0.25 * tomography);
  }

  // magnitude spectrum of the mean-subtracted signal
  const size_t n = result.signal.size();
  const double mean = std::accumulate(result.signal.begin(), result.signal.end(), 0.0) / n;
  for (size_t m = 0; m <= n / 2; ++m) {
    Complex acc = 0.0;
    for (size_t j = 0; j < n; ++j)
      acc += (result.signal[j] - mean) * std::exp(Complex(0, -2.0 * M_PI * double(m) * double(j) / double(n)));
    result.frequencies_hz.push_back(double(m) / (double(n) * dt));
    result.spectrum_magnitude.push_back(std::abs(acc));
  }
  return result;
}

}  // namespace qdarwin
