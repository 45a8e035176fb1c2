#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

// Dense complex linear algebra for small Hilbert spaces (dim <= 2^12):
// tensor products, partial trace, Hermitian eigendecomposition, entropy
// and matrix functions. Entropies are in bits (log2) throughout; the
// Chernoff machinery in metrics.hpp is the only place natural logs appear.
namespace qdarwin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxHilbertDim = 1 << 12;

// numerical tolerances shared by the state validators
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenvalueClamp = 1e-10;
inline constexpr double kPureNormTol = 1e-12;

/// Normalized state vector.
struct PureState {
  Vector amplitudes;

  int dim() const { return static_cast<int>(amplitudes.size()); }
  void validate(double tol = kPureNormTol) const;
};

/// Hermitian, unit-trace, positive-semidefinite operator together with the
/// tensor factorization of its Hilbert space. subsystem_dims holds the factor
/// dimensions in order (system spin first, nuclear spins in register order);
/// their product must equal the matrix dimension.
struct DensityOperator {
  Matrix matrix;
  std::vector<int> subsystem_dims;

  int dim() const { return static_cast<int>(matrix.rows()); }
  int subsystem_count() const { return static_cast<int>(subsystem_dims.size()); }

  // Throws std::invalid_argument when any invariant fails (Hermiticity and
  // trace within 1e-10, eigenvalues >= -1e-10).
  void validate() const;

  static DensityOperator from_pure(const PureState& psi, std::vector<int> dims = {});
  static DensityOperator from_matrix(Matrix m, std::vector<int> dims = {});
};

struct EigenSystem {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // corresponding columns
};

/// Kronecker product with a's indices outermost.
Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);

/// Reduced state on the kept subsystems, order preserved. keep must be a
/// strictly increasing list of valid subsystem indices.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

/// Eigendecomposition of a Hermitian matrix (checked to 1e-8), eigenvalues
/// ascending. Reconstruction residual is below 1e-9 at the dimensions used here.
EigenSystem hermitian_eigensystem(const Matrix& m);

/// -sum lambda log2 lambda over the spectrum, 0 log 0 = 0. Eigenvalues in
/// [-1e-10, 0) are clamped to zero; anything below that fails validation.
double von_neumann_entropy(const DensityOperator& rho);

/// rho^c = V diag(lambda^c) V+ for c in [0,1], with 0^0 = 0 on clamped zero
/// eigenvalues, so rho^0 is the projector onto the support of rho. The whole
/// clamp band |lambda| <= 1e-10 counts as kernel.
Matrix matrix_fractional_power(const DensityOperator& rho, double c);

/// Inner product <a|b>, conjugate-linear in the first argument.
Complex overlap(const PureState& a, const PureState& b);

// --- small fixed operators and gate helpers ------------------------------

Matrix identity_matrix(int n);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// Bloch rotations exp(-i angle sigma/2)
Matrix rotation_x(double angle);
Matrix rotation_y(double angle);
Matrix rotation_z(double angle);

/// exp(-i h t) for Hermitian h, via eigendecomposition.
Matrix hermitian_propagator(const Matrix& h, double t);

/// Binary entropy h2(p) in bits.
double binary_entropy(double p);

/// Entropy in bits of a nonnegative spectrum (clamping as above).
double entropy_of_spectrum(const Eigen::VectorXd& eigenvalues);

bool is_hermitian(const Matrix& m, double tol);

}  // namespace qdarwin
