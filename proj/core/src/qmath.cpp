#include "qdarwin/qmath.hpp"

#include <cmath>

namespace qdarwin {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool all_finite(const Matrix& m) {
  return m.allFinite();
}

}  // namespace

void PureState::validate(double tol) const {
  require(amplitudes.size() > 0, "PureState: empty amplitude vector");
  require(amplitudes.allFinite(), "PureState: non-finite amplitude");
  require(std::abs(amplitudes.norm() - 1.0) <= tol, "PureState: norm != 1");
}

void DensityOperator::validate() const {
  require(matrix.rows() == matrix.cols(), "DensityOperator: matrix not square");
  require(all_finite(matrix), "DensityOperator: non-finite entry");
  long prod = 1;
  for (int d : subsystem_dims) {
    require(d >= 1, "DensityOperator: subsystem dimension < 1");
    prod *= d;
  }
  require(prod == matrix.rows(), "DensityOperator: subsystem dims do not factor the dimension");
  require(is_hermitian(matrix, kHermitianTol), "DensityOperator: not Hermitian");
  require(std::abs(matrix.trace().real() - 1.0) <= kTraceTol &&
              std::abs(matrix.trace().imag()) <= kTraceTol,
          "DensityOperator: trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix, Eigen::EigenvaluesOnly);
  require(solver.eigenvalues().minCoeff() >= -kEigenvalueClamp,
          "DensityOperator: negative eigenvalue beyond clamp");
}

DensityOperator DensityOperator::from_pure(const PureState& psi, std::vector<int> dims) {
  psi.validate();
  if (dims.empty()) dims = {psi.dim()};
  return from_matrix(psi.amplitudes * psi.amplitudes.adjoint(), std::move(dims));
}

DensityOperator DensityOperator::from_matrix(Matrix m, std::vector<int> dims) {
  if (dims.empty()) dims = {static_cast<int>(m.rows())};
  DensityOperator rho{std::move(m), std::move(dims)};
  long prod = 1;
  for (int d : rho.subsystem_dims) prod *= d;
  require(prod == rho.matrix.rows(), "DensityOperator: subsystem dims do not factor the dimension");
  return rho;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  require(all_finite(a) && all_finite(b), "tensor_product: non-finite operand");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  const int n = rho.subsystem_count();
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n) throw std::out_of_range("partial_trace: index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep indices must be strictly increasing");
  }

  std::vector<int> traced;
  for (int s = 0; s < n; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);

  // strides of each subsystem in the flattened index
  std::vector<long> stride(n, 1);
  for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * rho.subsystem_dims[s + 1];

  long keep_dim = 1, traced_dim = 1;
  std::vector<int> keep_dims;
  for (int s : keep) {
    keep_dim *= rho.subsystem_dims[s];
    keep_dims.push_back(rho.subsystem_dims[s]);
  }
  for (int s : traced) traced_dim *= rho.subsystem_dims[s];

  // maps a flat kept (resp. traced) index to its offset in the full index
  auto offset = [&](const std::vector<int>& subs, long flat) {
    long off = 0;
    for (int s = static_cast<int>(subs.size()) - 1; s >= 0; --s) {
      int d = rho.subsystem_dims[subs[s]];
      off += (flat % d) * stride[subs[s]];
      flat /= d;
    }
    return off;
  };

  std::vector<long> keep_offset(keep_dim), traced_offset(traced_dim);
  for (long i = 0; i < keep_dim; ++i) keep_offset[i] = offset(keep, i);
  for (long t = 0; t < traced_dim; ++t) traced_offset[t] = offset(traced, t);

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (long i = 0; i < keep_dim; ++i)
    for (long j = 0; j < keep_dim; ++j) {
      Complex acc = 0.0;
      for (long t = 0; t < traced_dim; ++t)
        acc += rho.matrix(keep_offset[i] + traced_offset[t], keep_offset[j] + traced_offset[t]);
      out(i, j) = acc;
    }

  if (keep_dims.empty()) keep_dims = {1};
  return DensityOperator{std::move(out), std::move(keep_dims)};
}

EigenSystem hermitian_eigensystem(const Matrix& m) {
  if (!is_hermitian(m, 1e-8)) throw std::invalid_argument("hermitian_eigensystem: non-Hermitian input");
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigensystem: decomposition failed");
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

double entropy_of_spectrum(const Eigen::VectorXd& eigenvalues) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    double lambda = eigenvalues(i);
    if (lambda < -kEigenvalueClamp)
      throw std::invalid_argument("entropy_of_spectrum: negative eigenvalue beyond clamp");
    if (lambda <= 0.0) continue;  // clamp and 0 log 0 = 0
    h -= lambda * std::log2(lambda);
  }
  return h;
}

double von_neumann_entropy(const DensityOperator& rho) {
  if (rho.matrix.rows() != rho.matrix.cols() || !is_hermitian(rho.matrix, kHermitianTol))
    throw std::invalid_argument("von_neumann_entropy: invalid density operator");
  if (std::abs(rho.matrix.trace().real() - 1.0) > kTraceTol)
    throw std::invalid_argument("von_neumann_entropy: trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix, Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(solver.eigenvalues());
}

Matrix matrix_fractional_power(const DensityOperator& rho, double c) {
  if (c < 0.0 || c > 1.0) throw std::domain_error("matrix_fractional_power: c outside [0,1]");
  EigenSystem es = hermitian_eigensystem(rho.matrix);
  Eigen::VectorXd powered(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    double lambda = es.values(i);
    if (lambda < -kEigenvalueClamp)
      throw std::invalid_argument("matrix_fractional_power: input not PSD");
    // diagonalization noise within the clamp band counts as kernel; a tiny
    // spurious eigenvalue raised to a small power would otherwise leak O(1)
    if (lambda <= kEigenvalueClamp) {
      powered(i) = 0.0;  // 0^0 = 0 on the clamped kernel
    } else if (c == 0.0) {
      powered(i) = 1.0;  // support projector
    } else {
      powered(i) = std::pow(lambda, c);
    }
  }
  return es.vectors * powered.asDiagonal() * es.vectors.adjoint();
}

Complex overlap(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("overlap: dimension mismatch");
  return a.amplitudes.dot(b.amplitudes);  // Eigen conjugates the left operand
}

Matrix identity_matrix(int n) { return Matrix::Identity(n, n); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix rotation_x(double angle) {
  double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Matrix m(2, 2);
  m << c, Complex(0, -s), Complex(0, -s), c;
  return m;
}

Matrix rotation_y(double angle) {
  double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Matrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

Matrix rotation_z(double angle) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(Complex(0, -angle / 2));
  m(1, 1) = std::exp(Complex(0, angle / 2));
  return m;
}

Matrix hermitian_propagator(const Matrix& h, double t) {
  EigenSystem es = hermitian_eigensystem(h);
  Vector phases(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    phases(i) = std::exp(Complex(0, -es.values(i) * t));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qdarwin
