#pragma once

#include <random>

#include "qdarwin/qmath.hpp"

// shared generators for randomized tests; everything takes an explicit
// engine so test runs are reproducible
namespace test_util {

using qdarwin::Complex;
using qdarwin::Matrix;
using qdarwin::Vector;

inline Vector random_state_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  v /= v.norm();
  return v;
}

inline qdarwin::PureState random_pure_state(int dim, std::mt19937_64& rng) {
  return {random_state_vector(dim, rng)};
}

// random density operator via a normalized Wishart-style construction
inline qdarwin::DensityOperator random_density(int dim, std::mt19937_64& rng,
                                               std::vector<int> dims = {}) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return qdarwin::DensityOperator::from_matrix(rho, std::move(dims));
}

// Haar-ish random unitary from the QR decomposition of a Ginibre matrix
inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

}  // namespace test_util
