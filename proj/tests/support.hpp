#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cqavwc/channel.hpp"
#include "cqavwc/qmath.hpp"

namespace testing {

using cqavwc::ComplexMatrix;

inline std::string data_path(const std::string& name) { return std::string(CQAVWC_TEST_DATA) + "/" + name; }

inline ComplexMatrix ket(std::initializer_list<cqavwc::Complex> v) {
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) psi(i++) = c;
  psi.normalize();
  return psi * psi.adjoint();
}

inline ComplexMatrix diag(std::initializer_list<double> v) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) d(i++) = c;
  return d.cast<cqavwc::Complex>().asDiagonal();
}

inline ComplexMatrix mixed(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim); }

inline ComplexMatrix depolarize(const ComplexMatrix& rho, double p) {
  return (1.0 - p) * rho + p * mixed(rho.rows());
}

inline std::vector<std::string> labels(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::to_string(i));
  return out;
}

using StateFn = std::function<ComplexMatrix(std::size_t x, std::size_t t)>;

/// Channel with inputs "0".."nx-1" and states "0".."nt-1".
inline cqavwc::CqavwcChannel channel(std::size_t nx, std::size_t nt, const StateFn& legal, const StateFn& eve) {
  std::vector<std::vector<ComplexMatrix>> l(nx), e(nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t t = 0; t < nt; ++t) {
      l[x].push_back(legal(x, t));
      e[x].push_back(eve(x, t));
    }
  return cqavwc::CqavwcChannel::from_states(labels(nx), labels(nt), l, e);
}

inline ComplexMatrix random_state(Eigen::Index dim, std::mt19937_64& rng) {
  return cqavwc::random_density(dim, rng).matrix();
}

/// Binary entropy in bits.
inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Trace norm from singular values, independent of the library's routine.
inline double trace_norm_of(const cqavwc::ComplexMatrix& a) {
  Eigen::JacobiSVD<cqavwc::ComplexMatrix> svd(a);
  return svd.singularValues().sum();
}

/// Kronecker product by explicit loops.
inline cqavwc::ComplexMatrix kron(const cqavwc::ComplexMatrix& a, const cqavwc::ComplexMatrix& b) {
  cqavwc::ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace testing
