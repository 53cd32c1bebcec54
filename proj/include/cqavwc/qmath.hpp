#pragma once

#include <complex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqavwc/errors.hpp"

namespace cqavwc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double herm = 1e-9;
inline constexpr double trace = 1e-9;
inline constexpr double psd = 1e-9;
inline constexpr double spec = 1e-8;
inline constexpr double kernel = 1e-10;
}  // namespace tol

/**
 * A validated density operator: Hermitian, positive semidefinite and of unit
 * trace, each within the tolerances in `tol`.
 *
 * The stored matrix is the Hermitian part of the input, so downstream
 * eigensolvers never see the (tolerated) anti-Hermitian residue.
 */
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m);

  /// Names of the invariants `m` violates, with the measured quantity.
  /// Empty iff `DensityOperator(m)` would succeed.
  static std::vector<std::string> violations(const ComplexMatrix& m);

  static DensityOperator maximally_mixed(Eigen::Index dim);
  static DensityOperator pure(const Eigen::VectorXcd& psi);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  struct Unchecked {};
  DensityOperator(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
  friend DensityOperator assume_density(ComplexMatrix m);

  ComplexMatrix m_;
};

/// Wraps a matrix the caller has constructed to be a state (convex mixtures
/// and tensor products of validated states). Skips validation.
DensityOperator assume_density(ComplexMatrix m);

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

SpectralDecomposition spectral_decomposition(const ComplexMatrix& hermitian);

/// Shannon entropy in bits of a spectrum, clipping entries to [0, 1] and
/// treating 0 log 0 as 0.
double entropy_bits(std::span<const double> spectrum);

double von_neumann_entropy(const DensityOperator& rho);

/// Sum of singular values. Hermitian inputs take the eigenvalue route.
double trace_norm(const ComplexMatrix& a);

/// Kronecker product a (x) b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Applies lambda -> lambda^exponent on the support of a PSD matrix.
/// Eigenvalues below tol::kernel are mapped to zero, which makes negative
/// exponents act as pseudo-inverse powers.
ComplexMatrix psd_power(const ComplexMatrix& a, double exponent);

bool is_hermitian(const ComplexMatrix& a, double tolerance = tol::herm);

struct GentleDamage {
  double distance;  // || rho - sqrt(X) rho sqrt(X) ||_1
  double bound;     // sqrt(8 lambda), lambda = 1 - tr(rho X)
};

/// Disturbance of `rho` by the measurement operator `x` (0 <= x <= id)
/// together with the gentle-measurement bound.
GentleDamage gentle_damage(const DensityOperator& rho, const ComplexMatrix& x);

struct FannesGap {
  double entropy_gap;
  std::optional<double> bound;  // absent when ||x - y||_1 >= 1/e
  double trace_distance;
};

FannesGap fannes_gap(const DensityOperator& x, const DensityOperator& y);

/// Haar-random unitary via QR of a complex Ginibre matrix.
ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);

/// Random full-rank state G G^dagger / tr(G G^dagger), G complex Ginibre.
DensityOperator random_density(Eigen::Index dim, std::mt19937_64& rng);

}  // namespace cqavwc
