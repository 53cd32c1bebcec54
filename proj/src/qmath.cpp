#include "cqavwc/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqavwc {

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) / 2.0;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

bool is_hermitian(const ComplexMatrix& a, double tolerance) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

std::vector<std::string> DensityOperator::violations(const ComplexMatrix& m) {
  std::vector<std::string> out;
  if (m.rows() == 0 || m.rows() != m.cols()) {
    out.push_back("square: shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    return out;
  }
  if (!m.allFinite()) {
    out.push_back("finite: non-finite entry");
    return out;
  }
  const double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol::herm) out.push_back("hermitian: max |A - A^dagger| = " + fmt_double(herm_err));

  const Complex tr = m.trace();
  if (std::abs(tr.real() - 1.0) > tol::trace || std::abs(tr.imag()) > tol::trace)
    out.push_back("unit_trace: trace = " + fmt_double(tr.real()));

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol::psd) out.push_back("psd: min eigenvalue = " + fmt_double(min_eig));
  return out;
}

DensityOperator::DensityOperator(const ComplexMatrix& m) {
  auto v = violations(m);
  if (!v.empty()) {
    std::string msg = "invalid density operator:";
    for (const auto& s : v) msg += " [" + s + "]";
    throw ValidationError(msg);
  }
  m_ = hermitian_part(m);
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  if (dim <= 0) throw ShapeError("maximally_mixed: dimension must be positive");
  return DensityOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), Unchecked{});
}

DensityOperator DensityOperator::pure(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw ShapeError("pure: zero vector");
  Eigen::VectorXcd v = psi / norm;
  return DensityOperator(v * v.adjoint(), Unchecked{});
}

DensityOperator assume_density(ComplexMatrix m) {
  return DensityOperator(hermitian_part(m), DensityOperator::Unchecked{});
}

SpectralDecomposition spectral_decomposition(const ComplexMatrix& hermitian) {
  if (hermitian.rows() != hermitian.cols())
    throw ShapeError("spectral_decomposition: matrix is not square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(hermitian));
  const Eigen::Index n = hermitian.rows();
  SpectralDecomposition out{RealVector(n), ComplexMatrix(n, n)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = es.eigenvalues()(n - 1 - k);
    out.eigenvectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

double entropy_bits(std::span<const double> spectrum) {
  double s = 0.0;
  for (double l : spectrum) {
    l = std::clamp(l, 0.0, 1.0);
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  return entropy_bits(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
}

double trace_norm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("trace_norm: matrix is not square");
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (is_hermitian(a, 1e-14 * scale)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues().sum();
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) throw ShapeError("tensor: operands must be square");
  const Eigen::Index da = a.rows();
  const Eigen::Index db = b.rows();
  ComplexMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a(i, j) * b;
  return out;
}

ComplexMatrix psd_power(const ComplexMatrix& a, double exponent) {
  if (a.rows() != a.cols()) throw ShapeError("psd_power: matrix is not square");
  if (!is_hermitian(a)) throw PsdError("psd_power: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
  const RealVector& ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -tol::psd)
    throw PsdError("psd_power: negative eigenvalue " + fmt_double(ev.minCoeff()));
  RealVector f(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    f(k) = ev(k) < tol::kernel ? 0.0 : std::pow(ev(k), exponent);
  const ComplexMatrix& u = es.eigenvectors();
  return u * f.cast<Complex>().asDiagonal() * u.adjoint();
}

GentleDamage gentle_damage(const DensityOperator& rho, const ComplexMatrix& x) {
  if (x.rows() != rho.dim() || x.cols() != rho.dim())
    throw ShapeError("gentle_damage: operator dimension does not match state");
  if (!is_hermitian(x)) throw OperatorRangeError("gentle_damage: X is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::psd)
    throw OperatorRangeError("gentle_damage: X is not positive (min eigenvalue " +
                             fmt_double(es.eigenvalues().minCoeff()) + ")");
  if (es.eigenvalues().maxCoeff() > 1.0 + tol::psd)
    throw OperatorRangeError("gentle_damage: X exceeds identity (max eigenvalue " +
                             fmt_double(es.eigenvalues().maxCoeff()) + ")");

  const double lambda = std::clamp(1.0 - (rho.matrix() * x).trace().real(), 0.0, 1.0);
  const ComplexMatrix root = psd_power(x, 0.5);
  const ComplexMatrix damaged = root * rho.matrix() * root;
  return {trace_norm(rho.matrix() - damaged), std::sqrt(8.0 * lambda)};
}

FannesGap fannes_gap(const DensityOperator& x, const DensityOperator& y) {
  if (x.dim() != y.dim()) throw ShapeError("fannes_gap: dimension mismatch");
  const double gap = std::abs(von_neumann_entropy(x) - von_neumann_entropy(y));
  const double mu = trace_norm(x.matrix() - y.matrix());
  FannesGap out{gap, std::nullopt, mu};
  if (mu < 1.0 / std::exp(1.0)) {
    const double d = static_cast<double>(x.dim());
    out.bound = mu > 0.0 ? mu * std::log2(d) - mu * std::log2(mu) : 0.0;
  }
  return out;
}

namespace {

ComplexMatrix ginibre(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace

ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  // Fix column phases so the distribution is Haar.
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

DensityOperator random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(dim, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return assume_density(std::move(m));
}

}  // namespace cqavwc
