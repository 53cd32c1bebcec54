#include "cqavwc/symmetrize.hpp"

#include <algorithm>
#include <cmath>

#include "cqavwc/lp.hpp"

namespace cqavwc {

StateFamily::StateFamily(std::size_t num_inputs, std::size_t num_states, std::vector<ComplexMatrix> ops)
    : inputs_(num_inputs), states_(num_states), ops_(std::move(ops)) {
  if (inputs_ == 0 || states_ == 0) throw ShapeError("state family: empty input or state alphabet");
  if (ops_.size() != inputs_ * states_)
    throw ShapeError("state family: expected " + std::to_string(inputs_ * states_) + " operators, got " +
                     std::to_string(ops_.size()));
  const Eigen::Index d = ops_.front().rows();
  for (const auto& m : ops_)
    if (m.rows() != d || m.cols() != d) throw ShapeError("state family: operators differ in shape");
}

StateFamily legal_family(const CqavwcChannel& ch) {
  std::vector<ComplexMatrix> ops;
  for (std::size_t x = 0; x < ch.num_inputs(); ++x)
    for (std::size_t t = 0; t < ch.num_states(); ++t) ops.push_back(ch.legal(x, t).matrix());
  return StateFamily(ch.num_inputs(), ch.num_states(), std::move(ops));
}

StateFamily legal_family_at(const CqavwcChannel& ch, std::size_t t) {
  std::vector<ComplexMatrix> ops;
  for (std::size_t x = 0; x < ch.num_inputs(); ++x) ops.push_back(ch.legal(x, t).matrix());
  return StateFamily(ch.num_inputs(), 1, std::move(ops));
}

namespace {

ComplexMatrix mixed(const StateFamily& f, std::size_t x, const std::vector<double>& weights) {
  ComplexMatrix m = ComplexMatrix::Zero(f.dim(), f.dim());
  for (std::size_t t = 0; t < f.num_states(); ++t) m += weights[t] * f.at(x, t);
  return m;
}

void check_rows(const StateFamily& family, const Symmetrizer& u) {
  if (u.rows.size() != family.num_inputs())
    throw LabelError("symmetrizer has " + std::to_string(u.rows.size()) + " rows, family has " +
                     std::to_string(family.num_inputs()) + " inputs");
  for (const auto& row : u.rows)
    if (row.size() != family.num_states()) throw LabelError("symmetrizer row is not supported on the state alphabet");
}

}  // namespace

double verify_symmetrizer(const StateFamily& family, const Symmetrizer& u) {
  check_rows(family, u);
  double worst = 0.0;
  for (std::size_t x = 0; x < family.num_inputs(); ++x) {
    for (std::size_t xp = x + 1; xp < family.num_inputs(); ++xp) {
      const ComplexMatrix lhs = mixed(family, xp, u.rows[x]);
      const ComplexMatrix rhs = mixed(family, x, u.rows[xp]);
      worst = std::max(worst, trace_norm(lhs - rhs));
    }
  }
  return worst;
}

SymmetrizabilityVerdict check_symmetrizable(const StateFamily& family, double tol_sym) {
  const std::size_t nx = family.num_inputs();
  const std::size_t nt = family.num_states();
  const Eigen::Index d = family.dim();

  SymmetrizabilityVerdict out;
  if (nx == 1) {
    // No pair to check.
    out.symmetrizable = true;
    out.best.rows.assign(1, std::vector<double>(nt, 1.0 / static_cast<double>(nt)));
    out.certificate = out.best;
    return out;
  }

  // Variables: u(x,t) at x*nt + t, then s.
  const Eigen::Index nu = static_cast<Eigen::Index>(nx * nt);
  const Eigen::Index nvar = nu + 1;
  const std::size_t pairs = nx * (nx - 1) / 2;
  const std::size_t entries = static_cast<std::size_t>(d * (d + 1) / 2);
  // Real and imaginary part per entry, two sides of |.| each.
  const Eigen::Index rows = static_cast<Eigen::Index>(pairs * entries * 4);

  lp::LinearProgram prog;
  prog.c = Eigen::VectorXd::Zero(nvar);
  prog.c(nu) = 1.0;
  prog.a_ub = Eigen::MatrixXd::Zero(rows, nvar);
  prog.b_ub = Eigen::VectorXd::Zero(rows);
  prog.a_eq = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nx), nvar);
  prog.b_eq = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(nx));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t t = 0; t < nt; ++t) prog.a_eq(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x * nt + t)) = 1.0;

  Eigen::Index r = 0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t xp = x + 1; xp < nx; ++xp) {
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) {
          for (int part = 0; part < 2; ++part) {
            // coefficient row of sum_t u(x,t) rho_{x',t}[i,j] - sum_t u(x',t) rho_{x,t}[i,j]
            Eigen::VectorXd a = Eigen::VectorXd::Zero(nvar);
            for (std::size_t t = 0; t < nt; ++t) {
              const Complex lhs = family.at(xp, t)(i, j);
              const Complex rhs = family.at(x, t)(i, j);
              a(static_cast<Eigen::Index>(x * nt + t)) += part == 0 ? lhs.real() : lhs.imag();
              a(static_cast<Eigen::Index>(xp * nt + t)) -= part == 0 ? rhs.real() : rhs.imag();
            }
            a(nu) = -1.0;
            prog.a_ub.row(r++) = a.transpose();
            a.head(nu) *= -1.0;
            prog.a_ub.row(r++) = a.transpose();
          }
        }
      }
    }
  }

  const lp::Result res = lp::solve(prog);
  if (res.status != lp::Status::optimal)
    throw Error("check_symmetrizable: linear program did not reach an optimum");

  out.best.rows.assign(nx, std::vector<double>(nt, 0.0));
  for (std::size_t x = 0; x < nx; ++x) {
    double sum = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
      out.best.rows[x][t] = std::max(0.0, res.x(static_cast<Eigen::Index>(x * nt + t)));
      sum += out.best.rows[x][t];
    }
    for (auto& w : out.best.rows[x]) w /= sum;
  }
  out.max_entry_violation = res.x(nu);
  out.residual = verify_symmetrizer(family, out.best);
  out.symmetrizable = out.residual <= tol_sym;
  if (out.symmetrizable) out.certificate = out.best;
  return out;
}

}  // namespace cqavwc
