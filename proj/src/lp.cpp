#include "cqavwc/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cqavwc::lp {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;
constexpr int kMaxIterations = 100000;

class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double& at(Eigen::Index i, Eigen::Index j) { return t_(i, j); }
  double rhs(Eigen::Index i) const { return t_(i, cols()); }
  double& rhs(Eigen::Index i) { return t_(i, cols()); }
  double cost(Eigen::Index j) const { return t_(rows(), j); }
  double& cost(Eigen::Index j) { return t_(rows(), j); }
  std::vector<Eigen::Index>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Runs simplex iterations over columns [0, allowed). Returns false if
  // unbounded.
  Status optimize(Eigen::Index allowed, int& iterations) {
    while (true) {
      if (++iterations > kMaxIterations) return Status::iteration_limit;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (cost(j) < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(i) / a;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis_[i] < basis_[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return Status::unbounded;
      pivot(leave, enter);
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

Result solve(const LinearProgram& p) {
  const Eigen::Index n = p.c.size();
  const Eigen::Index m_ub = p.a_ub.rows();
  const Eigen::Index m_eq = p.a_eq.rows();
  if ((m_ub > 0 && p.a_ub.cols() != n) || (m_eq > 0 && p.a_eq.cols() != n) || p.b_ub.size() != m_ub ||
      p.b_eq.size() != m_eq)
    throw std::invalid_argument("lp::solve: inconsistent problem dimensions");

  const Eigen::Index m = m_ub + m_eq;
  // Rows that need an artificial variable: equalities and flipped
  // inequalities (b < 0).
  std::vector<bool> needs_art(static_cast<std::size_t>(m), false);
  Eigen::Index n_art = 0;
  for (Eigen::Index i = 0; i < m_ub; ++i)
    if (p.b_ub(i) < 0.0) needs_art[i] = true;
  for (Eigen::Index i = 0; i < m_eq; ++i) needs_art[m_ub + i] = true;
  for (bool b : needs_art) n_art += b ? 1 : 0;

  const Eigen::Index slack0 = n;
  const Eigen::Index art0 = n + m_ub;
  const Eigen::Index total = art0 + n_art;
  Tableau tab(m, total);

  Eigen::Index next_art = art0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool is_ub = i < m_ub;
    const double b = is_ub ? p.b_ub(i) : p.b_eq(i - m_ub);
    const double sign = b < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) tab.at(i, j) = sign * (is_ub ? p.a_ub(i, j) : p.a_eq(i - m_ub, j));
    if (is_ub) tab.at(i, slack0 + i) = sign;
    tab.rhs(i) = sign * b;
    if (needs_art[i]) {
      tab.at(i, next_art) = 1.0;
      tab.basis()[i] = next_art++;
    } else {
      tab.basis()[i] = slack0 + i;
    }
  }

  Result res;
  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!needs_art[i]) continue;
      for (Eigen::Index j = 0; j < art0; ++j) tab.cost(j) -= tab.at(i, j);
      tab.rhs(m) -= tab.rhs(i);
    }
    const Status s = tab.optimize(total, res.iterations);
    if (s == Status::iteration_limit) {
      res.status = s;
      return res;
    }
    if (-tab.rhs(m) > 1e-9) {
      res.status = Status::infeasible;
      return res;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basis()[i] < art0) continue;
      for (Eigen::Index j = 0; j < art0; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 objective row.
  for (Eigen::Index j = 0; j <= total; ++j) tab.at(m, j) = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) tab.cost(j) = p.c(j);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = tab.basis()[i];
    const double cb = bj < n ? p.c(bj) : 0.0;
    if (cb == 0.0) continue;
    for (Eigen::Index j = 0; j <= total; ++j) tab.at(m, j) -= cb * tab.at(i, j);
  }
  res.status = tab.optimize(art0, res.iterations);
  if (res.status != Status::optimal) return res;

  res.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = tab.basis()[i];
    if (bj < n) res.x(bj) = std::max(0.0, tab.rhs(i));
  }
  res.objective = p.c.dot(res.x);
  return res;
}

}  // namespace cqavwc::lp
