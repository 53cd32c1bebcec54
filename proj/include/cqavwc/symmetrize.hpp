#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqavwc/channel.hpp"

namespace cqavwc {

/// States rho_{x,t} laid out [x][t]; the single-receiver family the
/// symmetrizability condition is stated for.
class StateFamily {
 public:
  StateFamily(std::size_t num_inputs, std::size_t num_states, std::vector<ComplexMatrix> ops);

  std::size_t num_inputs() const noexcept { return inputs_; }
  std::size_t num_states() const noexcept { return states_; }
  Eigen::Index dim() const noexcept { return ops_.empty() ? 0 : ops_.front().rows(); }
  const ComplexMatrix& at(std::size_t x, std::size_t t) const { return ops_.at(x * states_ + t); }

 private:
  std::size_t inputs_;
  std::size_t states_;
  std::vector<ComplexMatrix> ops_;
};

/// Joint legal family {rho_{x,t} : x in X, t in Theta}.
StateFamily legal_family(const CqavwcChannel& ch);
/// Legal family at a fixed state t: {rho_{x,t} : x in X}, a single-state family.
StateFamily legal_family_at(const CqavwcChannel& ch, std::size_t t);

/// Rows U(.|x), each a probability vector over Theta.
struct Symmetrizer {
  std::vector<std::vector<double>> rows;
};

struct SymmetrizabilityVerdict {
  bool symmetrizable = false;
  std::optional<Symmetrizer> certificate;
  /// Max over pairs of the trace-norm mismatch at the best U found.
  double residual = 0.0;
  /// Optimal value of the entrywise min-max program.
  double max_entry_violation = 0.0;
  /// The optimizing U whether or not it certifies symmetrizability.
  Symmetrizer best;
};

inline constexpr double kDefaultSymTolerance = 1e-7;

/**
 * Decides whether there are distributions U(.|x) on Theta with
 *   sum_t U(t|x) rho_{x',t} = sum_t U(t|x') rho_{x,t}   for all x, x'.
 *
 * Solves min s subject to |entry violation| <= s for the real and imaginary
 * parts of every upper-triangular entry of every unordered pair, plus the
 * simplex constraints on each row. The family is declared symmetrizable when
 * the trace-norm residual of the optimizer is at most `tol_sym`.
 */
SymmetrizabilityVerdict check_symmetrizable(const StateFamily& family, double tol_sym = kDefaultSymTolerance);

/// Max over x != x' of || sum_t U(t|x) rho_{x',t} - sum_t U(t|x') rho_{x,t} ||_1.
/// Independent of the solver.
double verify_symmetrizer(const StateFamily& family, const Symmetrizer& u);

}  // namespace cqavwc
