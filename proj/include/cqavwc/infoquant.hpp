#pragma once

#include <span>
#include <string>
#include <vector>

#include "cqavwc/channel.hpp"
#include "cqavwc/simplex_search.hpp"

namespace cqavwc {

/// Ensemble {P(x), rho_x}; states must share one dimension.
struct ChiEnsemble {
  std::vector<double> probs;
  std::vector<DensityOperator> states;
};

/// chi(P, Phi) = S(sum_x P(x) rho_x) - sum_x P(x) S(rho_x), in bits.
double holevo_chi(const ChiEnsemble& e);
double holevo_chi(std::span<const double> probs, std::span<const DensityOperator> states);

struct LegalTerm {
  double value = 0.0;
  std::vector<double> q_star;
};

/// min over Q of chi(P, {rho^Q_x}), by simplex search over Theta.
LegalTerm legal_term(const CqavwcChannel& ch, std::span<const double> p, const SimplexGrid& grid = {});

/// chi(P, {rho^Q_x}) for one Q.
double legal_chi(const CqavwcChannel& ch, std::span<const double> p, std::span<const double> q);

/// chi(P^n, {sigma_{x^n,t^n} : x^n in X^n}) for one state sequence, by
/// enumerating X^n. Not normalized by n.
double eve_chi_for_sequence(const CqavwcChannel& ch, std::span<const double> p, std::span<const std::size_t> t_seq,
                            const ResourceCaps& caps = {});

struct LeakageTerm {
  double value = 0.0;             // (1/n) max over t^n
  StateSequence argmax_t_seq;     // lexicographically first maximizer
};

/// (1/n) max over t^n in Theta^n of chi(P^n, {sigma_{x^n,t^n}}), brute force.
LeakageTerm leakage_term(const CqavwcChannel& ch, std::span<const double> p, std::size_t n,
                         const ResourceCaps& caps = {});
double leakage_term_n(const CqavwcChannel& ch, std::span<const double> p, std::size_t n,
                      const ResourceCaps& caps = {});

enum class BoundMode { no_csi, csi };

const char* to_string(BoundMode m) noexcept;

struct BoundReport {
  BoundMode mode = BoundMode::no_csi;
  std::size_t n_used = 1;
  std::vector<double> p_star;
  std::vector<double> q_star;
  /// CSI: the minimizing state sequence. No CSI: the leakage maximizer at n_used.
  StateSequence t_star;
  double legal_term = 0.0;
  /// leakage_terms[k] is the finite-n proxy at n' = k + 1.
  std::vector<double> leakage_terms;
  double bound_value = 0.0;
  /// legal_term - leakage_terms.back() before flooring at zero.
  double raw_value = 0.0;
  bool gated = false;
  /// Check that gated the result ("per-t" or "joint"), or "per-t+joint" when
  /// no-CSI evaluation passed both.
  std::string gate_check;
  std::string symmetrizability_note;
};

/// max over P of [min_Q chi(P, rho^Q) - (1/n) max_{t^n} chi(P^n, sigma_{., t^n})],
/// gated to zero when the legal family at some t, or the joint legal family,
/// is symmetrizable. gate_check names the check that fired ("per-t" is tried
/// first).
BoundReport lower_bound_no_csi(const CqavwcChannel& ch, const SimplexGrid& grid, std::size_t n_max,
                               const ResourceCaps& caps = {}, double tol_sym = 1e-7);

/// min over (Q, t^n) of max over P of [chi(P, rho^Q) - (1/n) chi(P^n, sigma_{., t^n})],
/// gated to zero when the joint legal family is symmetrizable.
BoundReport lower_bound_csi(const CqavwcChannel& ch, const SimplexGrid& grid, std::size_t n_max,
                            const ResourceCaps& caps = {}, double tol_sym = 1e-7);

}  // namespace cqavwc
