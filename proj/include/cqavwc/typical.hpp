#pragma once

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cqavwc/channel.hpp"

namespace cqavwc {

/// Sequences over X whose empirical frequencies are within `delta` of P for
/// every symbol, with zero-probability symbols excluded outright.
struct TypicalSet {
  std::vector<double> p;
  std::size_t n = 0;
  double delta = 0.0;
  std::vector<InputSequence> members;  // lexicographic
};

TypicalSet typical_set(std::span<const double> p, std::size_t n, double delta, const ResourceCaps& caps = {});

/// True iff `seq` meets the frequency-typicality condition for (p, delta).
bool is_typical(std::span<const std::size_t> seq, std::span<const double> p, double delta);

/// P^n restricted to a typical set and renormalized.
class RestrictedDistribution {
 public:
  explicit RestrictedDistribution(TypicalSet base);

  const TypicalSet& base() const noexcept { return base_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Inverse-CDF draw using one uniform variate from `rng`.
  const InputSequence& sample(std::mt19937_64& rng) const;

 private:
  TypicalSet base_;
  std::vector<double> weights_;
  std::vector<double> cdf_;
};

RestrictedDistribution restricted_distribution(const TypicalSet& ts);

/**
 * Projector onto the eigenvectors of a state whose eigenvalues lie in
 *   [2^{-n(center + alpha)}, 2^{-n(center - alpha)}].
 *
 * `kept_eigenvalues` are the state's eigenvalues on the selected subspace.
 * `projector` may be empty for structured (product) builds that were not
 * materialized; the mass checks then work from the kept eigenvalues.
 */
struct TypicalProjector {
  ComplexMatrix projector;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t selected_count = 0;
  double mean_entropy = 0.0;  // window center, bits per letter
  std::size_t n = 1;
  double alpha = 0.0;
  std::vector<double> kept_eigenvalues;

  bool materialized() const noexcept { return projector.size() > 0; }
};

/// Window endpoints for rate `center` and slack `alpha` over n letters.
std::pair<double, double> spectral_window(std::size_t n, double alpha, double center);

/// Dense eigendecomposition of `state`. `center` defaults to S(state)/n.
TypicalProjector spectral_projector(const DensityOperator& state, std::size_t n, double alpha,
                                    std::optional<double> center = std::nullopt);

/// Same window applied to the product of `letters`, using per-letter
/// spectra; the product spectrum is enumerated without a dense
/// eigendecomposition. `center` defaults to (1/n) sum_i S(letter_i).
TypicalProjector product_spectral_projector(std::span<const DensityOperator> letters, double alpha,
                                            std::optional<double> center = std::nullopt, bool materialize = true,
                                            const ResourceCaps& caps = {});

/// Conditional projector of the n-letter state for x^n under t^n.
TypicalProjector conditional_projector(const CqavwcChannel& ch, Receiver r, std::span<const std::size_t> x_seq,
                                       std::span<const std::size_t> t_seq, double alpha,
                                       std::optional<double> center = std::nullopt, const ResourceCaps& caps = {});

/// Conditional projector with per-letter state distributions Q_i over Theta.
TypicalProjector conditional_projector(const CqavwcChannel& ch, Receiver r, std::span<const std::size_t> x_seq,
                                       const std::vector<std::vector<double>>& q_letters, double alpha,
                                       std::optional<double> center = std::nullopt, const ResourceCaps& caps = {});

struct ProjectorMassReport {
  double captured_mass = 0.0;
  double mass_floor = 0.0;            // 1 - d/(4 n alpha^2)
  bool mass_ok = true;                // vacuous when the floor is <= 0
  double widened_mass = 0.0;          // at alpha * sqrt(a)
  double widened_floor = 0.0;         // 1 - a d/(4 n alpha^2)
  bool widened_ok = true;
  double rank_limit = 0.0;            // 2^{n(center + alpha)}
  bool rank_ok = true;
  double min_kept_eigenvalue = 0.0;
  double sandwich_limit = 0.0;        // 2^{-n(center - alpha)}
  double sandwich_max = 0.0;          // largest eigenvalue of Pi state Pi
  bool sandwich_ok = true;

  bool all_ok() const noexcept { return mass_ok && widened_ok && rank_ok && sandwich_ok; }
};

/// Evaluates the captured-mass floors, the constant-free rank bound and the
/// sandwich bound for a projector built from `state`.
ProjectorMassReport projector_mass_checks(const DensityOperator& state, const TypicalProjector& proj, std::size_t n,
                                          double alpha, std::size_t dim_letter, std::size_t alphabet_size);

/// Structured variant for i.i.d. or product states given per letter.
ProjectorMassReport product_projector_mass_checks(std::span<const DensityOperator> letters,
                                                  const TypicalProjector& proj, double alpha, std::size_t dim_letter,
                                                  std::size_t alphabet_size, const ResourceCaps& caps = {});

}  // namespace cqavwc
