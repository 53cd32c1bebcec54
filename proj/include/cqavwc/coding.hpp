#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cqavwc/channel.hpp"
#include "cqavwc/qmath.hpp"
#include "cqavwc/typical.hpp"

namespace cqavwc {

/// Codewords x_{j,l} for J messages and L randomization indices each,
/// stored row-major by message.
struct WiretapCodebook {
  std::size_t n = 0;
  std::size_t J = 0;
  std::size_t L = 0;
  std::uint64_t seed = 0;
  std::vector<InputSequence> codewords;

  const InputSequence& at(std::size_t j, std::size_t l) const { return codewords.at(j * L + l); }
  std::size_t size() const noexcept { return codewords.size(); }
};

/// Codebook from explicit sequences; validates lengths and J*L.
WiretapCodebook make_codebook(std::size_t J, std::size_t L, std::vector<InputSequence> codewords,
                              std::uint64_t seed = 0);

/// J*L independent draws from P'. Draw (j, l) uses its own generator seeded
/// from (seed, j, l), so the result does not depend on generation order.
WiretapCodebook sample_codebook(const RestrictedDistribution& rd, std::size_t J, std::size_t L, std::uint64_t seed);

/// Decoder elements in codebook order plus the completing fail outcome.
struct PovmDecoder {
  std::vector<ComplexMatrix> elements;
  ComplexMatrix fail_element;

  /// max |sum elements + fail - id| entry.
  double completeness_error() const;
  /// Smallest eigenvalue across all elements including fail.
  double min_eigenvalue() const;
};

/**
 * Square-root decoder over typical projectors:
 *   D_i = A^{-1/2} Pi Pi_i Pi A^{-1/2},   A = sum_j Pi Pi_j Pi
 * with Pi the spectral projector of the averaged legal product state
 * rho^{P,Q_1} (x) ... (x) rho^{P,Q_n} and Pi_i the conditional projector of
 * rho^{Q_1}_{x_1} (x) ... for codeword i, both with slack `delta`.
 * A^{-1/2} is a pseudo-inverse on the support of A.
 */
PovmDecoder pgm_decoder(const CqavwcChannel& ch, const WiretapCodebook& codebook, std::span<const double> p,
                        const std::vector<std::vector<double>>& q_letters, double delta,
                        const ResourceCaps& caps = {});

/// Uniform Q on Theta for each of n letters.
std::vector<std::vector<double>> uniform_q_letters(const CqavwcChannel& ch, std::size_t n);

/// 1 - (1/JL) sum_{j,l} sum_{l'} tr(rho_{x_{j,l}, t^n} D_{j,l'}).
double error_probability(const CqavwcChannel& ch, const WiretapCodebook& codebook, const PovmDecoder& dec,
                         std::span<const std::size_t> t_seq, const ResourceCaps& caps = {});

struct AdversarialError {
  double max_error = 0.0;
  StateSequence argmax_t_seq;
  std::vector<double> by_t;  // lexicographic over Theta^n
};

AdversarialError adversarial_error(const CqavwcChannel& ch, const WiretapCodebook& codebook, const PovmDecoder& dec,
                                   const ResourceCaps& caps = {});

enum class ProjectorSource { legal, eve };

struct SandwichedState {
  ComplexMatrix matrix;          // Pi_avg Pi_cond sigma Pi_cond Pi_avg
  double distance = 0.0;         // || matrix - sigma ||_1
  double trace = 0.0;
  GentleDamage gentle;           // for X = Pi_cond Pi_avg Pi_cond
};

/// Doubly sandwiched eavesdropper state. The outer projector is built from
/// the P-averaged product state at slack alpha*sqrt(|X|), the inner one from
/// the conditional product state at slack alpha; both from the receiver named
/// by `source`.
SandwichedState sandwiched_eve_state(const CqavwcChannel& ch, std::span<const double> p,
                                     std::span<const std::size_t> x_seq, std::span<const std::size_t> t_seq,
                                     double alpha, ProjectorSource source = ProjectorSource::eve,
                                     const ResourceCaps& caps = {});

/// max over j' of || (1/JL) sum_{j,l} sbar_{j,l} - (1/L) sum_l sbar_{j',l} ||_1.
double covering_gap(const CqavwcChannel& ch, std::span<const double> p, const WiretapCodebook& codebook,
                    std::span<const std::size_t> t_seq, double alpha, ProjectorSource source = ProjectorSource::eve,
                    const ResourceCaps& caps = {});

/// chi of the uniform message ensemble of L-averaged eavesdropper states.
double leakage_chi(const CqavwcChannel& ch, const WiretapCodebook& codebook, std::span<const std::size_t> t_seq,
                   const ResourceCaps& caps = {});

struct ExperimentConfig {
  std::vector<double> p;  // over X
  std::size_t n = 1;
  std::size_t J = 1;
  std::size_t L = 1;
  std::uint64_t seed = 0;
  double alpha = 0.5;
  double delta = 0.25;
  /// Slack of the decoder's entropy windows; defaults to delta.
  std::optional<double> decoder_delta;
  /// Per-letter decoder Q; defaults to uniform.
  std::optional<std::vector<std::vector<double>>> q_letters;
  ProjectorSource projector_source = ProjectorSource::eve;
  ResourceCaps caps;
};

struct SecrecyExperimentReport {
  std::size_t n = 0;
  std::size_t J = 0;
  std::size_t L = 0;
  std::uint64_t seed = 0;
  WiretapCodebook codebook;
  double max_error = 0.0;
  StateSequence argmax_t_seq;
  std::vector<StateSequence> t_seqs;          // lexicographic over Theta^n
  std::vector<double> error_by_t;
  std::vector<double> leakage_by_t;
  std::vector<double> covering_gap_by_t;
  double rate_message = 0.0;                  // log2(J)/n
  double rate_total = 0.0;                    // log2(JL)/n
  double decoder_completeness_error = 0.0;
  double decoder_min_eigenvalue = 0.0;
  double max_sandwich_distance = 0.0;
  std::size_t gentle_checks = 0;
  std::size_t gentle_violations = 0;

  double max_leakage() const;
  double max_covering_gap() const;
};

/// Builds typical set, P', codebook and decoder, then evaluates the decoder
/// against every t^n together with per-t^n leakage and covering gap. Errors
/// are rethrown with the failing stage prefixed.
SecrecyExperimentReport run_secrecy_experiment(const CqavwcChannel& ch, const ExperimentConfig& cfg);

}  // namespace cqavwc
