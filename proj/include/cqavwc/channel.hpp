#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cqavwc/qmath.hpp"

namespace cqavwc {

/// Size caps for the exponential brute forces. Every enumeration over X^n or
/// Theta^n and every n-letter operator checks against these before
/// allocating anything.
struct ResourceCaps {
  std::size_t max_dim = 4096;          // dim^n
  std::size_t max_input_seqs = 4096;   // |X|^n
  std::size_t max_state_seqs = 4096;   // |Theta|^n
};

/// base^n, or throws ResourceError naming `what` when it would exceed `cap`.
std::size_t checked_power(std::size_t base, std::size_t n, std::size_t cap, const std::string& what);

/// Probability vector over an ordered label list.
class Distribution {
 public:
  Distribution(std::vector<std::string> support, std::vector<double> weights);

  static Distribution uniform(std::vector<std::string> support);
  static Distribution point_mass(std::vector<std::string> support, std::size_t index);

  const std::vector<std::string>& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

 private:
  std::vector<std::string> support_;
  std::vector<double> weights_;
};

struct RawChannel;

enum class Receiver { legal, eve };

const char* to_string(Receiver r) noexcept;

/// Indices into the state alphabet Theta, one per channel use.
using StateSequence = std::vector<std::size_t>;
/// Indices into the input alphabet X, one per channel use.
using InputSequence = std::vector<std::size_t>;

/**
 * The doubly indexed state family {(rho_{x,t}, sigma_{x,t})}. Immutable once
 * constructed; build it through validate_channel().
 */
class CqavwcChannel {
 public:
  const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t num_inputs() const noexcept { return inputs_.size(); }
  std::size_t num_states() const noexcept { return states_.size(); }
  Eigen::Index dim(Receiver r) const noexcept { return r == Receiver::legal ? dim_legal_ : dim_eve_; }

  const DensityOperator& legal(std::size_t x, std::size_t t) const { return legal_.at(x * states_.size() + t); }
  const DensityOperator& eve(std::size_t x, std::size_t t) const { return eve_.at(x * states_.size() + t); }
  const DensityOperator& state(Receiver r, std::size_t x, std::size_t t) const {
    return r == Receiver::legal ? legal(x, t) : eve(x, t);
  }

  std::size_t input_index(const std::string& label) const;
  std::size_t state_index(const std::string& label) const;

  /// Builds a channel from already-valid operators laid out as [x][t].
  static CqavwcChannel from_states(std::vector<std::string> inputs, std::vector<std::string> states,
                                   const std::vector<std::vector<ComplexMatrix>>& legal,
                                   const std::vector<std::vector<ComplexMatrix>>& eve);

 private:
  friend CqavwcChannel validate_channel(const RawChannel& raw);
  CqavwcChannel() = default;

  std::vector<std::string> inputs_;
  std::vector<std::string> states_;
  Eigen::Index dim_legal_ = 0;
  Eigen::Index dim_eve_ = 0;
  std::vector<DensityOperator> legal_;
  std::vector<DensityOperator> eve_;
};

/// Parsed but unvalidated channel description. Matrices keyed "x|t".
struct RawChannel {
  int schema_version = 1;
  long dim_legal = 0;
  long dim_eve = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> states;
  std::map<std::string, ComplexMatrix> rho;
  std::map<std::string, ComplexMatrix> sigma;
};

std::string state_key(const std::string& x, const std::string& t);

struct Violation {
  std::string receiver;   // "legal", "eve" or "" for channel-level problems
  std::string x;
  std::string t;
  std::string invariant;  // e.g. "unit_trace"
  std::string detail;
};

class ChannelValidationError : public ValidationError {
 public:
  explicit ChannelValidationError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Every invariant violation in `raw`, not just the first.
std::vector<Violation> channel_violations(const RawChannel& raw);

/// Throws ChannelValidationError carrying channel_violations() when nonempty.
CqavwcChannel validate_channel(const RawChannel& raw);

/// rho^Q_x = sum_t Q(t) rho_{x,t}, in input-alphabet order.
std::vector<DensityOperator> averaged_legal_states(const CqavwcChannel& ch, const Distribution& q);

/// sum_t q[t] state_{x,t} for one receiver and one input letter.
DensityOperator averaged_state(const CqavwcChannel& ch, Receiver r, std::size_t x, std::span<const double> q);

/// n-fold product state_{x_1,t_1} (x) ... (x) state_{x_n,t_n}.
DensityOperator product_state(const CqavwcChannel& ch, Receiver r, std::span<const std::size_t> x_seq,
                              std::span<const std::size_t> t_seq, const ResourceCaps& caps = {});

/// Tensor product of arbitrary letter states with the dimension cap applied.
ComplexMatrix product_of(std::span<const DensityOperator> letters, const ResourceCaps& caps = {});

/// Calls fn(seq) for every sequence in alphabet^n in lexicographic order.
template <typename Fn>
void for_each_sequence(std::size_t alphabet, std::size_t n, Fn&& fn) {
  std::vector<std::size_t> seq(n, 0);
  if (alphabet == 0) return;
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(seq));
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++seq[i] < alphabet) break;
      seq[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

std::vector<std::string> labels_of(std::span<const std::size_t> seq, const std::vector<std::string>& alphabet);

}  // namespace cqavwc
