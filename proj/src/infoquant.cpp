#include "cqavwc/infoquant.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "cqavwc/symmetrize.hpp"

namespace cqavwc {

double holevo_chi(std::span<const double> probs, std::span<const DensityOperator> states) {
  if (probs.size() != states.size())
    throw ShapeError("holevo_chi: " + std::to_string(probs.size()) + " weights for " + std::to_string(states.size()) +
                     " states");
  if (states.empty()) throw ShapeError("holevo_chi: empty ensemble");
  const Eigen::Index d = states.front().dim();
  ComplexMatrix avg = ComplexMatrix::Zero(d, d);
  double conditional = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != d) throw ShapeError("holevo_chi: states differ in dimension");
    if (probs[i] == 0.0) continue;
    avg += probs[i] * states[i].matrix();
    conditional += probs[i] * von_neumann_entropy(states[i]);
  }
  return std::max(0.0, von_neumann_entropy(assume_density(std::move(avg))) - conditional);
}

double holevo_chi(const ChiEnsemble& e) { return holevo_chi(e.probs, e.states); }

const char* to_string(BoundMode m) noexcept { return m == BoundMode::no_csi ? "no_csi" : "csi"; }

double legal_chi(const CqavwcChannel& ch, std::span<const double> p, std::span<const double> q) {
  if (p.size() != ch.num_inputs()) throw LabelError("legal_chi: P is not supported on the input alphabet");
  std::vector<DensityOperator> avg;
  avg.reserve(ch.num_inputs());
  for (std::size_t x = 0; x < ch.num_inputs(); ++x) avg.push_back(averaged_state(ch, Receiver::legal, x, q));
  return holevo_chi(p, avg);
}

LegalTerm legal_term(const CqavwcChannel& ch, std::span<const double> p, const SimplexGrid& grid) {
  const std::vector<double> pv(p.begin(), p.end());
  const auto opt =
      simplex_minimize(ch.num_states(), [&](const std::vector<double>& q) { return legal_chi(ch, pv, q); }, grid);
  return {opt.value, opt.point};
}

double eve_chi_for_sequence(const CqavwcChannel& ch, std::span<const double> p, std::span<const std::size_t> t_seq,
                            const ResourceCaps& caps) {
  if (p.size() != ch.num_inputs()) throw LabelError("eve_chi_for_sequence: P is not supported on the input alphabet");
  const std::size_t n = t_seq.size();
  if (n == 0) throw ShapeError("eve_chi_for_sequence: empty state sequence");
  checked_power(ch.num_inputs(), n, caps.max_input_seqs, "input sequence count |X|^n");
  checked_power(static_cast<std::size_t>(ch.dim(Receiver::eve)), n, caps.max_dim, "eavesdropper dimension dim^n");

  std::vector<double> probs;
  std::vector<DensityOperator> states;
  for_each_sequence(ch.num_inputs(), n, [&](const std::vector<std::size_t>& x_seq) {
    double w = 1.0;
    for (auto x : x_seq) w *= p[x];
    if (w == 0.0) return;
    probs.push_back(w);
    states.push_back(product_state(ch, Receiver::eve, x_seq, t_seq, caps));
  });
  return holevo_chi(probs, states);
}

LeakageTerm leakage_term(const CqavwcChannel& ch, std::span<const double> p, std::size_t n, const ResourceCaps& caps) {
  if (n == 0) throw ShapeError("leakage_term: n must be positive");
  checked_power(ch.num_states(), n, caps.max_state_seqs, "state sequence count |Theta|^n");
  LeakageTerm out;
  bool first = true;
  for_each_sequence(ch.num_states(), n, [&](const std::vector<std::size_t>& t_seq) {
    const double v = eve_chi_for_sequence(ch, p, t_seq, caps) / static_cast<double>(n);
    if (first || v > out.value) {
      out.value = v;
      out.argmax_t_seq = t_seq;
      first = false;
    }
  });
  return out;
}

double leakage_term_n(const CqavwcChannel& ch, std::span<const double> p, std::size_t n, const ResourceCaps& caps) {
  return leakage_term(ch, p, n, caps).value;
}

namespace {

std::vector<double> uniform(std::size_t k) { return std::vector<double>(k, 1.0 / static_cast<double>(k)); }

constexpr const char* kGateNote =
    "legal family is symmetrizable; the secrecy capacity is zero with and without CSI";

// Per-t check: index of the first t whose legal family is symmetrizable.
std::optional<std::size_t> first_symmetrizable_state(const CqavwcChannel& ch, double tol_sym) {
  for (std::size_t t = 0; t < ch.num_states(); ++t)
    if (check_symmetrizable(legal_family_at(ch, t), tol_sym).symmetrizable) return t;
  return std::nullopt;
}

void fill_gated(BoundReport& r, const CqavwcChannel& ch, const ResourceCaps& caps) {
  r.gated = true;
  r.p_star = uniform(ch.num_inputs());
  r.q_star = uniform(ch.num_states());
  r.legal_term = 0.0;
  r.leakage_terms.clear();
  for (std::size_t k = 1; k <= r.n_used; ++k) {
    const auto lk = leakage_term(ch, r.p_star, k, caps);
    r.leakage_terms.push_back(lk.value);
    if (k == r.n_used) r.t_star = lk.argmax_t_seq;
  }
  r.raw_value = r.legal_term - r.leakage_terms.back();
  r.bound_value = 0.0;
}

}  // namespace

BoundReport lower_bound_no_csi(const CqavwcChannel& ch, const SimplexGrid& grid, std::size_t n_max,
                               const ResourceCaps& caps, double tol_sym) {
  if (n_max == 0) throw ShapeError("lower_bound_no_csi: n must be positive");
  BoundReport r;
  r.mode = BoundMode::no_csi;
  r.n_used = n_max;
  r.gate_check = "per-t";

  if (auto t = first_symmetrizable_state(ch, tol_sym)) {
    fill_gated(r, ch, caps);
    r.symmetrizability_note =
        std::string(kGateNote) + " (per-t check: symmetrizable at t=" + ch.states()[*t] + ")";
    return r;
  }
  // Joint symmetrizability also forces zero capacity; the per-t check alone
  // misses families such as x xor t.
  if (check_symmetrizable(legal_family(ch), tol_sym).symmetrizable) {
    r.gate_check = "joint";
    fill_gated(r, ch, caps);
    r.symmetrizability_note = std::string(kGateNote) + " (joint check)";
    return r;
  }

  r.gate_check = "per-t+joint";

  // Memoized on the exact P point; the refinement revisits lattice points.
  std::map<std::vector<double>, double> cache;
  auto objective = [&](const std::vector<double>& p) {
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    const double v = legal_term(ch, p, grid).value - leakage_term_n(ch, p, n_max, caps);
    cache.emplace(p, v);
    return v;
  };
  const auto best = simplex_maximize(ch.num_inputs(), objective, grid);

  r.p_star = best.point;
  const auto lt = legal_term(ch, r.p_star, grid);
  r.legal_term = lt.value;
  r.q_star = lt.q_star;
  for (std::size_t k = 1; k <= n_max; ++k) {
    const auto lk = leakage_term(ch, r.p_star, k, caps);
    r.leakage_terms.push_back(lk.value);
    if (k == n_max) r.t_star = lk.argmax_t_seq;
  }
  r.raw_value = r.legal_term - r.leakage_terms.back();
  r.bound_value = std::max(0.0, r.raw_value);
  r.symmetrizability_note = "per-t and joint checks: legal family is not symmetrizable; the n-limit of the "
                            "leakage term is replaced by its value at n=" +
                            std::to_string(n_max);
  return r;
}

BoundReport lower_bound_csi(const CqavwcChannel& ch, const SimplexGrid& grid, std::size_t n_max,
                            const ResourceCaps& caps, double tol_sym) {
  if (n_max == 0) throw ShapeError("lower_bound_csi: n must be positive");
  BoundReport r;
  r.mode = BoundMode::csi;
  r.n_used = n_max;
  r.gate_check = "joint";

  if (check_symmetrizable(legal_family(ch), tol_sym).symmetrizable) {
    fill_gated(r, ch, caps);
    r.symmetrizability_note = std::string(kGateNote) + " (joint check)";
    return r;
  }

  checked_power(ch.num_states(), n_max, caps.max_state_seqs, "state sequence count |Theta|^n");
  const double inv_n = 1.0 / static_cast<double>(n_max);

  bool first = true;
  double best_value = 0.0;
  for_each_sequence(ch.num_states(), n_max, [&](const std::vector<std::size_t>& t_seq) {
    std::map<std::vector<double>, double> eve_cache;
    auto eve = [&](const std::vector<double>& p) {
      auto it = eve_cache.find(p);
      if (it != eve_cache.end()) return it->second;
      const double v = inv_n * eve_chi_for_sequence(ch, p, t_seq, caps);
      eve_cache.emplace(p, v);
      return v;
    };
    auto inner = [&](const std::vector<double>& q) {
      return simplex_maximize(
          ch.num_inputs(), [&](const std::vector<double>& p) { return legal_chi(ch, p, q) - eve(p); }, grid);
    };
    const auto q_opt =
        simplex_minimize(ch.num_states(), [&](const std::vector<double>& q) { return inner(q).value; }, grid);
    if (first || q_opt.value < best_value) {
      first = false;
      best_value = q_opt.value;
      r.q_star = q_opt.point;
      r.t_star = t_seq;
      r.p_star = inner(q_opt.point).point;
    }
  });

  r.legal_term = legal_chi(ch, r.p_star, r.q_star);
  for (std::size_t k = 1; k <= n_max; ++k) {
    const std::span<const std::size_t> prefix(r.t_star.data(), k);
    r.leakage_terms.push_back(eve_chi_for_sequence(ch, r.p_star, prefix, caps) / static_cast<double>(k));
  }
  r.raw_value = r.legal_term - r.leakage_terms.back();
  r.bound_value = std::max(0.0, r.raw_value);
  r.symmetrizability_note =
      "joint check: legal family is not symmetrizable; finite-n proxy takes the minimum over t^n at the single "
      "length n=" +
      std::to_string(n_max) +
      " (how the outer minimum over t^n interacts with the n-limit is ambiguous); leakage_terms[k] uses the length "
      "k+1 prefix of t_star";
  return r;
}

}  // namespace cqavwc
