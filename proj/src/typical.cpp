#include "cqavwc/typical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cqavwc {

namespace {

// Relative slack on window endpoints so eigenvalues that sit exactly on an
// endpoint are not lost to rounding.
constexpr double kWindowSlack = 1e-12;

bool in_window(double l, double lower, double upper) {
  return l >= lower * (1.0 - kWindowSlack) && l <= upper * (1.0 + kWindowSlack);
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("typical projector: alpha must be positive");
}

}  // namespace

bool is_typical(std::span<const std::size_t> seq, std::span<const double> p, double delta) {
  std::vector<std::size_t> counts(p.size(), 0);
  for (auto s : seq) ++counts.at(s);
  const double n = static_cast<double>(seq.size());
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] == 0.0 && counts[a] != 0) return false;
    if (std::abs(static_cast<double>(counts[a]) / n - p[a]) > delta + 1e-12) return false;
  }
  return true;
}

TypicalSet typical_set(std::span<const double> p, std::size_t n, double delta, const ResourceCaps& caps) {
  if (n == 0) throw ShapeError("typical_set: n must be positive");
  if (!(delta > 0.0)) throw ValidationError("typical_set: delta must be positive");
  if (p.empty()) throw ShapeError("typical_set: empty alphabet");
  checked_power(p.size(), n, caps.max_input_seqs, "input sequence count |X|^n");
  TypicalSet ts{std::vector<double>(p.begin(), p.end()), n, delta, {}};
  for_each_sequence(p.size(), n, [&](const std::vector<std::size_t>& seq) {
    if (is_typical(seq, p, delta)) ts.members.push_back(seq);
  });
  return ts;
}

RestrictedDistribution::RestrictedDistribution(TypicalSet base) : base_(std::move(base)) {
  if (base_.members.empty()) throw ShapeError("restricted distribution: typical set is empty");
  weights_.reserve(base_.members.size());
  for (const auto& seq : base_.members) {
    double w = 1.0;
    for (auto s : seq) w *= base_.p[s];
    weights_.push_back(w);
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (!(total > 0.0)) throw ShapeError("restricted distribution: typical set has zero probability");
  double acc = 0.0;
  for (auto& w : weights_) {
    w /= total;
    acc += w;
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

const InputSequence& RestrictedDistribution::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return base_.members[static_cast<std::size_t>(it - cdf_.begin())];
}

RestrictedDistribution restricted_distribution(const TypicalSet& ts) { return RestrictedDistribution(ts); }

std::pair<double, double> spectral_window(std::size_t n, double alpha, double center) {
  const double nn = static_cast<double>(n);
  return {std::exp2(-nn * (center + alpha)), std::exp2(-nn * (center - alpha))};
}

TypicalProjector spectral_projector(const DensityOperator& state, std::size_t n, double alpha,
                                    std::optional<double> center) {
  require_alpha(alpha);
  if (n == 0) throw ShapeError("spectral_projector: n must be positive");
  const auto sd = spectral_decomposition(state.matrix());
  const auto& ev = sd.eigenvalues;

  TypicalProjector out;
  out.n = n;
  out.alpha = alpha;
  out.mean_entropy = center.value_or(
      entropy_bits(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size()))) / static_cast<double>(n));
  std::tie(out.lower, out.upper) = spectral_window(n, alpha, out.mean_entropy);

  const Eigen::Index d = state.dim();
  out.projector = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (!in_window(ev(k), out.lower, out.upper)) continue;
    out.projector.noalias() += sd.eigenvectors.col(k) * sd.eigenvectors.col(k).adjoint();
    out.kept_eigenvalues.push_back(ev(k));
    ++out.selected_count;
  }
  return out;
}

TypicalProjector product_spectral_projector(std::span<const DensityOperator> letters, double alpha,
                                            std::optional<double> center, bool materialize,
                                            const ResourceCaps& caps) {
  require_alpha(alpha);
  if (letters.empty()) throw ShapeError("product_spectral_projector: no letters");
  const std::size_t n = letters.size();

  std::vector<SpectralDecomposition> spectra;
  std::size_t total_dim = 1;
  double entropy_sum = 0.0;
  for (const auto& l : letters) {
    spectra.push_back(spectral_decomposition(l.matrix()));
    const auto& ev = spectra.back().eigenvalues;
    entropy_sum += entropy_bits(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
    const auto d = static_cast<std::size_t>(l.dim());
    if (total_dim > caps.max_dim / d)
      throw ResourceError("product dimension exceeds cap " + std::to_string(caps.max_dim) + " at n=" +
                          std::to_string(n));
    total_dim *= d;
  }

  TypicalProjector out;
  out.n = n;
  out.alpha = alpha;
  out.mean_entropy = center.value_or(entropy_sum / static_cast<double>(n));
  std::tie(out.lower, out.upper) = spectral_window(n, alpha, out.mean_entropy);

  std::vector<std::vector<std::size_t>> kept;
  std::vector<std::size_t> idx(n, 0);
  // Mixed-radix enumeration in Kronecker order (first letter most significant).
  while (true) {
    double l = 1.0;
    for (std::size_t i = 0; i < n; ++i) l *= spectra[i].eigenvalues(static_cast<Eigen::Index>(idx[i]));
    if (in_window(l, out.lower, out.upper)) {
      out.kept_eigenvalues.push_back(l);
      if (materialize) kept.push_back(idx);
    }
    std::size_t i = n;
    bool done = true;
    while (i > 0) {
      --i;
      if (++idx[i] < static_cast<std::size_t>(letters[i].dim())) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (done) break;
  }
  out.selected_count = out.kept_eigenvalues.size();

  if (materialize) {
    const auto d = static_cast<Eigen::Index>(total_dim);
    ComplexMatrix basis(d, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
      Eigen::VectorXcd v = spectra[0].eigenvectors.col(static_cast<Eigen::Index>(kept[c][0]));
      for (std::size_t i = 1; i < n; ++i) {
        const Eigen::VectorXcd& w = spectra[i].eigenvectors.col(static_cast<Eigen::Index>(kept[c][i]));
        Eigen::VectorXcd next(v.size() * w.size());
        for (Eigen::Index a = 0; a < v.size(); ++a) next.segment(a * w.size(), w.size()) = v(a) * w;
        v = std::move(next);
      }
      basis.col(static_cast<Eigen::Index>(c)) = v;
    }
    out.projector = basis * basis.adjoint();
    if (kept.empty()) out.projector = ComplexMatrix::Zero(d, d);
  }
  return out;
}

TypicalProjector conditional_projector(const CqavwcChannel& ch, Receiver r, std::span<const std::size_t> x_seq,
                                       std::span<const std::size_t> t_seq, double alpha,
                                       std::optional<double> center, const ResourceCaps& caps) {
  if (x_seq.size() != t_seq.size())
    throw ShapeError("conditional_projector: input and state sequences differ in length");
  if (x_seq.empty()) throw ShapeError("conditional_projector: empty sequence");
  std::vector<DensityOperator> letters;
  for (std::size_t i = 0; i < x_seq.size(); ++i) letters.push_back(ch.state(r, x_seq[i], t_seq[i]));
  return product_spectral_projector(letters, alpha, center, true, caps);
}

TypicalProjector conditional_projector(const CqavwcChannel& ch, Receiver r, std::span<const std::size_t> x_seq,
                                       const std::vector<std::vector<double>>& q_letters, double alpha,
                                       std::optional<double> center, const ResourceCaps& caps) {
  if (x_seq.size() != q_letters.size())
    throw ShapeError("conditional_projector: input sequence and per-letter Q differ in length");
  if (x_seq.empty()) throw ShapeError("conditional_projector: empty sequence");
  std::vector<DensityOperator> letters;
  for (std::size_t i = 0; i < x_seq.size(); ++i) letters.push_back(averaged_state(ch, r, x_seq[i], q_letters[i]));
  return product_spectral_projector(letters, alpha, center, true, caps);
}

namespace {

void fill_bounds(ProjectorMassReport& rep, const TypicalProjector& proj, std::size_t n, double alpha,
                 std::size_t dim_letter, std::size_t alphabet_size) {
  const double nn = static_cast<double>(n);
  const double d = static_cast<double>(dim_letter);
  const double a = static_cast<double>(alphabet_size);
  rep.mass_floor = 1.0 - d / (4.0 * nn * alpha * alpha);
  rep.widened_floor = 1.0 - a * d / (4.0 * nn * alpha * alpha);
  rep.mass_ok = rep.mass_floor <= 0.0 || rep.captured_mass >= rep.mass_floor - 1e-12;
  rep.widened_ok = rep.widened_floor <= 0.0 || rep.widened_mass >= rep.widened_floor - 1e-12;

  rep.rank_limit = std::exp2(nn * (proj.mean_entropy + alpha));
  rep.min_kept_eigenvalue =
      proj.kept_eigenvalues.empty() ? 0.0 : *std::min_element(proj.kept_eigenvalues.begin(), proj.kept_eigenvalues.end());
  const bool kept_above = proj.kept_eigenvalues.empty() || rep.min_kept_eigenvalue >= proj.lower * (1.0 - kWindowSlack);
  rep.rank_ok = kept_above && static_cast<double>(proj.selected_count) <= rep.rank_limit * (1.0 + 1e-12);
  rep.sandwich_limit = std::exp2(-nn * (proj.mean_entropy - alpha));
}

}  // namespace

ProjectorMassReport projector_mass_checks(const DensityOperator& state, const TypicalProjector& proj, std::size_t n,
                                          double alpha, std::size_t dim_letter, std::size_t alphabet_size) {
  if (!proj.materialized()) throw ShapeError("projector_mass_checks: projector was not materialized");
  if (proj.projector.rows() != state.dim()) throw ShapeError("projector_mass_checks: dimension mismatch");
  ProjectorMassReport rep;
  rep.captured_mass = (state.matrix() * proj.projector).trace().real();
  const auto widened =
      spectral_projector(state, n, alpha * std::sqrt(static_cast<double>(alphabet_size)), proj.mean_entropy);
  rep.widened_mass = (state.matrix() * widened.projector).trace().real();
  fill_bounds(rep, proj, n, alpha, dim_letter, alphabet_size);

  const ComplexMatrix sandwich = proj.projector * state.matrix() * proj.projector;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((sandwich + sandwich.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  rep.sandwich_max = es.eigenvalues().maxCoeff();
  const ComplexMatrix gap = sandwich - rep.sandwich_limit * proj.projector;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> gs((gap + gap.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  rep.sandwich_ok = gs.eigenvalues().maxCoeff() <= 1e-10;
  return rep;
}

ProjectorMassReport product_projector_mass_checks(std::span<const DensityOperator> letters,
                                                  const TypicalProjector& proj, double alpha, std::size_t dim_letter,
                                                  std::size_t alphabet_size, const ResourceCaps& caps) {
  const std::size_t n = letters.size();
  ProjectorMassReport rep;
  rep.captured_mass = std::accumulate(proj.kept_eigenvalues.begin(), proj.kept_eigenvalues.end(), 0.0);
  const auto widened = product_spectral_projector(
      letters, alpha * std::sqrt(static_cast<double>(alphabet_size)), proj.mean_entropy, false, caps);
  rep.widened_mass = std::accumulate(widened.kept_eigenvalues.begin(), widened.kept_eigenvalues.end(), 0.0);
  fill_bounds(rep, proj, n, alpha, dim_letter, alphabet_size);
  // The projector is spanned by eigenvectors of the product state, so the
  // sandwich is diagonal in that basis.
  rep.sandwich_max =
      proj.kept_eigenvalues.empty() ? 0.0 : *std::max_element(proj.kept_eigenvalues.begin(), proj.kept_eigenvalues.end());
  rep.sandwich_ok = rep.sandwich_max <= rep.sandwich_limit + 1e-10;
  return rep;
}

}  // namespace cqavwc
