#include "cqavwc/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cqavwc/qmath.hpp"
#include "cqavwc/typical.hpp"

namespace cqavwc {

namespace {

constexpr double kSlack = 1e-10;

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), id};
  return std::mt19937_64(seq);
}

void record(SweepStats& s, double margin) {
  if (s.applicable == 0 || margin < s.worst_margin) s.worst_margin = margin;
  ++s.applicable;
  if (margin < -kSlack) ++s.violations;
}

// Measurement operators 0 <= X <= id of three shapes: id minus a scaled PSD
// contraction, a random projector, and a random spectrum in [0, 1].
ComplexMatrix random_effect(Eigen::Index dim, std::size_t kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const ComplexMatrix u = random_unitary(dim, rng);
  RealVector spectrum(dim);
  switch (kind % 3) {
    case 0: {
      const ComplexMatrix c = random_density(dim, rng).matrix();
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c, Eigen::EigenvaluesOnly);
      const double scale = unif(rng) / es.eigenvalues().maxCoeff();
      return ComplexMatrix::Identity(dim, dim) - scale * c;
    }
    case 1: {
      std::uniform_int_distribution<Eigen::Index> rank(1, dim);
      const Eigen::Index r = rank(rng);
      for (Eigen::Index k = 0; k < dim; ++k) spectrum(k) = k < r ? 1.0 : 0.0;
      break;
    }
    default:
      for (Eigen::Index k = 0; k < dim; ++k) spectrum(k) = unif(rng);
  }
  ComplexMatrix x = u * spectrum.cast<Complex>().asDiagonal() * u.adjoint();
  return (x + x.adjoint()) / 2.0;
}

}  // namespace

std::size_t LemmaSweepReport::total_violations() const {
  std::size_t v = gentle.violations + fannes.violations;
  for (const auto& p : projector) v += p.mass.violations + p.widened_mass.violations + p.rank.violations + p.sandwich.violations;
  return v;
}

LemmaSweepReport run_lemma_sweeps(const LemmaSweepConfig& cfg) {
  if (cfg.dim < 2) throw ShapeError("lemma sweeps: dim must be at least 2");
  const auto dim = static_cast<Eigen::Index>(cfg.dim);
  LemmaSweepReport rep;
  rep.trials = cfg.trials;
  rep.dim = cfg.dim;
  rep.seed = cfg.seed;

  auto gentle_rng = stream(cfg.seed, 1);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const auto rho = random_density(dim, gentle_rng);
    const auto x = random_effect(dim, i, gentle_rng);
    const auto g = gentle_damage(rho, x);
    ++rep.gentle.checked;
    record(rep.gentle, g.bound - g.distance);
  }

  auto fannes_rng = stream(cfg.seed, 2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const auto x = random_density(dim, fannes_rng);
    const auto z = random_density(dim, fannes_rng);
    // Mostly nearby pairs so the bound applies; every fourth pair unrestricted.
    const double s = (i % 4 == 3) ? 1.0 : 0.2 * unif(fannes_rng);
    const auto y = assume_density((1.0 - s) * x.matrix() + s * z.matrix());
    const auto f = fannes_gap(x, y);
    ++rep.fannes.checked;
    if (f.bound) record(rep.fannes, *f.bound - f.entropy_gap);
  }

  auto proj_rng = stream(cfg.seed, 3);
  for (const std::size_t n : cfg.projector_n) {
    if (std::pow(static_cast<double>(cfg.dim), static_cast<double>(n)) > static_cast<double>(cfg.max_dim)) continue;
    for (const double alpha : cfg.projector_alpha) {
      ProjectorSweep sw;
      sw.n = n;
      sw.alpha = alpha;
      ResourceCaps caps;
      caps.max_dim = cfg.max_dim;
      for (std::size_t k = 0; k < cfg.projector_letters; ++k) {
        const auto letter = random_density(dim, proj_rng);
        const std::vector<DensityOperator> letters(n, letter);
        const auto proj = product_spectral_projector(letters, alpha, std::nullopt, false, caps);
        const auto r = product_projector_mass_checks(letters, proj, alpha, cfg.dim, cfg.dim, caps);
        sw.mass.checked++;
        sw.widened_mass.checked++;
        sw.rank.checked++;
        sw.sandwich.checked++;
        if (r.mass_floor > 0.0) record(sw.mass, r.captured_mass - r.mass_floor);
        if (r.widened_floor > 0.0) record(sw.widened_mass, r.widened_mass - r.widened_floor);
        const double log_count = proj.selected_count == 0 ? -std::numeric_limits<double>::infinity()
                                                          : std::log2(static_cast<double>(proj.selected_count));
        record(sw.rank, r.rank_ok ? std::max(0.0, std::log2(r.rank_limit) - log_count) : -1.0);
        record(sw.sandwich, r.sandwich_limit - r.sandwich_max);
      }
      rep.projector.push_back(sw);
    }
  }
  return rep;
}

}  // namespace cqavwc
