#pragma once

#include <cstdint>
#include <vector>

#include "cqavwc/errors.hpp"

namespace cqavwc {

// Seeded numerical sweeps of the gentle-measurement bound, the Fannes bound
// and the typical-projector mass/rank/sandwich bounds.

struct SweepStats {
  std::size_t checked = 0;
  std::size_t applicable = 0;  // instances where the bound is defined
  std::size_t violations = 0;
  double worst_margin = 0.0;   // min over applicable instances of bound - value
};

struct ProjectorSweep {
  std::size_t n = 0;
  double alpha = 0.0;
  SweepStats mass;
  SweepStats widened_mass;
  SweepStats rank;
  SweepStats sandwich;
};

struct LemmaSweepReport {
  std::size_t trials = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  SweepStats gentle;
  SweepStats fannes;
  std::vector<ProjectorSweep> projector;

  std::size_t total_violations() const;
};

struct LemmaSweepConfig {
  std::size_t trials = 1000;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
  /// Random letter states per (n, alpha) cell of the projector sweep.
  std::size_t projector_letters = 100;
  std::vector<std::size_t> projector_n = {4, 8, 12};
  std::vector<double> projector_alpha = {0.25, 0.5, 1.0};
  std::size_t max_dim = 4096;
};

LemmaSweepReport run_lemma_sweeps(const LemmaSweepConfig& cfg);

}  // namespace cqavwc
