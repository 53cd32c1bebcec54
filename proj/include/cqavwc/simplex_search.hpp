#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cqavwc {

/// Deterministic search over the probability simplex: exhaustive lattice of
/// spacing `step`, then pairwise mass transfers from the best lattice point,
/// halving the transfer size until it drops below `final_step`.
///
/// This is a heuristic. It finds the global optimum of the lattice and a
/// local optimum of its neighbourhood; nothing more is claimed.
struct SimplexGrid {
  double step = 1.0 / 32.0;
  double final_step = 1.0 / 1024.0;
  std::size_t max_lattice_points = 2'000'000;
};

struct SimplexOptimum {
  std::vector<double> point;
  double value = 0.0;
  std::size_t evaluations = 0;
};

using SimplexObjective = std::function<double(const std::vector<double>&)>;

SimplexOptimum simplex_minimize(std::size_t k, const SimplexObjective& f, const SimplexGrid& grid = {});
SimplexOptimum simplex_maximize(std::size_t k, const SimplexObjective& f, const SimplexGrid& grid = {});

/// Lattice points {q : q_i in step*Z, sum q = 1} in lexicographic order.
std::vector<std::vector<double>> simplex_lattice(std::size_t k, double step, std::size_t max_points = 2'000'000);

}  // namespace cqavwc
