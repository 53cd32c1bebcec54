#include "cqavwc/simplex_search.hpp"

#include <algorithm>
#include <cmath>

#include "cqavwc/errors.hpp"

namespace cqavwc {

namespace {

std::size_t lattice_divisions(double step) {
  if (!(step > 0.0) || step > 1.0) throw ShapeError("simplex grid step must lie in (0, 1]");
  const double inv = 1.0 / step;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded)
    throw ShapeError("simplex grid step must be the reciprocal of an integer");
  return static_cast<std::size_t>(rounded);
}

void compositions(std::size_t k, std::size_t remaining, std::vector<std::size_t>& cur, std::size_t divisions,
                  std::vector<std::vector<double>>& out, std::size_t max_points) {
  const std::size_t idx = cur.size();
  if (idx + 1 == k) {
    cur.push_back(remaining);
    if (out.size() >= max_points)
      throw ResourceError("simplex lattice exceeds " + std::to_string(max_points) + " points");
    std::vector<double> p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = static_cast<double>(cur[i]) / static_cast<double>(divisions);
    out.push_back(std::move(p));
    cur.pop_back();
    return;
  }
  for (std::size_t a = 0; a <= remaining; ++a) {
    cur.push_back(a);
    compositions(k, remaining - a, cur, divisions, out, max_points);
    cur.pop_back();
  }
}

// Searches for the minimum of sign * f.
SimplexOptimum search(std::size_t k, const SimplexObjective& f, const SimplexGrid& grid, double sign) {
  if (k == 0) throw ShapeError("simplex search over an empty alphabet");
  if (!(grid.final_step > 0.0)) throw ShapeError("simplex final step must be positive");
  SimplexOptimum best;
  if (k == 1) {
    best.point = {1.0};
    best.value = f(best.point);
    best.evaluations = 1;
    return best;
  }

  const auto lattice = simplex_lattice(k, grid.step, grid.max_lattice_points);
  double best_score = 0.0;
  for (const auto& q : lattice) {
    const double v = sign * f(q);
    ++best.evaluations;
    if (best.point.empty() || v < best_score) {
      best_score = v;
      best.point = q;
    }
  }

  constexpr double kImprovement = 1e-13;
  double h = grid.step / 2.0;
  while (h >= grid.final_step) {
    bool improved = false;
    std::vector<double> candidate_best;
    double candidate_score = best_score;
    for (std::size_t from = 0; from < k; ++from) {
      const double amount = std::min(h, best.point[from]);
      if (amount <= 0.0) continue;
      for (std::size_t to = 0; to < k; ++to) {
        if (to == from) continue;
        std::vector<double> q = best.point;
        q[from] -= amount;
        q[to] += amount;
        if (q[from] < 1e-15) q[from] = 0.0;
        const double v = sign * f(q);
        ++best.evaluations;
        if (v < candidate_score - kImprovement) {
          candidate_score = v;
          candidate_best = std::move(q);
          improved = true;
        }
      }
    }
    if (improved) {
      best.point = std::move(candidate_best);
      best_score = candidate_score;
    } else {
      h /= 2.0;
    }
  }
  best.value = sign * best_score;
  return best;
}

}  // namespace

std::vector<std::vector<double>> simplex_lattice(std::size_t k, double step, std::size_t max_points) {
  const std::size_t divisions = lattice_divisions(step);
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> cur;
  if (k == 0) return out;
  compositions(k, divisions, cur, divisions, out, max_points);
  return out;
}

SimplexOptimum simplex_minimize(std::size_t k, const SimplexObjective& f, const SimplexGrid& grid) {
  return search(k, f, grid, 1.0);
}

SimplexOptimum simplex_maximize(std::size_t k, const SimplexObjective& f, const SimplexGrid& grid) {
  return search(k, f, grid, -1.0);
}

}  // namespace cqavwc
