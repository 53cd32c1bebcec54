#include <doctest.h>

#include "cqavwc/errors.hpp"
#include "cqavwc/lp.hpp"
#include "cqavwc/simplex_search.hpp"

using namespace cqavwc;

TEST_CASE("simplex LP on a textbook program") {
  // max 3a + 5b s.t. a <= 4, 2b <= 12, 3a + 2b <= 18 -> (2, 6), value 36.
  lp::LinearProgram p;
  p.c = Eigen::Vector2d(-3, -5);
  p.a_ub.resize(3, 2);
  p.a_ub << 1, 0, 0, 2, 3, 2;
  p.b_ub = Eigen::Vector3d(4, 12, 18);
  const auto r = lp::solve(p);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.objective == doctest::Approx(-36));
  CHECK(r.x(0) == doctest::Approx(2));
  CHECK(r.x(1) == doctest::Approx(6));
}

TEST_CASE("equalities, negative right-hand sides, infeasible and unbounded programs") {
  lp::LinearProgram p;
  p.c = Eigen::Vector2d(1, 2);
  p.a_eq.resize(1, 2);
  p.a_eq << 1, 1;
  p.b_eq = Eigen::VectorXd::Constant(1, 1.0);
  p.a_ub.resize(1, 2);
  p.a_ub << -1, 0;  // a >= 0.25
  p.b_ub = Eigen::VectorXd::Constant(1, -0.25);
  auto r = lp::solve(p);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.objective == doctest::Approx(1.0));

  p.b_ub(0) = -2.0;  // a >= 2 with a + b = 1
  CHECK(lp::solve(p).status == lp::Status::infeasible);

  lp::LinearProgram u;
  u.c = Eigen::Vector2d(-1, 0);
  u.a_ub.resize(1, 2);
  u.a_ub << 0, 1;
  u.b_ub = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(lp::solve(u).status == lp::Status::unbounded);
}

TEST_CASE("simplex lattice size and order") {
  // Points of spacing 1/m on the k-simplex: C(m + k - 1, k - 1).
  CHECK(simplex_lattice(2, 0.25).size() == 5);
  CHECK(simplex_lattice(3, 0.25).size() == 15);
  CHECK(simplex_lattice(4, 1.0 / 8).size() == 165);
  const auto pts = simplex_lattice(2, 0.5);
  CHECK(pts.front() == std::vector<double>{0.0, 1.0});
  CHECK(pts.back() == std::vector<double>{1.0, 0.0});
  CHECK_THROWS_AS(simplex_lattice(2, 0.3), Error);
  CHECK_THROWS_AS(simplex_lattice(6, 1.0 / 64, 1000), ResourceError);
}

TEST_CASE("simplex search refines off the lattice") {
  const std::vector<double> target{0.2031, 0.5, 0.2969};
  auto f = [&](const std::vector<double>& q) {
    double s = 0;
    for (std::size_t i = 0; i < q.size(); ++i) s += (q[i] - target[i]) * (q[i] - target[i]);
    return s;
  };
  const auto best = simplex_minimize(3, f);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(best.point[i] - target[i]) <= 1.0 / 1024);
  const auto mx = simplex_maximize(3, [&](const std::vector<double>& q) { return -f(q); });
  CHECK(mx.point == best.point);
  CHECK(mx.value == doctest::Approx(-best.value));
  CHECK(simplex_minimize(1, f).point == std::vector<double>{1.0});
}
