#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cqavwc/infoquant.hpp"
#include "support.hpp"

using namespace cqavwc;
using testing::diag;
using testing::ket;
using testing::mixed;

namespace {

double entropy_oracle(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-15) s -= l * std::log2(l);
  }
  return s;
}

double chi_oracle(const std::vector<double>& p, const std::vector<ComplexMatrix>& states) {
  ComplexMatrix avg = ComplexMatrix::Zero(states[0].rows(), states[0].cols());
  double cond = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    avg += p[i] * states[i];
    cond += p[i] * entropy_oracle(states[i]);
  }
  return entropy_oracle(avg) - cond;
}

// Leakage recomputed through dense tensors, enumerating Theta^n from the
// last sequence backwards.
double leakage_oracle(const CqavwcChannel& ch, const std::vector<double>& p, std::size_t n) {
  const std::size_t nt = ch.num_states(), nx = ch.num_inputs();
  std::size_t count_t = 1, count_x = 1;
  for (std::size_t i = 0; i < n; ++i) count_t *= nt, count_x *= nx;
  double best = 0;
  for (std::size_t ti = count_t; ti-- > 0;) {
    std::vector<double> probs;
    std::vector<ComplexMatrix> states;
    for (std::size_t xi = 0; xi < count_x; ++xi) {
      ComplexMatrix m = ComplexMatrix::Identity(1, 1);
      double pr = 1;
      std::size_t tr = ti, xr = xi;
      std::vector<std::size_t> ts(n), xs(n);
      for (std::size_t k = n; k-- > 0;) ts[k] = tr % nt, tr /= nt, xs[k] = xr % nx, xr /= nx;
      for (std::size_t k = 0; k < n; ++k) {
        m = testing::kron(m, ch.eve(xs[k], ts[k]).matrix());
        pr *= p[xs[k]];
      }
      probs.push_back(pr);
      states.push_back(m);
    }
    best = std::max(best, chi_oracle(probs, states));
  }
  return best / static_cast<double>(n);
}

// Classical mutual information of the n-fold product of stochastic
// matrices W_t(y|x), computed on the joint table.
double classical_mi(const std::vector<double>& p, const std::vector<std::vector<std::vector<double>>>& w,
                    const std::vector<std::size_t>& ts) {
  const std::size_t nx = p.size(), ny = w[0][0].size(), n = ts.size();
  std::size_t cx = 1, cy = 1;
  for (std::size_t i = 0; i < n; ++i) cx *= nx, cy *= ny;
  std::vector<double> px(cx, 1.0), py(cy, 0.0);
  std::vector<std::vector<double>> joint(cx, std::vector<double>(cy, 1.0));
  for (std::size_t xi = 0; xi < cx; ++xi) {
    std::size_t xr = xi;
    std::vector<std::size_t> xs(n);
    for (std::size_t k = n; k-- > 0;) xs[k] = xr % nx, xr /= nx;
    for (std::size_t k = 0; k < n; ++k) px[xi] *= p[xs[k]];
    for (std::size_t yi = 0; yi < cy; ++yi) {
      std::size_t yr = yi;
      double v = px[xi];
      for (std::size_t k = n; k-- > 0;) v *= w[ts[k]][xs[k]][yr % ny], yr /= ny;
      joint[xi][yi] = v;
      py[yi] += v;
    }
  }
  double mi = 0;
  for (std::size_t xi = 0; xi < cx; ++xi)
    for (std::size_t yi = 0; yi < cy; ++yi)
      if (joint[xi][yi] > 0) mi += joint[xi][yi] * std::log2(joint[xi][yi] / (px[xi] * py[yi]));
  return mi;
}

}  // namespace

TEST_CASE("holevo chi examples") {
  const DensityOperator z0(diag({1, 0})), z1(diag({0, 1})), plus(ket({1.0, 1.0}));
  CHECK(holevo_chi(ChiEnsemble{{0.5, 0.5}, {z0, z1}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(holevo_chi(ChiEnsemble{{0.3, 0.7}, {plus, plus}}) < 1e-12);
  const double lam = (1 + 1 / std::sqrt(2.0)) / 2;
  CHECK(holevo_chi(ChiEnsemble{{0.5, 0.5}, {z0, plus}}) == doctest::Approx(testing::h2(lam)).epsilon(1e-10));
  CHECK(holevo_chi(ChiEnsemble{{0.5, 0.5}, {z0, plus}}) == doctest::Approx(0.600876).epsilon(1e-6));
  CHECK_THROWS(holevo_chi(ChiEnsemble{{0.5, 0.5}, {z0, DensityOperator::maximally_mixed(3)}}));
}

TEST_CASE("holevo chi properties on random ensembles") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    std::vector<double> p(4);
    double s = 0;
    for (auto& w : p) s += (w = u(rng));
    for (auto& w : p) w /= s;
    std::vector<DensityOperator> states;
    std::vector<ComplexMatrix> raw, rotated;
    const ComplexMatrix v = random_unitary(d, rng);
    for (int i = 0; i < 4; ++i) {
      states.push_back(random_density(d, rng));
      raw.push_back(states.back().matrix());
      rotated.push_back(v * raw.back() * v.adjoint());
    }
    const double chi = holevo_chi(p, states);
    CHECK(chi >= 0);
    CHECK(chi == doctest::Approx(chi_oracle(p, raw)).epsilon(1e-9));
    CHECK(chi == doctest::Approx(chi_oracle(p, rotated)).epsilon(1e-9));
    ComplexMatrix avg = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < 4; ++i) avg += p[i] * raw[i];
    CHECK(chi <= entropy_oracle(avg) + 1e-9);
  }
}

TEST_CASE("legal term") {
  // rho_{x,0} = |x><x|, rho_{x,1} = |x xor 1><x xor 1|: value 0 at Q uniform.
  const auto flip = testing::channel(
      2, 2, [](std::size_t x, std::size_t t) { return (x ^ t) ? diag({0, 1}) : diag({1, 0}); },
      [](std::size_t, std::size_t) { return mixed(2); });
  const std::vector<double> half{0.5, 0.5};
  const auto lt = legal_term(flip, half);
  CHECK(lt.value < 1e-12);
  CHECK(lt.q_star[0] == doctest::Approx(0.5));

  // |Theta| = 1 reduces to chi of the single family.
  const auto single = testing::channel(
      2, 1, [](std::size_t x, std::size_t) { return x ? ket({1.0, 1.0}) : diag({1, 0}); },
      [](std::size_t, std::size_t) { return mixed(2); });
  const auto one = legal_term(single, half);
  CHECK(one.q_star == std::vector<double>{1.0});
  CHECK(one.value == doctest::Approx(0.600876).epsilon(1e-6));

  // The returned minimum is never beaten by random probes.
  std::mt19937_64 rng(4);
  const auto noisy = testing::channel(
      2, 3, [&](std::size_t, std::size_t) { return testing::random_state(2, rng); },
      [](std::size_t, std::size_t) { return mixed(2); });
  const std::vector<double> p{0.3, 0.7};
  const auto best = legal_term(noisy, p);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> q{u(rng), u(rng), u(rng)};
    const double s = q[0] + q[1] + q[2];
    for (auto& w : q) w /= s;
    CHECK(best.value <= legal_chi(noisy, p, q) + 1e-12);
  }
}

TEST_CASE("leakage term") {
  const std::vector<double> half{0.5, 0.5};
  const auto constant = testing::channel(
      2, 2, [](std::size_t, std::size_t) { return mixed(2); },
      [](std::size_t, std::size_t t) { return t ? ket({1.0, 1.0}) : diag({1, 0}); });
  for (std::size_t n = 1; n <= 3; ++n) CHECK(leakage_term_n(constant, half, n) < 1e-12);

  const auto copy = testing::channel(
      2, 2, [](std::size_t, std::size_t) { return mixed(2); },
      [](std::size_t x, std::size_t) { return x ? diag({0, 1}) : diag({1, 0}); });
  for (std::size_t n = 1; n <= 3; ++n) CHECK(leakage_term_n(copy, half, n) == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(12);
  const auto generic = testing::channel(
      2, 2, [](std::size_t, std::size_t) { return mixed(2); },
      [&](std::size_t, std::size_t) { return testing::random_state(2, rng); });
  const std::vector<double> p{0.4, 0.6};
  for (std::size_t n = 1; n <= 3; ++n)
    CHECK(leakage_term_n(generic, p, n) == doctest::Approx(leakage_oracle(generic, p, n)).epsilon(1e-9));

  // chi of a product ensemble is additive over letters.
  const std::vector<std::size_t> ts{1, 0, 1};
  double sum = 0;
  for (auto t : ts) sum += eve_chi_for_sequence(generic, p, std::vector<std::size_t>{t});
  CHECK(eve_chi_for_sequence(generic, p, ts) == doctest::Approx(sum).epsilon(1e-9));

  const auto lk = leakage_term(generic, p, 2);
  CHECK(lk.argmax_t_seq.size() == 2);
  CHECK(eve_chi_for_sequence(generic, p, lk.argmax_t_seq) / 2 == doctest::Approx(lk.value));

  ResourceCaps caps;
  caps.max_input_seqs = 4;
  CHECK_THROWS_AS(leakage_term_n(generic, p, 3, caps), ResourceError);
}

TEST_CASE("leakage of diagonal channels matches classical mutual information") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 1);
  std::vector<std::vector<std::vector<double>>> w(2, std::vector<std::vector<double>>(2));
  for (auto& per_t : w)
    for (auto& row : per_t) {
      row = {u(rng), u(rng), u(rng)};
      const double s = row[0] + row[1] + row[2];
      for (auto& v : row) v /= s;
    }
  const auto ch = testing::channel(
      2, 2, [](std::size_t, std::size_t) { return mixed(2); },
      [&](std::size_t x, std::size_t t) { return diag({w[t][x][0], w[t][x][1], w[t][x][2]}); });
  const std::vector<double> p{0.35, 0.65};
  for (std::size_t n = 1; n <= 2; ++n) {
    double best = 0;
    for_each_sequence(2, n, [&](const std::vector<std::size_t>& ts) { best = std::max(best, classical_mi(p, w, ts)); });
    CHECK(std::abs(leakage_term_n(ch, p, n) - best / double(n)) < 1e-9);
  }
}

TEST_CASE("no-CSI and CSI bounds on reference channels") {
  SimplexGrid grid;
  const auto orth = testing::channel(
      2, 1, [](std::size_t x, std::size_t) { return x ? diag({0, 1}) : diag({1, 0}); },
      [](std::size_t, std::size_t) { return mixed(2); });
  auto r = lower_bound_no_csi(orth, grid, 1);
  CHECK(r.bound_value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.p_star[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_FALSE(r.gated);
  const auto c = lower_bound_csi(orth, grid, 1);
  CHECK(c.bound_value == doctest::Approx(r.bound_value).epsilon(1e-9));

  const auto cancel = testing::channel(
      2, 1, [](std::size_t x, std::size_t) { return x ? diag({0, 1}) : diag({1, 0}); },
      [](std::size_t x, std::size_t) { return x ? diag({0, 1}) : diag({1, 0}); });
  r = lower_bound_no_csi(cancel, grid, 2);
  CHECK(r.bound_value < 1e-9);
  CHECK(r.leakage_terms.size() == 2);

  const auto xored = testing::channel(
      2, 2, [](std::size_t x, std::size_t t) { return (x ^ t) ? ket({1.0, 1.0}) : diag({1, 0}); },
      [](std::size_t, std::size_t) { return mixed(2); });
  for (const auto& b : {lower_bound_no_csi(xored, grid, 1), lower_bound_csi(xored, grid, 1)}) {
    CHECK(b.gated);
    CHECK(b.bound_value == 0.0);
    CHECK(b.gate_check == "joint");
    CHECK(b.symmetrizability_note.find("symmetrizable") != std::string::npos);
  }

  // Legal states at t=1 ignore x: the per-t check fires first.
  const auto jammed = testing::channel(
      2, 2, [](std::size_t x, std::size_t t) { return t ? mixed(2) : (x ? diag({0, 1}) : diag({1, 0})); },
      [](std::size_t, std::size_t) { return mixed(2); });
  r = lower_bound_no_csi(jammed, grid, 1);
  CHECK(r.gated);
  CHECK(r.gate_check == "per-t");
  CHECK(lower_bound_csi(jammed, grid, 1).gated);
}

TEST_CASE("CSI bound dominates no-CSI bound and bounds are never negative") {
  std::mt19937_64 rng(31);
  SimplexGrid grid;
  grid.step = 1.0 / 16;
  grid.final_step = 1.0 / 256;
  for (int trial = 0; trial < 5; ++trial) {
    const auto ch = testing::channel(
        2, 2, [&](std::size_t, std::size_t) { return testing::random_state(2, rng); },
        [&](std::size_t, std::size_t) { return testing::random_state(2, rng); });
    const auto a = lower_bound_no_csi(ch, grid, 1);
    const auto b = lower_bound_csi(ch, grid, 1);
    CHECK(a.bound_value >= 0);
    CHECK(b.bound_value >= 0);
    CHECK(a.bound_value == doctest::Approx(std::max(0.0, a.legal_term - a.leakage_terms.back())));
    CHECK(b.bound_value >= a.bound_value - 1e-12);
  }
}
