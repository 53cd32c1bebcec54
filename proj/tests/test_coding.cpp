#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <set>

#include "cqavwc/coding.hpp"
#include "support.hpp"

using namespace cqavwc;
using testing::diag;
using testing::mixed;

namespace {

ComplexMatrix basis(std::size_t x) { return x ? diag({0, 1}) : diag({1, 0}); }

CqavwcChannel noiseless() {
  return testing::channel(2, 1, [](std::size_t x, std::size_t) { return basis(x); },
                          [](std::size_t, std::size_t) { return mixed(2); });
}

CqavwcChannel jammer() {
  return testing::channel(
      2, 2, [](std::size_t x, std::size_t t) { return testing::depolarize(basis(x), 0.1 + 0.1 * t); },
      [](std::size_t x, std::size_t t) { return testing::depolarize(basis(x), 0.3 + 0.3 * t); });
}

const std::vector<double> kHalf{0.5, 0.5};

void check_povm(const PovmDecoder& d) {
  CHECK(d.completeness_error() <= 1e-8);
  CHECK(d.min_eigenvalue() >= -1e-9);
}

}  // namespace

TEST_CASE("codebook sampling") {
  const auto rd = restricted_distribution(typical_set(std::vector<double>{1.0, 0.0}, 4, 0.1));
  const auto a = sample_codebook(rd, 3, 2, 99);
  for (const auto& c : a.codewords) CHECK(c == InputSequence{0, 0, 0, 0});

  const auto ru = restricted_distribution(typical_set(kHalf, 4, 0.25));
  const auto b1 = sample_codebook(ru, 2, 2, 7), b2 = sample_codebook(ru, 2, 2, 7);
  CHECK(b1.codewords == b2.codewords);
  const auto one = sample_codebook(ru, 1, 1, 3);
  REQUIRE(one.size() == 1);
  CHECK(is_typical(one.at(0, 0), kHalf, 0.25));
  // Draw (j, l) does not depend on how many others are drawn.
  CHECK(sample_codebook(ru, 4, 2, 7).at(1, 1) == b1.at(1, 1));

  CHECK_THROWS_AS(make_codebook(2, 2, {{0, 1}, {1, 0}, {0, 0}}), ShapeError);
  CHECK_THROWS_AS(make_codebook(1, 2, {{0, 1}, {1}}), ShapeError);
}

TEST_CASE("PGM is exact on a noiseless orthogonal channel") {
  const auto ch = noiseless();
  const auto book = make_codebook(4, 1, {{0, 0, 1, 1}, {0, 1, 0, 1}, {1, 0, 1, 0}, {1, 1, 1, 0}});
  const auto dec = pgm_decoder(ch, book, kHalf, uniform_q_letters(ch, 4), 0.25);
  check_povm(dec);
  const auto adv = adversarial_error(ch, book, dec);
  CHECK(adv.max_error < 1e-9);
  CHECK(adv.by_t.size() == 1);

  // Single codeword with a wide window captures its state.
  const auto single = make_codebook(1, 1, {{1, 0}});
  const auto d1 = pgm_decoder(ch, single, kHalf, uniform_q_letters(ch, 2), 5.0);
  check_povm(d1);
  const auto rho = product_state(ch, Receiver::legal, single.at(0, 0), std::vector<std::size_t>{0, 0});
  CHECK((rho.matrix() * d1.elements[0]).trace().real() == doctest::Approx(1.0));
}

TEST_CASE("identical codewords receive equal elements") {
  const auto ch = jammer();
  const auto book = make_codebook(2, 1, {{0, 1, 1}, {0, 1, 1}});
  const auto dec = pgm_decoder(ch, book, kHalf, uniform_q_letters(ch, 3), 1.0);
  check_povm(dec);
  CHECK((dec.elements[0] - dec.elements[1]).norm() < 1e-12);
}

TEST_CASE("depolarized single letter against 2x2 arithmetic") {
  // rho_0 = diag(0.9, 0.1), rho_1 = diag(0.1, 0.9).
  const auto ch = testing::channel(
      2, 1, [](std::size_t x, std::size_t) { return testing::depolarize(basis(x), 0.2); },
      [](std::size_t, std::size_t) { return mixed(2); });
  const auto book = make_codebook(2, 1, {{0}, {1}});
  const std::vector<std::size_t> t{0};
  // Slack 0.5 keeps only the 0.9 eigenvector of each codeword state, so the
  // decoder is the computational-basis measurement: success 0.9.
  auto dec = pgm_decoder(ch, book, kHalf, uniform_q_letters(ch, 1), 0.5);
  check_povm(dec);
  CHECK(std::abs(dec.elements[0](0, 0).real() - 1.0) < 1e-12);
  CHECK(error_probability(ch, book, dec, t) == doctest::Approx(1.0 - 0.9).epsilon(1e-12));
  // A very wide window keeps both eigenvectors: D_i = id/2 and success 1/2.
  dec = pgm_decoder(ch, book, kHalf, uniform_q_letters(ch, 1), 5.0);
  CHECK((dec.elements[1] - mixed(2)).norm() < 1e-12);
  CHECK(error_probability(ch, book, dec, t) == doctest::Approx(0.5));
}

TEST_CASE("error probability bounds and message grouping") {
  const auto ch = noiseless();
  const auto book = make_codebook(1, 2, {{0, 1}, {1, 0}});
  PovmDecoder none;
  none.elements.assign(2, ComplexMatrix::Zero(4, 4));
  none.fail_element = ComplexMatrix::Identity(4, 4);
  CHECK(error_probability(ch, book, none, std::vector<std::size_t>{0, 0}) == doctest::Approx(1.0));

  // With one message, decoding the wrong l is still a success.
  PovmDecoder swapped;
  const auto r01 = product_state(ch, Receiver::legal, book.at(0, 0), std::vector<std::size_t>{0, 0}).matrix();
  const auto r10 = product_state(ch, Receiver::legal, book.at(0, 1), std::vector<std::size_t>{0, 0}).matrix();
  swapped.elements = {r10, r01};
  swapped.fail_element = ComplexMatrix::Identity(4, 4) - r01 - r10;
  CHECK(error_probability(ch, book, swapped, std::vector<std::size_t>{0, 0}) < 1e-12);
  CHECK_THROWS(error_probability(ch, make_codebook(3, 1, {{0, 0}, {0, 1}, {1, 1}}), swapped,
                                 std::vector<std::size_t>{0, 0}));
}

TEST_CASE("adversarial error is the maximum over direct evaluations") {
  const auto ch = jammer();
  const auto book = make_codebook(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 1, 0}, {1, 0, 0}});
  const auto dec = pgm_decoder(ch, book, kHalf, uniform_q_letters(ch, 3), 0.8);
  check_povm(dec);
  const auto adv = adversarial_error(ch, book, dec);
  REQUIRE(adv.by_t.size() == 8);
  double best = -1;
  StateSequence arg;
  for_each_sequence(2, 3, [&](const std::vector<std::size_t>& t) {
    const double e = error_probability(ch, book, dec, t);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
    if (e > best) best = e, arg = t;
  });
  CHECK(adv.max_error == doctest::Approx(best).epsilon(1e-14));
  CHECK(adv.argmax_t_seq == arg);
}

TEST_CASE("sandwiched eavesdropper states") {
  // Maximally mixed eavesdropper letters: both projectors are the identity.
  const auto flat = testing::channel(
      2, 2, [](std::size_t x, std::size_t) { return basis(x); }, [](std::size_t, std::size_t) { return mixed(2); });
  const std::vector<std::size_t> xs{0, 1, 1}, ts{1, 0, 1};
  auto s = sandwiched_eve_state(flat, kHalf, xs, ts, 0.25);
  CHECK(s.distance < 1e-12);
  CHECK(s.trace == doctest::Approx(1.0));

  // Legal-sourced projectors orthogonal to the eavesdropper's support.
  const auto crossed = testing::channel(
      2, 1, [](std::size_t, std::size_t) { return basis(1); }, [](std::size_t, std::size_t) { return basis(0); });
  s = sandwiched_eve_state(crossed, kHalf, std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{0, 0}, 0.5,
                           ProjectorSource::legal);
  CHECK(s.matrix.norm() < 1e-12);
  CHECK(s.distance == doctest::Approx(1.0));
  CHECK(s.gentle.distance <= s.gentle.bound + 1e-10);

  // Wider windows disturb less.
  const auto ch = jammer();
  const std::vector<std::size_t> x4{0, 1, 1, 0}, t4{0, 1, 0, 0};
  double prev = 2.0;
  for (double alpha : {0.25, 0.5, 1.0}) {
    const auto w = sandwiched_eve_state(ch, kHalf, x4, t4, alpha);
    CHECK(w.distance <= prev + 1e-12);
    CHECK(w.trace <= 1.0 + 1e-12);
    CHECK(w.gentle.distance <= w.gentle.bound + 1e-10);
    prev = w.distance;
  }
}

TEST_CASE("covering gap") {
  const auto ch = jammer();
  const std::vector<std::size_t> t3{0, 1, 1};
  const auto one_message = make_codebook(1, 3, {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}});
  CHECK(covering_gap(ch, kHalf, one_message, t3, 0.5) == 0.0);
  const auto same = make_codebook(2, 2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}});
  CHECK(covering_gap(ch, kHalf, same, t3, 0.5) == 0.0);

  // sigma_x = |x><x|, L = 1: the gap is || (s0 + s1)/2 - s0 ||_1 = 1.
  const auto copy = testing::channel(
      2, 1, [](std::size_t, std::size_t) { return mixed(2); }, [](std::size_t x, std::size_t) { return basis(x); });
  const auto rows = make_codebook(2, 1, {{0}, {1}});
  CHECK(covering_gap(copy, kHalf, rows, std::vector<std::size_t>{0}, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("leakage chi") {
  const std::vector<std::size_t> t1{0};
  const auto copy = testing::channel(
      2, 1, [](std::size_t, std::size_t) { return mixed(2); }, [](std::size_t x, std::size_t) { return basis(x); });
  CHECK(leakage_chi(copy, make_codebook(2, 1, {{0}, {1}}), t1) == doctest::Approx(1.0));
  // Randomizing over both letters hides the message completely.
  CHECK(leakage_chi(copy, make_codebook(2, 2, {{0}, {1}, {1}, {0}}), t1) < 1e-12);

  const auto ch = jammer();
  const auto book = make_codebook(4, 1, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const double chi = leakage_chi(ch, book, std::vector<std::size_t>{1, 0});
  CHECK(chi >= 0.0);
  CHECK(chi <= 2.0);

  const auto constant = testing::channel(
      2, 1, [](std::size_t x, std::size_t) { return basis(x); }, [](std::size_t, std::size_t) { return mixed(2); });
  CHECK(leakage_chi(constant, make_codebook(2, 1, {{0}, {1}}), t1) < 1e-12);
}

TEST_CASE("secrecy experiment") {
  // Noiseless legal, constant eavesdropper: zero error whenever the sampled
  // codewords are distinct.
  const auto ch = noiseless();
  int distinct_runs = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    ExperimentConfig cfg;
    cfg.p = kHalf;
    cfg.n = 4;
    cfg.J = 4;
    cfg.L = 1;
    cfg.seed = seed;
    const auto r = run_secrecy_experiment(ch, cfg);
    CHECK(r.decoder_completeness_error <= 1e-8);
    CHECK(r.max_leakage() < 1e-12);
    CHECK(r.rate_message == doctest::Approx(0.5));
    std::set<InputSequence> uniq(r.codebook.codewords.begin(), r.codebook.codewords.end());
    if (uniq.size() == 4) {
      ++distinct_runs;
      CHECK(r.max_error < 1e-9);
    }
  }
  CHECK(distinct_runs > 0);

  ExperimentConfig cfg;
  cfg.p = kHalf;
  cfg.n = 3;
  cfg.J = 1;
  cfg.L = 3;
  cfg.decoder_delta = 1.0;
  const auto j1 = run_secrecy_experiment(jammer(), cfg);
  REQUIRE(j1.t_seqs.size() == 8);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(j1.covering_gap_by_t[k] == 0.0);
    CHECK(j1.leakage_by_t[k] < 1e-12);
  }
  CHECK(j1.gentle_checks > 0);
  CHECK(j1.gentle_violations == 0);
  CHECK(j1.rate_total == doctest::Approx(std::log2(3.0) / 3));
}

TEST_CASE("experiment determinism and stage-tagged errors") {
  ExperimentConfig cfg;
  cfg.p = {0.4, 0.6};
  cfg.n = 4;
  cfg.J = 2;
  cfg.L = 2;
  cfg.seed = 5;
  cfg.decoder_delta = 0.8;
  const auto ch = jammer();
  const auto a = run_secrecy_experiment(ch, cfg);
  setenv("CQAVWC_THREADS", "1", 1);
  const auto b = run_secrecy_experiment(ch, cfg);
  unsetenv("CQAVWC_THREADS");
  CHECK(a.codebook.codewords == b.codebook.codewords);
  CHECK(a.error_by_t == b.error_by_t);
  CHECK(a.leakage_by_t == b.leakage_by_t);
  CHECK(a.covering_gap_by_t == b.covering_gap_by_t);

  cfg.p = {0.5, 0.6};
  try {
    run_secrecy_experiment(ch, cfg);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).rfind("[parameters]", 0) == 0);
  }
  cfg.p = {0.5, 0.5};
  cfg.delta = 0.01;
  cfg.n = 3;
  try {
    run_secrecy_experiment(ch, cfg);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).rfind("[restricted_distribution]", 0) == 0);
  }
  cfg.n = 14;
  cfg.delta = 0.5;
  CHECK_THROWS_AS(run_secrecy_experiment(ch, cfg), ResourceError);
}
