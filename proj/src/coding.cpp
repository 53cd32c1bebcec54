#include "cqavwc/coding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cqavwc/infoquant.hpp"
#include "cqavwc/parallel.hpp"

namespace cqavwc {

namespace {

// tr(a b) without forming the product.
double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

template <typename Fn>
auto with_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = std::string("[") + stage + "] ";
  try {
    return fn();
  } catch (const ResourceError& e) {
    throw ResourceError(prefix + e.what());
  } catch (const PsdError& e) {
    throw PsdError(prefix + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(prefix + e.what());
  } catch (const LabelError& e) {
    throw LabelError(prefix + e.what());
  } catch (const OperatorRangeError& e) {
    throw OperatorRangeError(prefix + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

void check_sequence(const CqavwcChannel& ch, std::span<const std::size_t> x_seq) {
  for (auto x : x_seq)
    if (x >= ch.num_inputs()) throw LabelError("input index " + std::to_string(x) + " outside the input alphabet");
}

void check_states(const CqavwcChannel& ch, std::span<const std::size_t> t_seq) {
  for (auto t : t_seq)
    if (t >= ch.num_states()) throw LabelError("state index " + std::to_string(t) + " outside the state alphabet");
}

}  // namespace

WiretapCodebook make_codebook(std::size_t J, std::size_t L, std::vector<InputSequence> codewords, std::uint64_t seed) {
  if (J == 0 || L == 0) throw ShapeError("codebook: J and L must be positive");
  if (codewords.size() != J * L)
    throw ShapeError("codebook: expected " + std::to_string(J * L) + " codewords, got " +
                     std::to_string(codewords.size()));
  const std::size_t n = codewords.front().size();
  if (n == 0) throw ShapeError("codebook: empty codeword");
  for (const auto& c : codewords)
    if (c.size() != n) throw ShapeError("codebook: codewords differ in length");
  return WiretapCodebook{n, J, L, seed, std::move(codewords)};
}

WiretapCodebook sample_codebook(const RestrictedDistribution& rd, std::size_t J, std::size_t L, std::uint64_t seed) {
  if (J == 0 || L == 0) throw ShapeError("sample_codebook: J and L must be positive");
  std::vector<InputSequence> words;
  words.reserve(J * L);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t l = 0; l < L; ++l) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(l)};
      std::mt19937_64 rng(seq);
      words.push_back(rd.sample(rng));
    }
  }
  return make_codebook(J, L, std::move(words), seed);
}

double PovmDecoder::completeness_error() const {
  ComplexMatrix sum = fail_element;
  for (const auto& e : elements) sum += e;
  return (sum - ComplexMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

double PovmDecoder::min_eigenvalue() const {
  auto min_eig = [](const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  double out = min_eig(fail_element);
  for (const auto& e : elements) out = std::min(out, min_eig(e));
  return out;
}

std::vector<std::vector<double>> uniform_q_letters(const CqavwcChannel& ch, std::size_t n) {
  return std::vector<std::vector<double>>(n,
                                          std::vector<double>(ch.num_states(), 1.0 / static_cast<double>(ch.num_states())));
}

PovmDecoder pgm_decoder(const CqavwcChannel& ch, const WiretapCodebook& codebook, std::span<const double> p,
                        const std::vector<std::vector<double>>& q_letters, double delta, const ResourceCaps& caps) {
  const std::size_t n = codebook.n;
  if (q_letters.size() != n) throw ShapeError("pgm_decoder: need one Q per letter");
  if (p.size() != ch.num_inputs()) throw LabelError("pgm_decoder: P is not supported on the input alphabet");
  const Eigen::Index d = static_cast<Eigen::Index>(
      checked_power(static_cast<std::size_t>(ch.dim(Receiver::legal)), n, caps.max_dim, "legal dimension dim^n"));

  std::vector<DensityOperator> avg_letters;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index dl = ch.dim(Receiver::legal);
    ComplexMatrix m = ComplexMatrix::Zero(dl, dl);
    for (std::size_t x = 0; x < ch.num_inputs(); ++x)
      m += p[x] * averaged_state(ch, Receiver::legal, x, q_letters[i]).matrix();
    avg_letters.push_back(assume_density(std::move(m)));
  }
  const ComplexMatrix total = product_spectral_projector(avg_letters, delta, std::nullopt, true, caps).projector;

  std::map<InputSequence, ComplexMatrix> sandwiches;
  for (const auto& c : codebook.codewords) {
    check_sequence(ch, c);
    if (sandwiches.count(c)) continue;
    const auto cond = conditional_projector(ch, Receiver::legal, c, q_letters, delta, std::nullopt, caps);
    sandwiches.emplace(c, hermitize(total * cond.projector * total));
  }

  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (const auto& c : codebook.codewords) a += sandwiches.at(c);
  ComplexMatrix a_inv_sqrt;
  try {
    a_inv_sqrt = psd_power(a, -0.5);
  } catch (const PsdError& e) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(a), Eigen::EigenvaluesOnly);
    throw PsdError(std::string("pgm_decoder: sum operator is not PSD (min eigenvalue ") +
                   std::to_string(es.eigenvalues().minCoeff()) + "): " + e.what());
  }

  PovmDecoder dec;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& c : codebook.codewords) {
    dec.elements.push_back(hermitize(a_inv_sqrt * sandwiches.at(c) * a_inv_sqrt));
    sum += dec.elements.back();
  }
  dec.fail_element = hermitize(ComplexMatrix::Identity(d, d) - sum);
  return dec;
}

double error_probability(const CqavwcChannel& ch, const WiretapCodebook& codebook, const PovmDecoder& dec,
                         std::span<const std::size_t> t_seq, const ResourceCaps& caps) {
  if (dec.elements.size() != codebook.J * codebook.L)
    throw ShapeError("error_probability: decoder has " + std::to_string(dec.elements.size()) + " elements for " +
                     std::to_string(codebook.J * codebook.L) + " codewords");
  if (t_seq.size() != codebook.n) throw ShapeError("error_probability: state sequence length differs from n");
  check_states(ch, t_seq);

  double success = 0.0;
  for (std::size_t j = 0; j < codebook.J; ++j) {
    ComplexMatrix message = dec.elements[j * codebook.L];
    for (std::size_t l = 1; l < codebook.L; ++l) message += dec.elements[j * codebook.L + l];
    for (std::size_t l = 0; l < codebook.L; ++l) {
      const auto rho = product_state(ch, Receiver::legal, codebook.at(j, l), t_seq, caps);
      success += trace_product(rho.matrix(), message);
    }
  }
  const double pe = 1.0 - success / static_cast<double>(codebook.J * codebook.L);
  return std::clamp(pe, 0.0, 1.0);
}

AdversarialError adversarial_error(const CqavwcChannel& ch, const WiretapCodebook& codebook, const PovmDecoder& dec,
                                   const ResourceCaps& caps) {
  checked_power(ch.num_states(), codebook.n, caps.max_state_seqs, "state sequence count |Theta|^n");
  std::vector<StateSequence> seqs;
  for_each_sequence(ch.num_states(), codebook.n, [&](const std::vector<std::size_t>& t) { seqs.push_back(t); });
  AdversarialError out;
  out.by_t.assign(seqs.size(), 0.0);
  parallel_for(seqs.size(), [&](std::size_t i) { out.by_t[i] = error_probability(ch, codebook, dec, seqs[i], caps); });
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (i == 0 || out.by_t[i] > out.max_error) {
      out.max_error = out.by_t[i];
      out.argmax_t_seq = seqs[i];
    }
  }
  return out;
}

SandwichedState sandwiched_eve_state(const CqavwcChannel& ch, std::span<const double> p,
                                     std::span<const std::size_t> x_seq, std::span<const std::size_t> t_seq,
                                     double alpha, ProjectorSource source, const ResourceCaps& caps) {
  if (x_seq.size() != t_seq.size()) throw ShapeError("sandwiched_eve_state: sequence lengths differ");
  if (p.size() != ch.num_inputs()) throw LabelError("sandwiched_eve_state: P is not supported on the input alphabet");
  check_sequence(ch, x_seq);
  check_states(ch, t_seq);
  const Receiver proj_rx = source == ProjectorSource::legal ? Receiver::legal : Receiver::eve;
  if (ch.dim(proj_rx) != ch.dim(Receiver::eve))
    throw ShapeError("sandwiched_eve_state: legal projectors need dim_legal == dim_eve");

  const std::size_t n = x_seq.size();
  std::vector<DensityOperator> avg_letters;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index dl = ch.dim(proj_rx);
    ComplexMatrix m = ComplexMatrix::Zero(dl, dl);
    for (std::size_t x = 0; x < ch.num_inputs(); ++x) m += p[x] * ch.state(proj_rx, x, t_seq[i]).matrix();
    avg_letters.push_back(assume_density(std::move(m)));
  }
  const double widened = alpha * std::sqrt(static_cast<double>(ch.num_inputs()));
  const auto outer = product_spectral_projector(avg_letters, widened, std::nullopt, true, caps);
  const auto inner = conditional_projector(ch, proj_rx, x_seq, t_seq, alpha, std::nullopt, caps);

  const auto sigma = product_state(ch, Receiver::eve, x_seq, t_seq, caps);
  const ComplexMatrix m = outer.projector * inner.projector;
  SandwichedState out;
  out.matrix = hermitize(m * sigma.matrix() * m.adjoint());
  out.trace = out.matrix.trace().real();
  out.distance = trace_norm(out.matrix - sigma.matrix());
  out.gentle = gentle_damage(sigma, hermitize(m.adjoint() * m));
  return out;
}

namespace {

// Message averages first, then their mean, so J = 1 gives an exact zero.
double covering_gap_of(const std::vector<ComplexMatrix>& states, std::size_t J, std::size_t L) {
  std::vector<ComplexMatrix> message;
  for (std::size_t j = 0; j < J; ++j) {
    ComplexMatrix m = states[j * L];
    for (std::size_t l = 1; l < L; ++l) m += states[j * L + l];
    message.push_back(m / static_cast<double>(L));
  }
  ComplexMatrix grand = message[0];
  for (std::size_t j = 1; j < J; ++j) grand += message[j];
  grand /= static_cast<double>(J);
  double gap = 0.0;
  for (const auto& m : message) gap = std::max(gap, trace_norm(grand - m));
  return gap;
}

}  // namespace

double covering_gap(const CqavwcChannel& ch, std::span<const double> p, const WiretapCodebook& codebook,
                    std::span<const std::size_t> t_seq, double alpha, ProjectorSource source,
                    const ResourceCaps& caps) {
  std::vector<ComplexMatrix> states;
  for (const auto& c : codebook.codewords)
    states.push_back(sandwiched_eve_state(ch, p, c, t_seq, alpha, source, caps).matrix);
  return covering_gap_of(states, codebook.J, codebook.L);
}

double leakage_chi(const CqavwcChannel& ch, const WiretapCodebook& codebook, std::span<const std::size_t> t_seq,
                   const ResourceCaps& caps) {
  check_states(ch, t_seq);
  std::vector<DensityOperator> message;
  for (std::size_t j = 0; j < codebook.J; ++j) {
    check_sequence(ch, codebook.at(j, 0));
    ComplexMatrix m = product_state(ch, Receiver::eve, codebook.at(j, 0), t_seq, caps).matrix();
    for (std::size_t l = 1; l < codebook.L; ++l) {
      check_sequence(ch, codebook.at(j, l));
      m += product_state(ch, Receiver::eve, codebook.at(j, l), t_seq, caps).matrix();
    }
    message.push_back(assume_density(m / static_cast<double>(codebook.L)));
  }
  const std::vector<double> w(codebook.J, 1.0 / static_cast<double>(codebook.J));
  return holevo_chi(w, message);
}

double SecrecyExperimentReport::max_leakage() const {
  return leakage_by_t.empty() ? 0.0 : *std::max_element(leakage_by_t.begin(), leakage_by_t.end());
}

double SecrecyExperimentReport::max_covering_gap() const {
  return covering_gap_by_t.empty() ? 0.0 : *std::max_element(covering_gap_by_t.begin(), covering_gap_by_t.end());
}

SecrecyExperimentReport run_secrecy_experiment(const CqavwcChannel& ch, const ExperimentConfig& cfg) {
  const auto& caps = cfg.caps;
  if (cfg.n == 0) throw ShapeError("run_secrecy_experiment: n must be positive");
  if (cfg.J == 0 || cfg.L == 0) throw ShapeError("run_secrecy_experiment: J and L must be positive");
  if (!(cfg.alpha > 0.0)) throw ValidationError("run_secrecy_experiment: alpha must be positive");
  with_stage("parameters", [&] { (void)Distribution(ch.inputs(), cfg.p); });

  const auto ts = with_stage("typical_set", [&] { return typical_set(cfg.p, cfg.n, cfg.delta, caps); });
  const auto rd = with_stage("restricted_distribution", [&] { return restricted_distribution(ts); });

  SecrecyExperimentReport rep;
  rep.n = cfg.n;
  rep.J = cfg.J;
  rep.L = cfg.L;
  rep.seed = cfg.seed;
  rep.codebook = with_stage("codebook", [&] { return sample_codebook(rd, cfg.J, cfg.L, cfg.seed); });

  const auto q_letters = cfg.q_letters.value_or(uniform_q_letters(ch, cfg.n));
  const auto dec = with_stage("decoder", [&] {
    return pgm_decoder(ch, rep.codebook, cfg.p, q_letters, cfg.decoder_delta.value_or(cfg.delta), caps);
  });
  rep.decoder_completeness_error = dec.completeness_error();
  rep.decoder_min_eigenvalue = dec.min_eigenvalue();

  const auto adv = with_stage("adversarial_error", [&] { return adversarial_error(ch, rep.codebook, dec, caps); });
  rep.max_error = adv.max_error;
  rep.argmax_t_seq = adv.argmax_t_seq;
  rep.error_by_t = adv.by_t;

  for_each_sequence(ch.num_states(), cfg.n, [&](const std::vector<std::size_t>& t) { rep.t_seqs.push_back(t); });
  const std::size_t nt = rep.t_seqs.size();
  rep.leakage_by_t.assign(nt, 0.0);
  rep.covering_gap_by_t.assign(nt, 0.0);
  std::vector<double> sandwich_distance(nt, 0.0);
  std::vector<std::size_t> gentle_bad(nt, 0);

  with_stage("secrecy", [&] {
    parallel_for(nt, [&](std::size_t i) {
      const auto& t = rep.t_seqs[i];
      rep.leakage_by_t[i] = leakage_chi(ch, rep.codebook, t, caps);
      std::vector<ComplexMatrix> sandwiched;
      for (const auto& c : rep.codebook.codewords) {
        auto s = sandwiched_eve_state(ch, cfg.p, c, t, cfg.alpha, cfg.projector_source, caps);
        sandwich_distance[i] = std::max(sandwich_distance[i], s.distance);
        if (s.gentle.distance > s.gentle.bound + 1e-9) ++gentle_bad[i];
        sandwiched.push_back(std::move(s.matrix));
      }
      rep.covering_gap_by_t[i] = covering_gap_of(sandwiched, cfg.J, cfg.L);
    });
  });
  for (std::size_t i = 0; i < nt; ++i) {
    rep.max_sandwich_distance = std::max(rep.max_sandwich_distance, sandwich_distance[i]);
    rep.gentle_violations += gentle_bad[i];
  }
  rep.gentle_checks = nt * rep.codebook.size();
  rep.rate_message = std::log2(static_cast<double>(cfg.J)) / static_cast<double>(cfg.n);
  rep.rate_total = std::log2(static_cast<double>(cfg.J * cfg.L)) / static_cast<double>(cfg.n);
  return rep;
}

}  // namespace cqavwc
