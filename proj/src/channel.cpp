#include "cqavwc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace cqavwc {

std::size_t checked_power(std::size_t base, std::size_t n, std::size_t cap, const std::string& what) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (base != 0 && v > cap / base) {
      throw ResourceError(what + " exceeds cap " + std::to_string(cap) + " at n=" + std::to_string(n) +
                          " (base " + std::to_string(base) + ")");
    }
    v *= base;
  }
  if (v > cap)
    throw ResourceError(what + " exceeds cap " + std::to_string(cap) + " at n=" + std::to_string(n) + " (base " +
                        std::to_string(base) + ")");
  return v;
}

Distribution::Distribution(std::vector<std::string> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.size() != weights_.size())
    throw ShapeError("distribution: " + std::to_string(support_.size()) + " labels but " +
                     std::to_string(weights_.size()) + " weights");
  if (weights_.empty()) throw ShapeError("distribution: empty support");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("distribution: negative or non-finite weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "distribution: weights sum to " << sum;
    throw ValidationError(os.str());
  }
}

Distribution Distribution::uniform(std::vector<std::string> support) {
  const std::size_t k = support.size();
  if (k == 0) throw ShapeError("distribution: empty support");
  return Distribution(std::move(support), std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Distribution Distribution::point_mass(std::vector<std::string> support, std::size_t index) {
  std::vector<double> w(support.size(), 0.0);
  w.at(index) = 1.0;
  return Distribution(std::move(support), std::move(w));
}

const char* to_string(Receiver r) noexcept { return r == Receiver::legal ? "legal" : "eve"; }

std::string state_key(const std::string& x, const std::string& t) { return x + "|" + t; }

namespace {

std::size_t find_label(const std::vector<std::string>& alphabet, const std::string& label, const char* what) {
  auto it = std::find(alphabet.begin(), alphabet.end(), label);
  if (it == alphabet.end()) throw LabelError(std::string("unknown ") + what + " label '" + label + "'");
  return static_cast<std::size_t>(it - alphabet.begin());
}

void check_labels(const std::vector<std::string>& labels, const char* what, std::vector<Violation>& out) {
  if (labels.empty()) out.push_back({"", "", "", std::string("nonempty_") + what, "alphabet is empty"});
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second)
      out.push_back({"", "", "", std::string("unique_") + what, "duplicate label '" + l + "'"});
  }
}

void check_family(const RawChannel& raw, const std::map<std::string, ComplexMatrix>& family, const char* receiver,
                  long dim, std::vector<Violation>& out) {
  std::set<std::string> expected;
  for (const auto& x : raw.inputs) {
    for (const auto& t : raw.states) {
      const std::string key = state_key(x, t);
      expected.insert(key);
      auto it = family.find(key);
      if (it == family.end()) {
        out.push_back({receiver, x, t, "present", "missing key \"" + key + "\""});
        continue;
      }
      const ComplexMatrix& m = it->second;
      if (m.rows() != dim || m.cols() != dim) {
        out.push_back({receiver, x, t, "dimension",
                       "expected " + std::to_string(dim) + "x" + std::to_string(dim) + ", got " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols())});
        continue;
      }
      for (const auto& v : DensityOperator::violations(m)) {
        const auto colon = v.find(':');
        std::string name = v.substr(0, colon);
        std::string detail = colon == std::string::npos ? "" : v.substr(colon + 2);
        out.push_back({receiver, x, t, std::move(name), std::move(detail)});
      }
    }
  }
  for (const auto& [key, m] : family) {
    if (!expected.count(key)) out.push_back({receiver, "", "", "known_key", "unexpected key \"" + key + "\""});
  }
}

}  // namespace

ChannelValidationError::ChannelValidationError(std::vector<Violation> v)
    : ValidationError([&] {
        std::string msg = "channel has " + std::to_string(v.size()) + " violation(s)";
        for (const auto& e : v) {
          msg += "; " + e.invariant;
          if (!e.receiver.empty()) msg += " at " + e.receiver + "(" + e.x + "," + e.t + ")";
          if (!e.detail.empty()) msg += ": " + e.detail;
        }
        return msg;
      }()),
      violations_(std::move(v)) {}

std::vector<Violation> channel_violations(const RawChannel& raw) {
  std::vector<Violation> out;
  if (raw.schema_version != 1)
    out.push_back({"", "", "", "schema_version", "unsupported version " + std::to_string(raw.schema_version)});
  if (raw.dim_legal <= 0) out.push_back({"", "", "", "dim_legal", "must be positive"});
  if (raw.dim_eve <= 0) out.push_back({"", "", "", "dim_eve", "must be positive"});
  check_labels(raw.inputs, "inputs", out);
  check_labels(raw.states, "states", out);
  if (raw.dim_legal > 0) check_family(raw, raw.rho, "legal", raw.dim_legal, out);
  if (raw.dim_eve > 0) check_family(raw, raw.sigma, "eve", raw.dim_eve, out);
  return out;
}

CqavwcChannel validate_channel(const RawChannel& raw) {
  auto v = channel_violations(raw);
  if (!v.empty()) throw ChannelValidationError(std::move(v));
  CqavwcChannel ch;
  ch.inputs_ = raw.inputs;
  ch.states_ = raw.states;
  ch.dim_legal_ = raw.dim_legal;
  ch.dim_eve_ = raw.dim_eve;
  for (const auto& x : raw.inputs) {
    for (const auto& t : raw.states) {
      ch.legal_.emplace_back(raw.rho.at(state_key(x, t)));
      ch.eve_.emplace_back(raw.sigma.at(state_key(x, t)));
    }
  }
  return ch;
}

CqavwcChannel CqavwcChannel::from_states(std::vector<std::string> inputs, std::vector<std::string> states,
                                         const std::vector<std::vector<ComplexMatrix>>& legal,
                                         const std::vector<std::vector<ComplexMatrix>>& eve) {
  RawChannel raw;
  raw.inputs = std::move(inputs);
  raw.states = std::move(states);
  if (legal.size() != raw.inputs.size() || eve.size() != raw.inputs.size())
    throw ShapeError("from_states: outer size must equal |X|");
  for (std::size_t x = 0; x < raw.inputs.size(); ++x) {
    if (legal[x].size() != raw.states.size() || eve[x].size() != raw.states.size())
      throw ShapeError("from_states: inner size must equal |Theta|");
    for (std::size_t t = 0; t < raw.states.size(); ++t) {
      raw.rho[state_key(raw.inputs[x], raw.states[t])] = legal[x][t];
      raw.sigma[state_key(raw.inputs[x], raw.states[t])] = eve[x][t];
    }
  }
  raw.dim_legal = legal.empty() || legal[0].empty() ? 0 : legal[0][0].rows();
  raw.dim_eve = eve.empty() || eve[0].empty() ? 0 : eve[0][0].rows();
  return validate_channel(raw);
}

std::size_t CqavwcChannel::input_index(const std::string& label) const { return find_label(inputs_, label, "input"); }

std::size_t CqavwcChannel::state_index(const std::string& label) const { return find_label(states_, label, "state"); }

DensityOperator averaged_state(const CqavwcChannel& ch, Receiver r, std::size_t x, std::span<const double> q) {
  if (q.size() != ch.num_states()) throw LabelError("averaged_state: weight vector does not match state alphabet");
  const Eigen::Index d = ch.dim(r);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (std::size_t t = 0; t < q.size(); ++t) {
    if (q[t] != 0.0) m += q[t] * ch.state(r, x, t).matrix();
  }
  return assume_density(std::move(m));
}

std::vector<DensityOperator> averaged_legal_states(const CqavwcChannel& ch, const Distribution& q) {
  if (q.support() != ch.states()) throw LabelError("averaged_legal_states: Q is not supported on the state alphabet");
  std::vector<DensityOperator> out;
  out.reserve(ch.num_inputs());
  for (std::size_t x = 0; x < ch.num_inputs(); ++x) out.push_back(averaged_state(ch, Receiver::legal, x, q.weights()));
  return out;
}

ComplexMatrix product_of(std::span<const DensityOperator> letters, const ResourceCaps& caps) {
  if (letters.empty()) throw ShapeError("product_of: empty letter list");
  std::size_t total = 1;
  for (const auto& l : letters) {
    const auto d = static_cast<std::size_t>(l.dim());
    if (total > caps.max_dim / d)
      throw ResourceError("product dimension exceeds cap " + std::to_string(caps.max_dim) + " at n=" +
                          std::to_string(letters.size()));
    total *= d;
  }
  ComplexMatrix m = letters[0].matrix();
  for (std::size_t i = 1; i < letters.size(); ++i) m = tensor(m, letters[i].matrix());
  return m;
}

DensityOperator product_state(const CqavwcChannel& ch, Receiver r, std::span<const std::size_t> x_seq,
                              std::span<const std::size_t> t_seq, const ResourceCaps& caps) {
  if (x_seq.size() != t_seq.size())
    throw ShapeError("product_state: input sequence length " + std::to_string(x_seq.size()) +
                     " != state sequence length " + std::to_string(t_seq.size()));
  if (x_seq.empty()) throw ShapeError("product_state: empty sequence");
  checked_power(static_cast<std::size_t>(ch.dim(r)), x_seq.size(), caps.max_dim, "product dimension");
  ComplexMatrix m = ch.state(r, x_seq[0], t_seq[0]).matrix();
  for (std::size_t i = 1; i < x_seq.size(); ++i) m = tensor(m, ch.state(r, x_seq[i], t_seq[i]).matrix());
  return assume_density(std::move(m));
}

std::vector<std::string> labels_of(std::span<const std::size_t> seq, const std::vector<std::string>& alphabet) {
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (auto i : seq) out.push_back(alphabet.at(i));
  return out;
}

}  // namespace cqavwc
