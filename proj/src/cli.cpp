#include "cqavwc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cqavwc/channel_io.hpp"

namespace cqavwc::cli {

using nlohmann::json;

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ParseError*>(&e)) return kParse;
  if (dynamic_cast<const ResourceError*>(&e)) return kResource;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
      dynamic_cast<const LabelError*>(&e) || dynamic_cast<const PsdError*>(&e) ||
      dynamic_cast<const OperatorRangeError*>(&e))
    return kValidation;
  return kFailure;
}

double parse_fraction(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ValidationError("not a number: '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return number(text);
  const double den = number(text.substr(slash + 1));
  if (den == 0.0) throw ValidationError("zero denominator in '" + text + "'");
  return number(text.substr(0, slash)) / den;
}

namespace {

json labelled(const std::vector<double>& w, const std::vector<std::string>& labels) {
  json o = json::object();
  for (std::size_t i = 0; i < w.size() && i < labels.size(); ++i) o[labels[i]] = w[i];
  return o;
}

std::string joined(std::span<const std::size_t> seq, const std::vector<std::string>& alphabet) {
  std::string s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) s += ' ';
    s += alphabet.at(seq[i]);
  }
  return s;
}

json stats_json(const SweepStats& s) {
  return {{"checked", s.checked},
          {"applicable", s.applicable},
          {"violations", s.violations},
          {"worst_margin", s.applicable ? json(s.worst_margin) : json(nullptr)}};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const SymmetrizabilityVerdict& v) {
  json j;
  j["symmetrizable"] = v.symmetrizable;
  j["residual"] = v.residual;
  j["max_entry_violation"] = v.max_entry_violation;
  j["certificate"] = v.certificate ? json(v.certificate->rows) : json(nullptr);
  j["best"] = v.best.rows;
  return j;
}

json to_json(const BoundReport& r, const CqavwcChannel& ch) {
  json j;
  j["mode"] = to_string(r.mode);
  j["n_used"] = r.n_used;
  j["p_star"] = labelled(r.p_star, ch.inputs());
  j["q_star"] = labelled(r.q_star, ch.states());
  j["t_star"] = labels_of(r.t_star, ch.states());
  j["legal_term"] = r.legal_term;
  j["leakage_terms"] = r.leakage_terms;
  j["bound_value"] = r.bound_value;
  j["raw_value"] = r.raw_value;
  j["gated"] = r.gated;
  j["gate_check"] = r.gate_check;
  j["symmetrizability_note"] = r.symmetrizability_note;
  return j;
}

json to_json(const SecrecyExperimentReport& r, const CqavwcChannel& ch) {
  json j;
  j["n"] = r.n;
  j["J"] = r.J;
  j["L"] = r.L;
  j["seed"] = r.seed;
  json book = json::array();
  for (const auto& cw : r.codebook.codewords) book.push_back(joined(cw, ch.inputs()));
  j["codebook"] = std::move(book);
  j["max_error"] = r.max_error;
  j["argmax_t_seq"] = joined(r.argmax_t_seq, ch.states());
  j["max_leakage_bits"] = r.max_leakage();
  j["max_covering_gap"] = r.max_covering_gap();
  j["rate_message"] = r.rate_message;
  j["rate_total"] = r.rate_total;
  j["decoder_completeness_error"] = r.decoder_completeness_error;
  j["decoder_min_eigenvalue"] = r.decoder_min_eigenvalue;
  j["max_sandwich_distance"] = r.max_sandwich_distance;
  j["gentle_checks"] = r.gentle_checks;
  j["gentle_violations"] = r.gentle_violations;
  json per_t = json::array();
  for (std::size_t k = 0; k < r.t_seqs.size(); ++k)
    per_t.push_back({{"t_seq", joined(r.t_seqs[k], ch.states())},
                     {"error", r.error_by_t[k]},
                     {"leakage_bits", r.leakage_by_t[k]},
                     {"covering_gap", r.covering_gap_by_t[k]}});
  j["by_t_seq"] = std::move(per_t);
  return j;
}

json to_json(const LemmaSweepReport& r) {
  json j;
  j["trials"] = r.trials;
  j["dim"] = r.dim;
  j["seed"] = r.seed;
  j["gentle"] = stats_json(r.gentle);
  j["fannes"] = stats_json(r.fannes);
  json proj = json::array();
  for (const auto& p : r.projector)
    proj.push_back({{"n", p.n},
                    {"alpha", p.alpha},
                    {"mass", stats_json(p.mass)},
                    {"widened_mass", stats_json(p.widened_mass)},
                    {"rank", stats_json(p.rank)},
                    {"sandwich", stats_json(p.sandwich)}});
  j["projector"] = std::move(proj);
  j["total_violations"] = r.total_violations();
  return j;
}

// The per-row error is the average decoding error under that state
// sequence; its maximum over a seed's rows is the seed's max_error.
std::string csv_rows(const SecrecyExperimentReport& r, const CqavwcChannel& ch) {
  std::string s;
  for (std::size_t k = 0; k < r.t_seqs.size(); ++k) {
    s += std::to_string(r.seed) + ',' + joined(r.t_seqs[k], ch.states()) + ',' + num(r.error_by_t[k]) + ',' +
         num(r.leakage_by_t[k]) + ',' + num(r.covering_gap_by_t[k]) + ',' + num(r.rate_message) + ',' +
         num(r.rate_total) + '\n';
  }
  return s;
}

namespace {

struct Common {
  std::string out_path;
  ResourceCaps caps;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out_path, "Write the report here instead of standard output");
  sub->add_option("--max-dim", c.caps.max_dim, "Cap on n-letter operator dimension")->capture_default_str();
  sub->add_option("--max-input-seqs", c.caps.max_input_seqs, "Cap on |X|^n")->capture_default_str();
  sub->add_option("--max-state-seqs", c.caps.max_state_seqs, "Cap on |Theta|^n")->capture_default_str();
}

json caps_json(const ResourceCaps& c) {
  return {{"max_dim", c.max_dim}, {"max_input_seqs", c.max_input_seqs}, {"max_state_seqs", c.max_state_seqs}};
}

CqavwcChannel load_valid(const std::string& path) { return validate_channel(load_channel_file(path)); }

json violations_json(const std::vector<Violation>& vs) {
  json a = json::array();
  for (const auto& v : vs)
    a.push_back({{"receiver", v.receiver}, {"x", v.x}, {"t", v.t}, {"invariant", v.invariant}, {"detail", v.detail}});
  return a;
}

struct Outcome {
  json parameters;
  json seeds = json::array();
  json results;
  int code = kOk;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secrecy analysis of classical-quantum arbitrarily varying wiretap channels", kToolName};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  std::string path;

  auto* validate = app.add_subcommand("validate", "Check every invariant of a channel file");
  validate->add_option("channel", path, "Channel JSON file")->required();

  std::string sym_mode = "joint";
  double sym_tol = kDefaultSymTolerance;
  auto* symmetrize = app.add_subcommand("symmetrize", "Decide symmetrizability of the legal family");
  symmetrize->add_option("channel", path, "Channel JSON file")->required();
  symmetrize->add_option("--mode", sym_mode, "per-t or joint")->check(CLI::IsMember({"per-t", "joint"}))
      ->capture_default_str();
  symmetrize->add_option("--tol", sym_tol, "Trace-norm residual tolerance")->capture_default_str();

  std::string bound_mode = "no-csi";
  std::size_t bound_n = 1;
  std::string grid_step = "1/32";
  std::string final_step = "1/1024";
  double bound_tol = kDefaultSymTolerance;
  auto* bound = app.add_subcommand("bound", "Evaluate the secrecy-capacity lower bound");
  bound->add_option("channel", path, "Channel JSON file")->required();
  bound->add_option("--mode", bound_mode, "no-csi or csi")->check(CLI::IsMember({"no-csi", "csi"}))
      ->capture_default_str();
  bound->add_option("--n", bound_n, "Largest block length of the leakage proxy")->capture_default_str()
      ->check(CLI::PositiveNumber);
  bound->add_option("--grid-step", grid_step, "Simplex lattice spacing (e.g. 1/32)")->capture_default_str();
  bound->add_option("--final-step", final_step, "Smallest refinement step")->capture_default_str();
  bound->add_option("--tol", bound_tol, "Symmetrizability tolerance")->capture_default_str();

  ExperimentConfig exp;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seeds;
  std::string csv_path;
  std::string source = "eve";
  std::vector<double> p_flag;
  auto* simulate = app.add_subcommand("simulate", "Run the random wiretap code experiment");
  simulate->add_option("channel", path, "Channel JSON file")->required();
  simulate->add_option("--n", exp.n, "Block length")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--J", exp.J, "Number of messages")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--L", exp.L, "Randomization indices per message")->capture_default_str()
      ->check(CLI::PositiveNumber);
  auto* seed_opt = simulate->add_option("--seed", seed, "Single codebook seed");
  auto* seeds_opt = simulate->add_option("--seeds", seeds, "Run seeds 0..k-1")->check(CLI::PositiveNumber);
  seed_opt->excludes(seeds_opt);
  simulate->add_option("--alpha", exp.alpha, "Slack of the eavesdropper projectors")->capture_default_str();
  simulate->add_option("--delta", exp.delta, "Typicality slack of the input distribution")->capture_default_str();
  simulate->add_option("--decoder-delta", exp.decoder_delta, "Slack of the decoder projectors (default: delta)");
  simulate->add_option("--p", p_flag, "Input distribution, comma separated (default: uniform)")->delimiter(',');
  simulate->add_option("--projector-source", source, "Receiver whose states define the sandwich projectors")
      ->check(CLI::IsMember({"eve", "legal"}))
      ->capture_default_str();
  simulate->add_option("--csv", csv_path, "Also write per-(seed, t^n) rows as CSV");

  LemmaSweepConfig lem;
  auto* lemmas = app.add_subcommand("lemmas", "Seeded sweeps of the gentle-measurement, Fannes and projector bounds");
  lemmas->add_option("--trials", lem.trials, "Instances per bound")->capture_default_str();
  lemmas->add_option("--dim", lem.dim, "Hilbert space dimension")->capture_default_str();
  lemmas->add_option("--seed", lem.seed, "Sweep seed")->capture_default_str();
  lemmas->add_option("--letters", lem.projector_letters, "Random letter states per projector cell")
      ->capture_default_str();

  for (auto* sub : {validate, symmetrize, bound, simulate, lemmas}) add_common(sub, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  const auto started = std::chrono::steady_clock::now();
  auto* cmd = app.get_subcommands().front();
  Outcome o;
  try {
    if (cmd == validate) {
      o.parameters = {{"channel", path}};
      const auto raw = load_channel_file(path);
      const auto vs = channel_violations(raw);
      o.results = {{"valid", vs.empty()}, {"violations", violations_json(vs)}};
      o.code = vs.empty() ? kOk : kValidation;
    } else if (cmd == symmetrize) {
      o.parameters = {{"channel", path}, {"mode", sym_mode}, {"tol", sym_tol}};
      const auto ch = load_valid(path);
      if (sym_mode == "joint") {
        o.results = to_json(check_symmetrizable(legal_family(ch), sym_tol));
      } else {
        json per_t = json::array();
        bool any = false;
        for (std::size_t t = 0; t < ch.num_states(); ++t) {
          auto v = to_json(check_symmetrizable(legal_family_at(ch, t), sym_tol));
          any = any || v["symmetrizable"].get<bool>();
          v["t"] = ch.states()[t];
          per_t.push_back(std::move(v));
        }
        o.results = {{"any_symmetrizable", any}, {"verdicts", std::move(per_t)}};
      }
    } else if (cmd == bound) {
      SimplexGrid grid;
      grid.step = parse_fraction(grid_step);
      grid.final_step = parse_fraction(final_step);
      o.parameters = {{"channel", path},          {"mode", bound_mode},
                      {"n", bound_n},             {"grid_step", grid.step},
                      {"final_step", grid.final_step}, {"tol", bound_tol},
                      {"caps", caps_json(common.caps)}};
      const auto ch = load_valid(path);
      const auto r = bound_mode == "csi" ? lower_bound_csi(ch, grid, bound_n, common.caps, bound_tol)
                                         : lower_bound_no_csi(ch, grid, bound_n, common.caps, bound_tol);
      o.results = to_json(r, ch);
    } else if (cmd == simulate) {
      const auto ch = load_valid(path);
      exp.caps = common.caps;
      exp.projector_source = source == "legal" ? ProjectorSource::legal : ProjectorSource::eve;
      exp.p = p_flag.empty() ? Distribution::uniform(ch.inputs()).weights() : p_flag;
      std::vector<std::uint64_t> seed_list;
      if (seeds) {
        for (std::uint64_t s = 0; s < *seeds; ++s) seed_list.push_back(s);
      } else {
        seed_list.push_back(seed.value_or(0));
      }
      o.parameters = {{"channel", path},
                      {"n", exp.n},
                      {"J", exp.J},
                      {"L", exp.L},
                      {"alpha", exp.alpha},
                      {"delta", exp.delta},
                      {"decoder_delta", exp.decoder_delta.value_or(exp.delta)},
                      {"p", labelled(exp.p, ch.inputs())},
                      {"projector_source", source},
                      {"caps", caps_json(common.caps)}};
      json per_seed = json::array();
      std::vector<double> errs, leaks, gaps;
      std::string csv = std::string(kCsvHeader) + '\n';
      for (const auto s : seed_list) {
        exp.seed = s;
        const auto r = run_secrecy_experiment(ch, exp);
        per_seed.push_back(to_json(r, ch));
        errs.push_back(r.max_error);
        leaks.push_back(r.max_leakage());
        gaps.push_back(r.max_covering_gap());
        csv += csv_rows(r, ch);
        o.seeds.push_back(s);
      }
      o.results = {{"experiments", std::move(per_seed)},
                   {"summary",
                    {{"median_max_error", median(errs)},
                     {"median_max_leakage_bits", median(leaks)},
                     {"median_max_covering_gap", median(gaps)}}}};
      if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw Error("cannot write CSV file '" + csv_path + "'");
        f << csv;
      }
    } else if (cmd == lemmas) {
      lem.max_dim = common.caps.max_dim;
      o.parameters = {{"trials", lem.trials}, {"dim", lem.dim}, {"letters", lem.projector_letters},
                      {"projector_n", lem.projector_n}, {"projector_alpha", lem.projector_alpha},
                      {"max_dim", lem.max_dim}};
      o.seeds.push_back(lem.seed);
      const auto r = run_lemma_sweeps(lem);
      o.results = to_json(r);
      o.code = r.total_violations() == 0 ? kOk : kFailure;
    }
  } catch (const ChannelValidationError& e) {
    err << kToolName << ": invalid channel:\n";
    for (const auto& v : e.violations())
      err << "  " << (v.receiver.empty() ? "" : v.receiver + " ") << (v.x.empty() ? "" : v.x + "|" + v.t + " ")
          << v.invariant << ": " << v.detail << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << kToolName << ": " << e.what() << '\n';
    return exit_code_for(e);
  }

  json report;
  report["tool"] = kToolName;
  report["version"] = kVersion;
  report["command"] = cmd->get_name();
  report["parameters"] = std::move(o.parameters);
  report["seeds"] = std::move(o.seeds);
  report["results"] = std::move(o.results);
  const std::string text = report.dump(2) + '\n';
  if (common.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(common.out_path, std::ios::binary);
    if (!f) {
      err << kToolName << ": cannot write '" << common.out_path << "'\n";
      return kFailure;
    }
    f << text;
  }
  // Kept out of the report so that repeated runs are byte-identical.
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
  err << kToolName << ' ' << cmd->get_name() << ": " << took.count() << " s wall clock\n";
  return o.code;
}

}  // namespace cqavwc::cli
