#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqavwc/channel_io.hpp"
#include "cqavwc/cli.hpp"
#include "cqavwc/coding.hpp"
#include "cqavwc/infoquant.hpp"
#include "cqavwc/lemmas.hpp"
#include "cqavwc/symmetrize.hpp"

namespace py = pybind11;
using namespace cqavwc;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::list violations_list(const std::vector<Violation>& vs) {
  py::list out;
  for (const auto& v : vs) {
    py::dict d;
    d["receiver"] = v.receiver;
    d["x"] = v.x;
    d["t"] = v.t;
    d["invariant"] = v.invariant;
    d["detail"] = v.detail;
    out.append(d);
  }
  return out;
}

ResourceCaps caps_of(std::size_t max_dim, std::size_t max_input_seqs, std::size_t max_state_seqs) {
  ResourceCaps c;
  c.max_dim = max_dim;
  c.max_input_seqs = max_input_seqs;
  c.max_state_seqs = max_state_seqs;
  return c;
}

std::vector<DensityOperator> densities(const std::vector<ComplexMatrix>& ms) {
  std::vector<DensityOperator> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.emplace_back(m);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Classical-quantum arbitrarily varying wiretap channels: bounds and finite-n coding experiments.";
  m.attr("__version__") = cli::kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<LabelError>(m, "LabelError", base.ptr());
  py::register_exception<PsdError>(m, "PsdError", base.ptr());
  py::register_exception<OperatorRangeError>(m, "OperatorRangeError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<CqavwcChannel>(m, "Channel")
      .def_static(
          "load", [](const std::string& path) { return validate_channel(load_channel_file(path)); }, py::arg("path"),
          "Load and validate a channel JSON file.")
      .def_static(
          "from_json", [](const std::string& text) { return validate_channel(parse_channel_json(text)); },
          py::arg("text"))
      .def_static(
          "from_states",
          [](std::vector<std::string> inputs, std::vector<std::string> states,
             const std::vector<std::vector<ComplexMatrix>>& legal, const std::vector<std::vector<ComplexMatrix>>& eve) {
            return CqavwcChannel::from_states(std::move(inputs), std::move(states), legal, eve);
          },
          py::arg("inputs"), py::arg("states"), py::arg("legal"), py::arg("eve"),
          "Build from operators laid out [x][t]; every operator must be a density matrix.")
      .def_property_readonly("inputs", &CqavwcChannel::inputs)
      .def_property_readonly("states", &CqavwcChannel::states)
      .def_property_readonly("dim_legal", [](const CqavwcChannel& c) { return c.dim(Receiver::legal); })
      .def_property_readonly("dim_eve", [](const CqavwcChannel& c) { return c.dim(Receiver::eve); })
      .def("legal", [](const CqavwcChannel& c, std::size_t x, std::size_t t) { return c.legal(x, t).matrix(); })
      .def("eve", [](const CqavwcChannel& c, std::size_t x, std::size_t t) { return c.eve(x, t).matrix(); })
      .def("to_json", [](const CqavwcChannel& c) { return channel_to_json(c).dump(); });

  m.def(
      "channel_violations",
      [](const std::string& path) { return violations_list(channel_violations(load_channel_file(path))); },
      py::arg("path"), "Every invariant violation in a channel file; empty when valid.");

  m.def(
      "von_neumann_entropy", [](const ComplexMatrix& rho) { return von_neumann_entropy(DensityOperator(rho)); },
      py::arg("rho"));
  m.def("trace_norm", &trace_norm, py::arg("a"));
  m.def(
      "holevo_chi",
      [](const std::vector<double>& probs, const std::vector<ComplexMatrix>& states) {
        const auto d = densities(states);
        return holevo_chi(probs, d);
      },
      py::arg("probs"), py::arg("states"));

  m.def(
      "symmetrize",
      [](const CqavwcChannel& ch, const std::string& mode, double tol) -> py::object {
        if (mode == "joint") return to_python(cli::to_json(check_symmetrizable(legal_family(ch), tol)));
        if (mode != "per-t") throw ValidationError("mode must be 'per-t' or 'joint'");
        py::list out;
        for (std::size_t t = 0; t < ch.num_states(); ++t) {
          auto v = cli::to_json(check_symmetrizable(legal_family_at(ch, t), tol));
          v["t"] = ch.states()[t];
          out.append(to_python(v));
        }
        return out;
      },
      py::arg("channel"), py::arg("mode") = "joint", py::arg("tol") = kDefaultSymTolerance,
      "Joint mode returns one verdict; per-t mode returns one verdict per state.");

  m.def(
      "bound",
      [](const CqavwcChannel& ch, const std::string& mode, std::size_t n, double grid_step, double final_step,
         double tol, std::size_t max_dim, std::size_t max_input_seqs, std::size_t max_state_seqs) {
        SimplexGrid grid;
        grid.step = grid_step;
        grid.final_step = final_step;
        const auto caps = caps_of(max_dim, max_input_seqs, max_state_seqs);
        if (mode != "no-csi" && mode != "csi") throw ValidationError("mode must be 'no-csi' or 'csi'");
        const auto r = mode == "csi" ? lower_bound_csi(ch, grid, n, caps, tol) : lower_bound_no_csi(ch, grid, n, caps, tol);
        return to_python(cli::to_json(r, ch));
      },
      py::arg("channel"), py::arg("mode") = "no-csi", py::arg("n") = 1, py::arg("grid_step") = 1.0 / 32.0,
      py::arg("final_step") = 1.0 / 1024.0, py::arg("tol") = kDefaultSymTolerance, py::arg("max_dim") = 4096,
      py::arg("max_input_seqs") = 4096, py::arg("max_state_seqs") = 4096);

  m.def(
      "simulate",
      [](const CqavwcChannel& ch, std::size_t n, std::size_t J, std::size_t L, std::uint64_t seed, double alpha,
         double delta, std::optional<double> decoder_delta, std::optional<std::vector<double>> p,
         const std::string& projector_source, std::size_t max_dim, std::size_t max_input_seqs,
         std::size_t max_state_seqs) {
        ExperimentConfig cfg;
        cfg.n = n;
        cfg.J = J;
        cfg.L = L;
        cfg.seed = seed;
        cfg.alpha = alpha;
        cfg.delta = delta;
        cfg.decoder_delta = decoder_delta;
        cfg.p = p ? *p : Distribution::uniform(ch.inputs()).weights();
        if (projector_source != "eve" && projector_source != "legal")
          throw ValidationError("projector_source must be 'eve' or 'legal'");
        cfg.projector_source = projector_source == "legal" ? ProjectorSource::legal : ProjectorSource::eve;
        cfg.caps = caps_of(max_dim, max_input_seqs, max_state_seqs);
        std::optional<SecrecyExperimentReport> r;
        {
          py::gil_scoped_release release;
          r = run_secrecy_experiment(ch, cfg);
        }
        return to_python(cli::to_json(*r, ch));
      },
      py::arg("channel"), py::arg("n"), py::arg("J"), py::arg("L"), py::arg("seed") = 0, py::arg("alpha") = 0.5,
      py::arg("delta") = 0.25, py::arg("decoder_delta") = py::none(), py::arg("p") = py::none(),
      py::arg("projector_source") = "eve", py::arg("max_dim") = 4096, py::arg("max_input_seqs") = 4096,
      py::arg("max_state_seqs") = 4096, "One seeded secrecy experiment; returns the same record as the CLI.");

  m.def(
      "lemma_sweeps",
      [](std::size_t trials, std::size_t dim, std::uint64_t seed, std::size_t letters) {
        LemmaSweepConfig cfg;
        cfg.trials = trials;
        cfg.dim = dim;
        cfg.seed = seed;
        cfg.projector_letters = letters;
        return to_python(cli::to_json(run_lemma_sweeps(cfg)));
      },
      py::arg("trials") = 1000, py::arg("dim") = 2, py::arg("seed") = 0, py::arg("letters") = 100);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
