#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "emphlab/ar_model.hpp"
#include "emphlab/codec_sim.hpp"
#include "emphlab/core_dsp.hpp"
#include "emphlab/errors.hpp"
#include "emphlab/estimator.hpp"
#include "emphlab/metrics.hpp"

namespace py = pybind11;
using namespace emphlab;

namespace {

using InArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const InArray& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

py::array_t<double> to_numpy(std::vector<double> v) {
  auto* heap = new std::vector<double>(std::move(v));
  py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<double>*>(p); });
  return py::array_t<double>(static_cast<py::ssize_t>(heap->size()), heap->data(), owner);
}

WindowKind window_kind(const std::string& name) {
  if (name == "hanning" || name == "hann") return WindowKind::hanning;
  if (name == "rectangular") return WindowKind::rectangular;
  throw std::invalid_argument("unknown window kind '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_emphlab, m) {
  m.doc() = "Self-adaptive first-order pre-/de-emphasis filtering";

  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_ArithmeticError);

  py::class_<FrameConfig>(m, "FrameConfig")
      .def(py::init<>())
      .def(py::init([](int rate, std::size_t frame, std::size_t window, std::size_t lookahead) {
             FrameConfig c{rate, frame, window, lookahead};
             c.validate();
             return c;
           }),
           py::arg("sample_rate_hz"), py::arg("frame_len"), py::arg("window_len"),
           py::arg("lookahead_len"))
      .def_static("from_ms", &FrameConfig::from_ms, py::arg("sample_rate_hz"),
                  py::arg("frame_ms"), py::arg("window_ms"), py::arg("lookahead_ms"))
      .def_readwrite("sample_rate_hz", &FrameConfig::sample_rate_hz)
      .def_readwrite("frame_len", &FrameConfig::frame_len)
      .def_readwrite("window_len", &FrameConfig::window_len)
      .def_readwrite("lookahead_len", &FrameConfig::lookahead_len)
      .def("validate", &FrameConfig::validate)
      .def("__repr__", [](const FrameConfig& c) {
        std::ostringstream s;
        s << "FrameConfig(sample_rate_hz=" << c.sample_rate_hz << ", frame_len=" << c.frame_len
          << ", window_len=" << c.window_len << ", lookahead_len=" << c.lookahead_len << ")";
        return s.str();
      });

  py::class_<AutocorrPair>(m, "AutocorrPair")
      .def_readonly("r0", &AutocorrPair::r0)
      .def_readonly("r1", &AutocorrPair::r1)
      .def_readonly("ratio", &AutocorrPair::ratio)
      .def_property_readonly("silent", &AutocorrPair::silent);

  py::class_<FilterState>(m, "FilterState")
      .def(py::init<>())
      .def_readwrite("prev_input", &FilterState::prev_input)
      .def_readwrite("prev_output", &FilterState::prev_output);

  m.def("make_window",
        [](const std::string& kind, std::size_t len) { return to_numpy(make_window(window_kind(kind), len)); },
        py::arg("kind"), py::arg("len"));
  m.def("autocorr_01", [](const InArray& x, const InArray& w) { return autocorr_01(view(x), view(w)); },
        py::arg("samples"), py::arg("window"));
  m.def("pre_emphasize",
        [](const InArray& x, double tap, FilterState& state) {
          return to_numpy(pre_emphasize(view(x), tap, state));
        },
        py::arg("frame"), py::arg("tap"), py::arg("state"),
        "FIR pre-emphasis; `state` is updated in place.");
  m.def("de_emphasize",
        [](const InArray& x, double tap, FilterState& state) {
          return to_numpy(de_emphasize(view(x), tap, state));
        },
        py::arg("frame"), py::arg("tap"), py::arg("state"),
        "IIR de-emphasis; `state` is updated in place.");

  m.def("synthesize_ar1",
        [](double alpha, double sigma2, std::size_t n, std::uint64_t seed) {
          return to_numpy(synthesize_ar1(ArModel{alpha, sigma2}, n, seed));
        },
        py::arg("alpha"), py::arg("sigma2"), py::arg("n_samples"), py::arg("seed"));
  m.def("rho_of_alpha", &rho_of_alpha, py::arg("alpha"), py::arg("gamma"));
  m.def("default_alpha_grid", &default_alpha_grid);

  py::class_<MonteCarloReport>(m, "MonteCarloReport")
      .def_readonly("true_alpha", &MonteCarloReport::true_alpha)
      .def_property_readonly("estimates_encoder",
                             [](const MonteCarloReport& r) { return to_numpy(r.estimates_encoder); })
      .def_property_readonly("estimates_decoder",
                             [](const MonteCarloReport& r) { return to_numpy(r.estimates_decoder); })
      .def_property_readonly("ci95_encoder", [](const MonteCarloReport& r) {
        return py::make_tuple(r.ci95_encoder.low, r.ci95_encoder.high);
      })
      .def_property_readonly("ci95_decoder", [](const MonteCarloReport& r) {
        return py::make_tuple(r.ci95_decoder.low, r.ci95_decoder.high);
      });

  m.def("run_monte_carlo",
        [](std::vector<double> grid, double gamma, std::size_t n_trials, std::size_t frame_len,
           std::uint64_t seed, unsigned threads) {
          MonteCarloConfig c;
          c.alpha_grid = std::move(grid);
          c.gamma = gamma;
          c.n_trials = n_trials;
          c.frame_len = frame_len;
          c.seed = seed;
          c.threads = threads;
          py::gil_scoped_release release;
          return run_monte_carlo(c);
        },
        py::arg("alpha_grid"), py::arg("gamma") = 0.7, py::arg("n_trials") = 2000,
        py::arg("frame_len") = 1440, py::arg("seed") = 1, py::arg("threads") = 0);

  m.def("estimate_alpha_encoder", [](const AutocorrPair& p) {
    const auto e = estimate_alpha_encoder(p);
    return py::make_tuple(e.alpha, e.silent);
  });

  py::class_<CubicCoeffs>(m, "CubicCoeffs")
      .def_readonly("c3", &CubicCoeffs::c3)
      .def_readonly("c2", &CubicCoeffs::c2)
      .def_readonly("c1", &CubicCoeffs::c1)
      .def_readonly("c0", &CubicCoeffs::c0)
      .def("__call__", &CubicCoeffs::operator());
  m.def("build_cubic", &build_cubic, py::arg("gamma"), py::arg("rho"));
  m.def("solve_alpha", py::overload_cast<double, double>(&solve_alpha), py::arg("gamma"),
        py::arg("rho"));
  m.def("rho_max", &rho_max, py::arg("gamma"));

  py::class_<DeemphasisTable>(m, "DeemphasisTable")
      .def_property_readonly("gamma", &DeemphasisTable::gamma)
      .def_property_readonly("rho_grid", [](const DeemphasisTable& t) {
        return to_numpy({t.rho_grid().begin(), t.rho_grid().end()});
      })
      .def_property_readonly("alpha_values", [](const DeemphasisTable& t) {
        return to_numpy({t.alpha_values().begin(), t.alpha_values().end()});
      })
      .def_property_readonly("domain", [](const DeemphasisTable& t) {
        return py::make_tuple(t.rho_min(), t.rho_max());
      })
      .def("lookup", &DeemphasisTable::lookup, py::arg("rho"))
      .def("__len__", &DeemphasisTable::size);
  m.def("build_table", &build_table, py::arg("gamma"), py::arg("n_entries") = kDefaultTableSize);
  m.def("lookup_alpha", &lookup_alpha, py::arg("table"), py::arg("rho"));

  py::class_<QuantizerSpec>(m, "QuantizerSpec")
      .def(py::init([](double step, double clip) { return QuantizerSpec{step, clip}; }),
           py::arg("step"), py::arg("clip"))
      .def_static("for_bits", &QuantizerSpec::for_bits, py::arg("step"), py::arg("bits"))
      .def_readwrite("step", &QuantizerSpec::step)
      .def_readwrite("clip", &QuantizerSpec::clip);
  m.def("quantize", [](const InArray& x, const QuantizerSpec& q) { return to_numpy(quantize(view(x), q)); },
        py::arg("samples"), py::arg("spec"));
  m.def("tune_step", [](const InArray& x, int bits) { return tune_step(view(x), bits); },
        py::arg("signal"), py::arg("bits_per_sample"));

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_property_readonly("decoded", [](const PipelineResult& r) { return to_numpy(r.decoded); })
      .def_property_readonly("coded", [](const PipelineResult& r) { return to_numpy(r.coded); })
      .def_property_readonly("per_frame_coeffs_enc",
                             [](const PipelineResult& r) { return to_numpy(r.per_frame_coeffs_enc); })
      .def_property_readonly("per_frame_coeffs_dec",
                             [](const PipelineResult& r) { return to_numpy(r.per_frame_coeffs_dec); })
      .def_readonly("snr_db", &PipelineResult::snr_db)
      .def_readonly("bits_per_sample", &PipelineResult::bits_per_sample)
      .def_readonly("quantizer", &PipelineResult::quantizer)
      .def_readonly("decoder_delay", &PipelineResult::decoder_delay);

  m.def("run_pipeline",
        [](const InArray& x, const std::string& mode, double weight, const FrameConfig& config,
           std::optional<int> bits) {
          const CodecMode cm = parse_mode(mode, weight);
          const auto signal = view(x);
          py::gil_scoped_release release;
          return run_pipeline(signal, cm, config, bits);
        },
        py::arg("signal"), py::arg("mode"), py::arg("gamma") = 0.7,
        py::arg("config") = FrameConfig{}, py::arg("bits") = py::none(),
        "Codec simulation. mode is one of none, fixed, forward, backward, self; "
        "gamma is beta for fixed mode; bits=None disables quantization.");

  m.def("snr_db", [](const InArray& r, const InArray& t) { return snr_db(view(r), view(t)); },
        py::arg("reference"), py::arg("test"));

  py::class_<LsdReport>(m, "LsdReport")
      .def_readonly("mean_lsd_db", &LsdReport::mean_lsd_db)
      .def_readonly("n_frames", &LsdReport::n_frames)
      .def_property_readonly("per_frame_lsd_db",
                             [](const LsdReport& r) { return to_numpy(r.per_frame_lsd_db); });
  m.def("lsd_db",
        [](const InArray& r, const InArray& t, const FrameConfig& c) {
          return lsd_db(view(r), view(t), c);
        },
        py::arg("reference"), py::arg("test"), py::arg("config") = FrameConfig{});
}
