#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "evfilt/baselines.hpp"
#include "evfilt/dif_core.hpp"
#include "evfilt/events.hpp"
#include "evfilt/hw_model.hpp"
#include "evfilt/metrics.hpp"
#include "evfilt/noise.hpp"
#include "evfilt/pipeline.hpp"
#include "evfilt/run.hpp"
#include "evfilt/scene.hpp"

namespace py = pybind11;
using namespace evfilt;

namespace {

template <class T, class Fn>
py::array_t<T> column(const EventStream& s, Fn get) {
  py::array_t<T> out(static_cast<py::ssize_t>(s.size()));
  auto v = out.template mutable_unchecked<1>();
  for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<py::ssize_t>(i)) = get(s.events[i]);
  return out;
}

EventStream from_arrays(py::array_t<std::int64_t, py::array::forcecast> t, py::array_t<std::int64_t, py::array::forcecast> x,
                        py::array_t<std::int64_t, py::array::forcecast> y, py::array_t<std::int64_t, py::array::forcecast> p,
                        std::uint16_t width, std::uint16_t height) {
  const auto n = t.size();
  if (x.size() != n || y.size() != n || p.size() != n) throw StreamError("t, x, y and p must have equal length");
  auto tv = t.unchecked<1>();
  auto xv = x.unchecked<1>();
  auto yv = y.unchecked<1>();
  auto pv = p.unchecked<1>();
  EventStream s{width, height, {}};
  s.events.resize(static_cast<std::size_t>(n));
  for (py::ssize_t i = 0; i < n; ++i) {
    if (xv(i) < 0 || yv(i) < 0 || xv(i) > 0xFFFF || yv(i) > 0xFFFF || pv(i) < 0 || pv(i) > 255) {
      throw FormatError(FormatError::Kind::out_of_range, static_cast<std::size_t>(i), "field out of range");
    }
    s.events[static_cast<std::size_t>(i)] = {tv(i), static_cast<std::uint16_t>(xv(i)),
                                             static_cast<std::uint16_t>(yv(i)), static_cast<std::uint8_t>(pv(i))};
  }
  validate(s);
  return s;
}

py::tuple scored_arrays(const std::vector<ScoredEvent>& scored) {
  py::array_t<double> score(static_cast<py::ssize_t>(scored.size()));
  py::array_t<bool> pass(static_cast<py::ssize_t>(scored.size()));
  auto sv = score.mutable_unchecked<1>();
  auto pv = pass.mutable_unchecked<1>();
  for (std::size_t i = 0; i < scored.size(); ++i) {
    sv(static_cast<py::ssize_t>(i)) = scored[i].score;
    pv(static_cast<py::ssize_t>(i)) = scored[i].pass;
  }
  return py::make_tuple(score, pass);
}

std::vector<ScoredEvent> attach_scores(const EventStream& s, py::array_t<double, py::array::forcecast> scores) {
  if (static_cast<std::size_t>(scores.size()) != s.size()) throw StreamError("one score per event is required");
  auto v = scores.unchecked<1>();
  std::vector<ScoredEvent> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = {s.events[i], v(static_cast<py::ssize_t>(i)), false};
  return out;
}

py::tuple curve(const std::vector<CurvePoint>& pts) {
  py::array_t<double> x(static_cast<py::ssize_t>(pts.size())), y(static_cast<py::ssize_t>(pts.size()));
  auto xv = x.mutable_unchecked<1>();
  auto yv = y.mutable_unchecked<1>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xv(static_cast<py::ssize_t>(i)) = pts[i].x;
    yv(static_cast<py::ssize_t>(i)) = pts[i].y;
  }
  return py::make_tuple(x, y);
}

py::dict stats_dict(const PipelineStats& s) {
  py::dict d;
  d["clock_hz"] = s.clock_hz;
  d["areas"] = s.areas;
  d["global_update_period_us"] = s.global_update_period_us;
  d["global_update_duration_us"] = s.global_update_duration_us;
  d["effective_meps"] = s.effective_meps;
  d["latency_cycles"] = s.latency_cycles;
  d["latency_ns"] = s.latency_ns();
  d["events_processed"] = s.events_processed;
  d["stall_cycles"] = s.stall_cycles;
  d["global_updates"] = s.global_updates;
  d["total_cycles"] = s.total_cycles;
  d["forwarded_reads"] = s.forwarded_reads;
  return d;
}

PipelineOptions pipeline_options(double clock_mhz, int overhead_cycles, bool forwarding) {
  PipelineOptions o;
  o.clock_hz = clock_mhz * 1e6;
  o.overhead_cycles = overhead_cycles;
  o.forwarding = forwarding;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DIF/BIF event-camera denoising filters, bit-accurate hardware model and evaluation metrics.";
  m.attr("__version__") = kToolVersion;

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<StreamError>(m, "StreamError", PyExc_ValueError);
  py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<EventStream>(m, "EventStream", "Time-ordered events; polarity 2/3 marks labeled noise.")
      .def(py::init([](std::uint16_t w, std::uint16_t h) { return EventStream{w, h, {}}; }), py::arg("width"),
           py::arg("height"))
      .def_static("from_arrays", &from_arrays, py::arg("t"), py::arg("x"), py::arg("y"), py::arg("p"),
                  py::arg("width"), py::arg("height"))
      .def_readonly("width", &EventStream::width)
      .def_readonly("height", &EventStream::height)
      .def_property_readonly("t", [](const EventStream& s) { return column<std::int64_t>(s, [](const Event& e) { return e.t; }); })
      .def_property_readonly("x", [](const EventStream& s) { return column<std::uint16_t>(s, [](const Event& e) { return e.x; }); })
      .def_property_readonly("y", [](const EventStream& s) { return column<std::uint16_t>(s, [](const Event& e) { return e.y; }); })
      .def_property_readonly("p", [](const EventStream& s) { return column<std::uint8_t>(s, [](const Event& e) { return e.p; }); })
      .def("__len__", &EventStream::size)
      .def("__eq__", [](const EventStream& a, const EventStream& b) { return a == b; })
      .def("__repr__", [](const EventStream& s) {
        return "<EventStream " + std::to_string(s.width) + "x" + std::to_string(s.height) + ", " +
               std::to_string(s.size()) + " events>";
      });

  m.def(
      "read_events",
      [](const std::filesystem::path& path) { return read_events(path, format_from_path(path)); },
      py::arg("path"), "Read an EVT64 or CSV (by extension) event file.");
  m.def(
      "write_events",
      [](const EventStream& s, const std::filesystem::path& path) { write_events(s, path, format_from_path(path)); },
      py::arg("stream"), py::arg("path"));
  m.def("merge_streams", &merge_streams, py::arg("clean"), py::arg("noise"));
  m.def("relabel_noise", &relabel_noise, py::arg("stream"));

  py::class_<NoiseConfig>(m, "NoiseConfig")
      .def(py::init<>())
      .def_readwrite("width", &NoiseConfig::width)
      .def_readwrite("height", &NoiseConfig::height)
      .def_readwrite("rate_hz", &NoiseConfig::rate_hz)
      .def_readwrite("duration_us", &NoiseConfig::duration_us)
      .def_readwrite("time_step_us", &NoiseConfig::time_step_us)
      .def_readwrite("start_us", &NoiseConfig::start_us)
      .def_readwrite("seed", &NoiseConfig::seed);
  m.def("generate_noise", &generate_noise, py::arg("config"));

  py::class_<SceneConfig>(m, "SceneConfig")
      .def(py::init<>())
      .def_readwrite("width", &SceneConfig::width)
      .def_readwrite("height", &SceneConfig::height)
      .def_readwrite("duration_us", &SceneConfig::duration_us)
      .def_readwrite("time_step_us", &SceneConfig::time_step_us)
      .def_readwrite("bars", &SceneConfig::bars)
      .def_readwrite("bar_width", &SceneConfig::bar_width)
      .def_readwrite("speed_px_per_s", &SceneConfig::speed_px_per_s)
      .def_readwrite("fire_probability", &SceneConfig::fire_probability)
      .def_readwrite("jitter_us", &SceneConfig::jitter_us)
      .def_readwrite("seed", &SceneConfig::seed);
  m.def("generate_moving_bars", &generate_moving_bars, py::arg("config"));

  py::class_<FilterConfig>(m, "FilterConfig")
      .def(py::init<>())
      .def_readwrite("scale", &FilterConfig::scale)
      .def_readwrite("update_shift", &FilterConfig::update_shift)
      .def_readwrite("filter_length_us", &FilterConfig::filter_length_us)
      .def_readwrite("global_update_period_us", &FilterConfig::global_update_period_us)
      .def_readwrite("init_interval_us", &FilterConfig::init_interval_us)
      .def_readwrite("init_timestamp_us", &FilterConfig::init_timestamp_us);

  py::class_<HwParams>(m, "HwParams")
      .def(py::init<>())
      .def_readwrite("trunc_bits", &HwParams::trunc_bits)
      .def_readwrite("k_sat_bits", &HwParams::k_sat_bits)
      .def_readwrite("iv_bits", &HwParams::iv_bits)
      .def_readonly("dt_bits", &HwParams::dt_bits)
      .def_readonly("dist_frac_bits", &HwParams::dist_frac_bits)
      .def_readonly("ts_bits", &HwParams::ts_bits);

  m.def(
      "run_filter",
      [](const EventStream& s, const std::string& algo, const FilterConfig& cfg, const HwParams& hw, int support) {
        std::vector<ScoredEvent> scored;
        {
          py::gil_scoped_release release;
          scored = run_filter(s, AlgoSpec::parse(algo, support), cfg, hw);
        }
        return scored_arrays(scored);
      },
      py::arg("stream"), py::arg("algo") = "dif", py::arg("config") = FilterConfig{}, py::arg("hw") = HwParams{},
      py::arg("support") = 2,
      "Run dif, bif, dif-hw, nnb or stcf[N]; returns (scores, passed) arrays. Baselines use "
      "config.filter_length_us as their window.");

  m.def(
      "evaluate",
      [](const EventStream& s, py::array_t<double, py::array::forcecast> scores, std::int64_t skip_us) {
        const auto scored = attach_scores(s, scores);
        const MetricOptions opt{skip_us};
        const RocCurve roc = roc_from_scores(scored, opt);
        const PrCurve pr = auprc_from_scores(scored, opt);
        py::dict d;
        d["auroc"] = roc.auroc;
        d["auprc"] = pr.auprc;
        d["roc"] = curve(roc.points);
        d["pr"] = curve(pr.points);
        return d;
      },
      py::arg("stream"), py::arg("scores"), py::arg("skip_us") = 0,
      "AUROC/AUPRC of scores against the stream's noise labels (pass iff score < threshold).");

  m.def(
      "sparsity",
      [](const EventStream& s, std::int64_t window_us, std::int64_t duration_us) {
        const Sparsity sp = sparsity(s, window_us, duration_us);
        return py::make_tuple(sp.mean, sp.median);
      },
      py::arg("stream"), py::arg("window_us") = 20'000, py::arg("duration_us") = 0);
  m.def("stability", &stability, py::arg("auroc_by_rate"));

  m.def(
      "pipeline_model",
      [](std::uint16_t w, std::uint16_t h, int scale, std::int64_t period_us, double clock_mhz, int overhead) {
        return stats_dict(pipeline_model(w, h, scale, period_us, pipeline_options(clock_mhz, overhead, true)));
      },
      py::arg("width"), py::arg("height"), py::arg("scale") = 16, py::arg("global_update_period_us") = 20'000,
      py::arg("clock_mhz") = 312.70, py::arg("overhead_cycles") = kDefaultGlobalUpdateOverheadCycles);

  m.def(
      "pipeline_simulate",
      [](const EventStream& s, const FilterConfig& cfg, const HwParams& hw, double clock_mhz, bool forwarding) {
        PipelineResult r;
        {
          py::gil_scoped_release release;
          r = pipeline_simulate(s, cfg, hw, pipeline_options(clock_mhz, kDefaultGlobalUpdateOverheadCycles, forwarding));
        }
        py::tuple arrays = scored_arrays(r.decisions);
        return py::make_tuple(arrays[0], arrays[1], stats_dict(r.stats));
      },
      py::arg("stream"), py::arg("config") = FilterConfig{}, py::arg("hw") = HwParams{},
      py::arg("clock_mhz") = 312.70, py::arg("forwarding") = true);
}
