#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hodmd/calibrate.hpp"
#include "hodmd/cli.hpp"
#include "hodmd/error.hpp"
#include "hodmd/forecast.hpp"
#include "hodmd/hodmd.hpp"
#include "hodmd/ingest.hpp"
#include "hodmd/mode_select.hpp"

#include <sstream>

namespace py = pybind11;
using namespace hodmd;

namespace {

TimeSeriesGrid make_grid(const Eigen::MatrixXd& values, double dt, double t0, std::vector<std::string> names) {
  TimeSeriesGrid g;
  g.values = values;
  g.dt = dt;
  g.t0 = t0;
  if (names.empty())
    for (Eigen::Index j = 0; j < values.rows(); ++j) names.push_back("ch" + std::to_string(j + 1));
  g.channel_names = std::move(names);
  return g;
}

}  // namespace

PYBIND11_MODULE(_hodmd, m) {
  m.doc() = "Higher-order dynamic mode decomposition for multi-channel time series.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", validation.ptr());
  py::register_exception<RangeError>(m, "RangeError", validation.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", validation.ptr());
  py::register_exception<ConjugateClosureError>(m, "ConjugateClosureError", numerical.ptr());
  py::register_exception<BranchCutError>(m, "BranchCutError", numerical.ptr());

  py::class_<TimeSeriesGrid>(m, "Grid")
      .def(py::init(&make_grid), py::arg("values"), py::arg("dt") = 1.0, py::arg("t0") = 0.0,
           py::arg("channel_names") = std::vector<std::string>{})
      .def_readwrite("values", &TimeSeriesGrid::values)
      .def_readwrite("dt", &TimeSeriesGrid::dt)
      .def_readwrite("t0", &TimeSeriesGrid::t0)
      .def_readwrite("channel_names", &TimeSeriesGrid::channel_names)
      .def_readonly("offsets", &TimeSeriesGrid::offsets)
      .def_property_readonly("channels", &TimeSeriesGrid::channels)
      .def_property_readonly("snapshots", &TimeSeriesGrid::snapshots);

  py::class_<HodmdOptions>(m, "Options")
      .def(py::init([](Eigen::Index d, double eps1, std::optional<double> eps2, bool fb) {
             return HodmdOptions{d, eps1, eps2, fb};
           }),
           py::arg("d") = 1, py::arg("eps1") = 0.01, py::arg("eps2") = py::none(), py::arg("fb") = true)
      .def_readwrite("d", &HodmdOptions::d)
      .def_readwrite("eps1", &HodmdOptions::eps1)
      .def_readwrite("eps2", &HodmdOptions::eps2)
      .def_readwrite("fb", &HodmdOptions::fb);

  py::class_<DmdSpectrum>(m, "Spectrum")
      .def_readonly("modes", &DmdSpectrum::modes)
      .def_readonly("amplitudes", &DmdSpectrum::amplitudes)
      .def_readonly("growth_rates", &DmdSpectrum::growth_rates)
      .def_readonly("frequencies", &DmdSpectrum::frequencies)
      .def_readonly("offsets", &DmdSpectrum::offsets)
      .def_readonly("dt", &DmdSpectrum::dt)
      .def_readonly("t0", &DmdSpectrum::t0)
      .def_readonly("num_snapshots", &DmdSpectrum::num_snapshots)
      .def_readonly("d", &DmdSpectrum::d)
      .def_readonly("fb", &DmdSpectrum::fb)
      .def_readonly("warnings", &DmdSpectrum::warnings)
      .def("__len__", &DmdSpectrum::size)
      .def("cycles_per_sample", &DmdSpectrum::cycles_per_sample)
      .def("cycles_per_day", &DmdSpectrum::cycles_per_day);

  py::class_<ModePair>(m, "ModePair")
      .def_readonly("first", &ModePair::first)
      .def_readonly("second", &ModePair::second)
      .def_readonly("unmatched", &ModePair::unmatched);

  py::class_<RankedSpectrum>(m, "RankedSpectrum")
      .def_readonly("spectrum", &RankedSpectrum::spectrum)
      .def_readonly("contributions", &RankedSpectrum::contributions)
      .def_readonly("order", &RankedSpectrum::order)
      .def_readonly("pairs", &RankedSpectrum::pairs)
      .def_readonly("warnings", &RankedSpectrum::warnings);

  py::class_<ForecastResult>(m, "Forecast")
      .def_readonly("times", &ForecastResult::times)
      .def_readonly("values", &ForecastResult::values)
      .def_readonly("spectrum_id", &ForecastResult::spectrum_id)
      .def_readonly("horizon_split", &ForecastResult::horizon_split)
      .def_readonly("warnings", &ForecastResult::warnings);

  m.def("load_csv", [](const std::string& path) { return load_csv(path); }, py::arg("path"));
  m.def("fill_gaps", &fill_gaps, py::arg("grid"));
  m.def("center", &center, py::arg("grid"));
  m.def("vapour_pressure_deficit", &vapour_pressure_deficit, py::arg("temperature_c"), py::arg("relative_humidity"));

  m.def("hodmd", &hodmd::hodmd, py::arg("grid"), py::arg("options") = HodmdOptions{});
  m.def("rank_and_pair", &rank_and_pair, py::arg("spectrum"), py::arg("growth_limit") = kDefaultGrowthLimit);
  m.def("truncate", &hodmd::truncate, py::arg("ranked"), py::arg("num_pairs"));
  m.def("kept_modes", &kept_modes, py::arg("ranked"));
  m.def("evaluate_expansion", &evaluate_expansion, py::arg("spectrum"), py::arg("first"), py::arg("count"));
  m.def("forecast", &forecast, py::arg("spectrum"), py::arg("horizon"));
  m.def("reconstruct_and_forecast", &reconstruct_and_forecast, py::arg("spectrum"), py::arg("horizon"));
  m.def("rmse", &rmse, py::arg("pred"), py::arg("actual"));
  m.def("rrmse", &rrmse, py::arg("pred"), py::arg("actual"));

  m.def(
      "synth",
      [](const std::string& spec_json) { return synth_generate(cli::synth_spec_from_json(spec_json)); },
      py::arg("spec_json"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
