#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wbf/errors.hpp"
#include "wbf/estimators.hpp"
#include "wbf/harness.hpp"
#include "wbf/planners.hpp"

namespace py = pybind11;

namespace {

template <class T>
py::array_t<T> to_numpy(const wbf::Grid<T>& grid) {
  py::array_t<T> out({grid.height(), grid.width()});
  std::copy(grid.data().begin(), grid.data().end(), out.mutable_data());
  return out;
}

wbf::FieldGrid from_numpy(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array (height, width)");
  wbf::FieldGrid grid(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), grid.data().begin());
  return grid;
}

wbf::FieldSlice slice_from(const std::vector<py::array_t<float, py::array::c_style | py::array::forcecast>>& arrays) {
  if (arrays.size() != wbf::kMeasurementCount) throw std::invalid_argument("expected [tylcv, ccr, humidity] arrays");
  return {from_numpy(arrays[0]), from_numpy(arrays[1]), from_numpy(arrays[2])};
}

py::dict report_dict(const wbf::ScoreReport& r) {
  py::dict d;
  d["total_loss"] = r.total_loss;
  d["score"] = r.score();
  d["normalizer"] = r.normalizer;
  d["timepoints"] = r.timepoints;
  d["component"] = r.component;
  d["error_sum"] = r.error_sum;
  return d;
}

std::vector<std::pair<int, int>> moves_list(const std::vector<wbf::Move>& moves) {
  std::vector<std::pair<int, int>> out;
  out.reserve(moves.size());
  for (auto m : moves) out.emplace_back(m.dx, m.dy);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Benchmark core: environment, planners, estimators and scoring.";

  py::register_exception<wbf::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<wbf::ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<wbf::EstimatorError>(m, "EstimatorError", PyExc_RuntimeError);
  py::register_exception<wbf::DegenerateNormalizer>(m, "DegenerateNormalizer", PyExc_ValueError);

  py::enum_<wbf::Measurement>(m, "Measurement")
      .value("TYLCV", wbf::Measurement::Tylcv)
      .value("CCR", wbf::Measurement::Ccr)
      .value("HUMIDITY", wbf::Measurement::Humidity);

  py::class_<wbf::Geometry, std::shared_ptr<wbf::Geometry>>(m, "Geometry")
      .def_property_readonly("name", &wbf::Geometry::name)
      .def_property_readonly("width", &wbf::Geometry::width)
      .def_property_readonly("height", &wbf::Geometry::height)
      .def("kinds", [](const wbf::Geometry& g) {
        py::array_t<std::uint8_t> out({g.height(), g.width()});
        auto* p = out.mutable_data();
        for (const auto& c : g.cells().data()) *p++ = static_cast<std::uint8_t>(c.kind);
        return out;
      }, "Crop kind codes: 0 unplanted, 1 tomato, 2 strawberry, 3 pond, 4 wetland");

  m.def("build_geometry", [](const std::string& name) { return std::make_shared<wbf::Geometry>(wbf::build_geometry(name)); });
  m.def("relevance_mask", [](const wbf::Geometry& g, wbf::Measurement meas) { return to_numpy(wbf::relevance_mask(g, meas)); });
  m.def("susceptibility_mask",
        [](const wbf::Geometry& g, wbf::Measurement meas) { return to_numpy(wbf::susceptibility_mask(g, meas)); });

  m.def("asymmetric_error", &wbf::asymmetric_error, py::arg("truth"), py::arg("estimate"), py::arg("c_minus"),
        py::arg("c_plus"));

  m.def(
      "compute_loss",
      [](const std::vector<py::array_t<float, py::array::c_style | py::array::forcecast>>& truth,
         const std::vector<py::array_t<float, py::array::c_style | py::array::forcecast>>& estimate,
         const std::string& geometry, std::array<double, 3> weights) {
        wbf::ScoreConfig cfg;
        cfg.weights = weights;
        const wbf::Geometry g = wbf::build_geometry(geometry);
        return report_dict(wbf::compute_loss(slice_from(truth), slice_from(estimate), wbf::relevance_masks(g), cfg));
      },
      py::arg("truth"), py::arg("estimate"), py::arg("geometry"), py::arg("weights") = std::array<double, 3>{1.0, 0.2, 0.1},
      "Loss of one [tylcv, ccr, humidity] estimate against ground truth with the default asymmetry table.");

  m.def(
      "environment_trajectory",
      [](const std::string& geometry, int days, std::uint64_t seed) {
        wbf::EnvironmentParams params;
        params.tylcv.rng_seed = seed;
        params.ccr.rng_seed = seed + 1;
        params.humidity.rng_seed = seed + 2;
        wbf::Environment env = wbf::init_environment(wbf::make_geometry(geometry), params);
        py::list out;
        for (int d = 0; d <= days; ++d) {
          if (d > 0) wbf::advance_day(env, params);
          py::list fields;
          for (auto meas : wbf::kMeasurements) fields.append(to_numpy(env.field(meas)));
          out.append(fields);
        }
        return out;
      },
      py::arg("geometry"), py::arg("days"), py::arg("seed") = 1,
      "Default-parameter trajectory: one [tylcv, ccr, humidity] list per day, day 0 included.");

  m.def(
      "estimate_adaptive_disk",
      [](const std::vector<std::tuple<int, int, int, double>>& samples, int width, int height, int r_min,
         double default_value) {
        std::vector<wbf::Observation> obs;
        for (const auto& [x, y, t, v] : samples) {
          wbf::Observation o;
          o.position = {x, y};
          o.timestep = t;
          o.values.fill(static_cast<float>(v));
          obs.push_back(o);
        }
        wbf::AdaptiveDiskParams p;
        p.r_min = r_min;
        p.default_value.fill(default_value);
        return to_numpy(wbf::estimate_adaptive_disk(obs, wbf::Measurement::Tylcv, p, width, height));
      },
      py::arg("samples"), py::arg("width"), py::arg("height"), py::arg("r_min") = 1, py::arg("default_value") = 1.0,
      "samples: list of (x, y, timestep, value).");

  m.def(
      "gp_fit_predict",
      [](const std::vector<std::tuple<double, double, double>>& samples, int width, int height, int restarts,
         std::uint64_t seed) {
        wbf::TrainingSet data;
        data.inputs.resize(static_cast<Eigen::Index>(samples.size()), 2);
        data.targets.resize(static_cast<Eigen::Index>(samples.size()));
        for (std::size_t i = 0; i < samples.size(); ++i) {
          const auto& [x, y, v] = samples[i];
          data.inputs(static_cast<Eigen::Index>(i), 0) = x;
          data.inputs(static_cast<Eigen::Index>(i), 1) = y;
          data.targets[static_cast<Eigen::Index>(i)] = v;
        }
        wbf::GPParams p;
        p.restarts = restarts;
        p.rng_seed = seed;
        const wbf::GaussianProcess gp = wbf::gp_fit(data, p);
        const wbf::GPGridPrediction pred = wbf::gp_predict(gp, width, height);
        py::dict d;
        d["mean"] = to_numpy(pred.mean);
        d["variance"] = to_numpy(pred.variance);
        d["length_scale"] = gp.hyper().length_scale;
        d["signal_variance"] = gp.hyper().signal_variance;
        d["noise_variance"] = gp.hyper().noise_variance;
        d["log_marginal_likelihood"] = gp.log_marginal_likelihood();
        return d;
      },
      py::arg("samples"), py::arg("width"), py::arg("height"), py::arg("restarts") = 5, py::arg("seed") = 11,
      "samples: list of (x, y, value). Returns the fitted posterior over the grid.");

  m.def("plan_lawnmower", [](int budget, int x0, int y0, int x1, int y1) {
    const auto plan = wbf::plan_lawnmower(wbf::PlannerBudget{budget, 0}, wbf::CellRect{x0, y0, x1, y1});
    return py::make_tuple(plan.spacing, moves_list(plan.moves));
  });
  m.def("plan_spiral", [](int budget, int x0, int y0, int x1, int y1) {
    const auto plan = wbf::plan_spiral(wbf::PlannerBudget{budget, 0}, wbf::CellRect{x0, y0, x1, y1});
    return py::make_tuple(plan.spacing, moves_list(plan.moves));
  });

  m.def(
      "run_scenario",
      [](const std::string& config_json, std::optional<std::uint64_t> seed) {
        const wbf::ScenarioConfig config = wbf::parse_config(nlohmann::json::parse(config_json), seed);
        wbf::RunRecord record;
        {
          py::gil_scoped_release release;
          record = wbf::run_scenario(config);
        }
        py::dict d;
        d["config_hash"] = record.config_hash;
        std::vector<std::tuple<int, double>> series;
        for (const auto& p : record.loss_series) series.emplace_back(p.timestep, p.total);
        d["loss_series"] = series;
        d["final_report"] = record.final_report ? py::object(report_dict(*record.final_report)) : py::none();
        d["observations"] = record.observations.size();
        d["warnings"] = record.warnings;
        d["loss_series_csv"] = wbf::loss_series_csv(record.loss_series);
        return d;
      },
      py::arg("config_json"), py::arg("seed") = py::none(),
      "Runs a scenario described by a JSON config string (no files written).");
}
