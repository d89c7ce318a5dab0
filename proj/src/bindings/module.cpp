#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>

#include "mxpbf/calibration.hpp"
#include "mxpbf/cov_pbf.hpp"
#include "mxpbf/csv.hpp"
#include "mxpbf/mean_pbf.hpp"
#include "mxpbf/metrics.hpp"
#include "mxpbf/multiscale.hpp"
#include "mxpbf/pipeline.hpp"
#include "mxpbf/segmenter.hpp"
#include "mxpbf/simgen.hpp"

namespace py = pybind11;
using namespace mxpbf;

namespace {

DataMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DataError("need at least one row");
    auto n = static_cast<index_t>(rows.size());
    auto p = static_cast<index_t>(rows.front().size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(p));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<index_t>(rows[r].size()) != p) {
            throw NonRectangular("row " + std::to_string(r + 1) + " has " +
                                 std::to_string(rows[r].size()) + " cells, expected " +
                                 std::to_string(p));
        }
        flat.insert(flat.end(), rows[r].begin(), rows[r].end());
    }
    return DataMatrix::from_row_major(n, p, flat);
}

std::vector<std::vector<double>> matrix_to_rows(const DataMatrix& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
    for (index_t i = 0; i < m.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m.cols()));
        for (index_t j = 0; j < m.cols(); ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m.at(i, j);
    }
    return rows;
}

Scenario make_scenario(const std::string& kind, const std::string& layout, index_t n, index_t p,
                       double signal, const std::string& signals, const std::string& structure,
                       std::uint64_t seed) {
    Scenario sc;
    sc.kind = kind == "mean" ? ScenarioKind::mean : ScenarioKind::covariance;
    sc.layout = layout == "single" ? Layout::single : Layout::multiple;
    sc.n = n;
    sc.p = p;
    sc.signal = signal;
    sc.signal_count = signals == "rare" ? SignalCount::rare : SignalCount::many;
    sc.structure = structure == "sparse" ? Structure::sparse : Structure::dense;
    sc.seed = seed;
    return sc;
}

} // namespace

PYBIND11_MODULE(_mxpbf, m) {
    m.doc() = "Maximum pairwise Bayes factor change point detection";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    py::class_<DataMatrix>(m, "DataMatrix")
        .def(py::init(&matrix_from_rows), py::arg("rows"))
        .def_property_readonly("n", &DataMatrix::rows)
        .def_property_readonly("p", &DataMatrix::cols)
        .def("at", [](const DataMatrix& d, index_t i, index_t j) { return d.at(i, j); },
             py::arg("i"), py::arg("j"), "0-based element access")
        .def("to_rows", &matrix_to_rows);

    py::class_<MeanScanResult>(m, "MeanScanResult")
        .def_readonly("center", &MeanScanResult::center)
        .def_readonly("log_mxpbf", &MeanScanResult::log_mxpbf)
        .def_readonly("witness_col", &MeanScanResult::witness_col)
        .def_readonly("all_degenerate", &MeanScanResult::all_degenerate);

    py::class_<CovScanResult>(m, "CovScanResult")
        .def_readonly("center", &CovScanResult::center)
        .def_readonly("log_mxpbf", &CovScanResult::log_mxpbf)
        .def_readonly("witness_i", &CovScanResult::witness_i)
        .def_readonly("witness_j", &CovScanResult::witness_j);

    py::class_<ChangePointSet>(m, "ChangePointSet")
        .def_readonly("points", &ChangePointSet::points)
        .def_readonly("evidence", &ChangePointSet::evidence)
        .def_readonly("window", &ChangePointSet::window);

    py::class_<MultiscaleResult>(m, "MultiscaleResult")
        .def_readonly("points", &MultiscaleResult::points)
        .def_property_readonly("groups", [](const MultiscaleResult& r) {
            std::vector<std::vector<std::pair<index_t, index_t>>> out;
            for (const auto& g : r.groups) {
                std::vector<std::pair<index_t, index_t>> members;
                for (const auto& mref : g.members) members.emplace_back(mref.window, mref.location);
                out.push_back(members);
            }
            return out;
        });

    m.def("log_pbf_mean",
          [](const std::vector<double>& left, const std::vector<double>& right, double alpha,
             index_t p) {
              MeanPbfParams params{alpha, static_cast<index_t>(left.size()), p};
              return log_pbf_mean(left, right, params);
          },
          py::arg("left"), py::arg("right"), py::arg("alpha"), py::arg("p") = 1);

    m.def("scan_mean",
          [](const DataMatrix& data, index_t n_w, double alpha, int workers) {
              MeanPbfParams params{alpha, n_w, data.cols()};
              ScanOptions options;
              options.workers = workers;
              return scan_mean(data, params, options);
          },
          py::arg("data"), py::arg("n_w"), py::arg("alpha"), py::arg("workers") = 0);

    m.def("log_pbf_cov",
          [](const DataMatrix& data, index_t l, index_t i, index_t j, index_t n_w, double alpha,
             double a0, double b0) {
              CovPbfParams params;
              params.alpha = alpha;
              params.a0 = a0;
              params.rates = {b0, b0, b0};
              params.n_w = n_w;
              params.p = data.cols();
              return log_pbf_cov(data, l, i, j, params);
          },
          py::arg("data"), py::arg("l"), py::arg("i"), py::arg("j"), py::arg("n_w"),
          py::arg("alpha"), py::arg("a0") = 0.01, py::arg("b0") = 0.01);

    m.def("scan_cov",
          [](const DataMatrix& data, index_t n_w, double alpha, int workers) {
              CovPbfParams params;
              params.alpha = alpha;
              params.n_w = n_w;
              params.p = data.cols();
              ScanOptions options;
              options.workers = workers;
              return scan_cov(data, params, options);
          },
          py::arg("data"), py::arg("n_w"), py::arg("alpha"), py::arg("workers") = 0);

    m.def("detect_changepoints",
          [](const std::vector<double>& profile, index_t first_center, index_t n_w,
             double threshold) {
              DetectionConfig config{std::log(threshold), n_w};
              return detect_changepoints({profile, first_center}, config);
          },
          py::arg("profile"), py::arg("first_center"), py::arg("n_w"), py::arg("threshold") = 10.0);

    m.def("aggregate_majority",
          [](const std::vector<std::vector<index_t>>& detections, const std::vector<index_t>& sizes) {
              WindowLadder ladder{sizes};
              std::vector<ChangePointSet> sets;
              for (std::size_t r = 0; r < detections.size(); ++r) {
                  ChangePointSet cps;
                  cps.points = detections[r];
                  cps.evidence.assign(detections[r].size(), 0.0);
                  cps.window = r < sizes.size() ? sizes[r] : 0;
                  sets.push_back(std::move(cps));
              }
              return aggregate_majority(sets, ladder);
          },
          py::arg("detections"), py::arg("windows"));

    m.def("shift_alpha", &shift_alpha, py::arg("log_bf"), py::arg("alpha_from"),
          py::arg("alpha_to"), py::arg("n_w"), py::arg("p"));

    m.def("calibrate_alpha",
          [](const DataMatrix& data, index_t n_w, const std::string& kind, double target_fpr,
             int n_sim, double threshold, std::uint64_t seed, int workers) {
              CalibrationConfig config;
              config.target_fpr = target_fpr;
              config.n_sim = n_sim;
              config.log_threshold = std::log(threshold);
              config.seed = seed;
              config.workers = workers;
              auto result = calibrate_alpha(
                  data, n_w, kind == "mean" ? ScanKind::mean : ScanKind::covariance, config);
              return result.alpha_hat;
          },
          py::arg("data"), py::arg("n_w"), py::arg("kind"), py::arg("target_fpr") = 0.05,
          py::arg("n_sim") = 300, py::arg("threshold") = 10.0, py::arg("seed") = 0,
          py::arg("workers") = 0);

    m.def("f1_score",
          [](const std::vector<index_t>& truth, const std::vector<index_t>& detected, index_t margin,
             index_t n) {
              auto r = f1_score(truth, detected, MetricConfig{margin, n});
              return py::make_tuple(r.precision, r.recall, r.f1, r.tp_count);
          },
          py::arg("truth"), py::arg("detected"), py::arg("margin"), py::arg("n"));

    m.def("hausdorff",
          [](const std::vector<index_t>& truth, const std::vector<index_t>& detected, index_t n) {
              return hausdorff(truth, detected, MetricConfig{1, n});
          },
          py::arg("truth"), py::arg("detected"), py::arg("n"));

    m.def("rolling_center", &rolling_center, py::arg("data"), py::arg("n_w"));

    m.def("generate_scenario",
          [](const std::string& kind, const std::string& layout, index_t n, index_t p, double signal,
             const std::string& signals, const std::string& structure, std::uint64_t seed,
             std::uint64_t replicate) {
              auto sc = make_scenario(kind, layout, n, p, signal, signals, structure, seed);
              auto dataset = gen_scenario(sc, replicate);
              return py::make_tuple(std::move(dataset.data), dataset.truth);
          },
          py::arg("kind"), py::arg("layout"), py::arg("n"), py::arg("p"), py::arg("signal"),
          py::arg("signals") = "rare", py::arg("structure") = "sparse", py::arg("seed") = 0,
          py::arg("replicate") = 0);

    m.def("detect_combined",
          [](const DataMatrix& data, const std::vector<index_t>& windows, double threshold,
             std::optional<double> alpha, double target_fpr, int n_sim, std::uint64_t seed,
             int workers) {
              CombinedConfig config;
              config.ladder = WindowLadder{windows};
              config.log_threshold = std::log(threshold);
              config.fixed_alpha = alpha;
              config.calibration.target_fpr = target_fpr;
              config.calibration.n_sim = n_sim;
              config.calibration.log_threshold = std::log(threshold);
              config.calibration.seed = seed;
              config.workers = workers;
              auto result = detect_combined(data, config);
              std::vector<std::pair<index_t, std::string>> merged;
              for (const auto& pt : result.merged) {
                  merged.emplace_back(pt.location,
                                      pt.source == PointSource::covariance ? "covariance" : "mean");
              }
              return merged;
          },
          py::arg("data"), py::arg("windows"), py::arg("threshold") = 10.0,
          py::arg("alpha") = std::nullopt, py::arg("target_fpr") = 0.05, py::arg("n_sim") = 300,
          py::arg("seed") = 0, py::arg("workers") = 0);

    m.def("load_csv", &load_csv, py::arg("path"));
}
