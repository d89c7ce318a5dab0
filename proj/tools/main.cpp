#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mxpbf/calibration.hpp"
#include "mxpbf/cov_pbf.hpp"
#include "mxpbf/csv.hpp"
#include "mxpbf/mean_pbf.hpp"
#include "mxpbf/metrics.hpp"
#include "mxpbf/multiscale.hpp"
#include "mxpbf/pipeline.hpp"
#include "mxpbf/report.hpp"
#include "mxpbf/segmenter.hpp"
#include "mxpbf/simgen.hpp"

namespace {

using mxpbf::index_t;
using mxpbf::Json;

struct CommonOpts {
    std::string input;
    std::string output = "-";
    std::string windows = "25,60,100";
    std::string alpha = "auto";
    double threshold = 10.0;          // raw Bayes-factor scale
    double fpr = 0.05;
    int nsim = 300;
    std::uint64_t seed = 0;
    bool scale_mad = false;
    int workers = 0;
    bool no_timing = false;
    std::string profile_out;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::vector<index_t> parse_windows(const std::string& text) {
    std::vector<index_t> sizes;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        try {
            sizes.push_back(std::stol(token));
        } catch (const std::exception&) {
            throw mxpbf::DataError("cannot parse window size '" + token + "'");
        }
    }
    return sizes;
}

std::optional<double> parse_alpha(const std::string& text) {
    if (text == "auto") return std::nullopt;
    try {
        double v = std::stod(text);
        if (v <= 0.0) throw mxpbf::DataError("alpha must be > 0");
        return v;
    } catch (const mxpbf::DataError&) {
        throw;
    } catch (const std::exception&) {
        throw mxpbf::DataError("alpha must be 'auto' or a positive number, got '" + text + "'");
    }
}

mxpbf::CalibrationConfig calibration_config(const CommonOpts& opts) {
    mxpbf::CalibrationConfig config;
    config.target_fpr = opts.fpr;
    config.n_sim = opts.nsim;
    config.log_threshold = std::log(opts.threshold);
    config.seed = opts.seed;
    config.workers = opts.workers;
    return config;
}

// Deterministic per-rung calibration seed (same scheme at any worker count).
std::uint64_t salted_seed(std::uint64_t seed, std::uint64_t salt) {
    return seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
}

mxpbf::DataMatrix load_input(const CommonOpts& opts, Json& config_echo) {
    mxpbf::DataMatrix data = mxpbf::load_csv(opts.input);
    if (opts.scale_mad) {
        auto unscaled = mxpbf::scale_mad(data);
        for (index_t j : unscaled) {
            std::cerr << "warning: column " << j << " has zero MAD and was left unscaled\n";
        }
    }
    config_echo["input"] = opts.input;
    config_echo["scale_mad"] = opts.scale_mad;
    return data;
}

Json config_json(const CommonOpts& opts) {
    // Settings that determine the result; execution knobs (workers, timing)
    // stay out so reports are byte-stable across them.
    return Json{{"windows", opts.windows}, {"alpha", opts.alpha},
                {"threshold", opts.threshold}, {"fpr", opts.fpr},
                {"nsim", opts.nsim},          {"seed", opts.seed}};
}

std::string profile_base(const CommonOpts& opts) {
    if (!opts.profile_out.empty()) return opts.profile_out;
    if (opts.output == "-") return "";
    std::string base = opts.output;
    if (base.size() > 5 && base.substr(base.size() - 5) == ".json") base.resize(base.size() - 5);
    return base + ".profile";
}

void maybe_write_profile(const CommonOpts& opts, index_t n_w, index_t first_center,
                         const std::vector<double>& values) {
    std::string base = profile_base(opts);
    if (base.empty()) return;
    std::vector<index_t> centers(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) centers[k] = first_center + static_cast<index_t>(k);
    mxpbf::save_profile_csv(centers, values, base + ".w" + std::to_string(n_w) + ".csv");
}

void finish_report(Json& report, const CommonOpts& opts, const Stopwatch& watch) {
    if (!opts.no_timing) report["timing_ms"] = watch.ms();
    mxpbf::write_report(report, opts.output);
}

int run_detect(const CommonOpts& opts, mxpbf::ScanKind kind, bool rolling_center_flag) {
    Stopwatch watch;
    Json config = config_json(opts);
    mxpbf::DataMatrix data = load_input(opts, config);

    mxpbf::WindowLadder ladder{parse_windows(opts.windows)};
    ladder.validate();
    for (index_t w : ladder.sizes) mxpbf::WindowConfig(w, data.rows());
    if (kind == mxpbf::ScanKind::covariance && data.cols() < 2) {
        throw mxpbf::DataError("the pairwise covariance method needs p >= 2 variables, got p = 1");
    }

    auto fixed_alpha = parse_alpha(opts.alpha);
    double log_threshold = std::log(opts.threshold);
    mxpbf::ScanOptions scan_options;
    scan_options.workers = opts.workers;

    Json per_window = Json::array();
    std::vector<mxpbf::ChangePointSet> detections;
    for (std::size_t r = 0; r < ladder.rungs(); ++r) {
        index_t w = ladder.sizes[r];
        mxpbf::DataMatrix working = rolling_center_flag ? mxpbf::rolling_center(data, w) : data;

        double alpha;
        if (fixed_alpha) {
            alpha = *fixed_alpha;
        } else {
            auto calib = calibration_config(opts);
            calib.seed = salted_seed(opts.seed, r);
            alpha = mxpbf::calibrate_alpha(working, w, kind, calib).alpha_hat;
        }

        std::vector<double> values;
        Json points = Json::array();
        if (kind == mxpbf::ScanKind::mean) {
            mxpbf::MeanPbfParams params{alpha, w, data.cols()};
            auto profile = mxpbf::scan_mean(working, params, scan_options);
            values = mxpbf::profile_values(profile);
            mxpbf::DetectionConfig det{log_threshold, w};
            auto cps = mxpbf::detect_changepoints({values, w + 1}, det);
            detections.push_back(cps);
            for (std::size_t k = 0; k < cps.points.size(); ++k) {
                const auto& at = profile[static_cast<std::size_t>(cps.points[k] - (w + 1))];
                points.push_back(Json{{"location", cps.points[k]},
                                      {"evidence", cps.evidence[k]},
                                      {"witness_col", at.witness_col}});
            }
        } else {
            mxpbf::CovPbfParams params;
            params.alpha = alpha;
            params.n_w = w;
            params.p = data.cols();
            auto profile = mxpbf::scan_cov(working, params, scan_options);
            values = mxpbf::profile_values(profile);
            mxpbf::DetectionConfig det{log_threshold, w};
            auto cps = mxpbf::detect_changepoints({values, w + 1}, det);
            detections.push_back(cps);
            for (std::size_t k = 0; k < cps.points.size(); ++k) {
                const auto& at = profile[static_cast<std::size_t>(cps.points[k] - (w + 1))];
                points.push_back(Json{{"location", cps.points[k]},
                                      {"evidence", cps.evidence[k]},
                                      {"witness_i", at.witness_i},
                                      {"witness_j", at.witness_j}});
            }
        }

        auto existence = mxpbf::test_existence({values, w + 1}, {log_threshold, w});
        per_window.push_back(Json{{"window", w},
                                  {"alpha", alpha},
                                  {"alpha_source", fixed_alpha ? "fixed" : "auto"},
                                  {"existence",
                                   Json{{"exists", existence.exists},
                                        {"max_log_mxpbf", existence.max_value},
                                        {"witness_center", existence.witness_center}}},
                                  {"points", points}});
        maybe_write_profile(opts, w, w + 1, values);
    }

    auto aggregated = mxpbf::aggregate_majority(detections, ladder);
    std::string source = kind == mxpbf::ScanKind::mean ? "mean" : "covariance";

    Json report;
    report["tool"] = "mxpbf";
    report["command"] = kind == mxpbf::ScanKind::mean ? "detect-mean" : "detect-cov";
    report["config"] = config;
    report["n"] = data.rows();
    report["p"] = data.cols();
    report["per_window"] = per_window;
    report["points"] = mxpbf::to_json(aggregated, source);
    finish_report(report, opts, watch);
    return 0;
}

int run_detect_combined(const CommonOpts& opts) {
    Stopwatch watch;
    Json config = config_json(opts);
    mxpbf::DataMatrix data = load_input(opts, config);
    if (data.cols() < 2) {
        throw mxpbf::DataError("the pairwise covariance stage needs p >= 2 variables, got p = 1");
    }

    mxpbf::CombinedConfig combined;
    combined.ladder = mxpbf::WindowLadder{parse_windows(opts.windows)};
    combined.log_threshold = std::log(opts.threshold);
    combined.fixed_alpha = parse_alpha(opts.alpha);
    combined.calibration = calibration_config(opts);
    combined.workers = opts.workers;

    auto result = mxpbf::detect_combined(data, combined);

    Json cov_windows = Json::array();
    for (const auto& rung : result.cov_rungs) {
        cov_windows.push_back(Json{{"window", rung.n_w},
                                   {"alpha", rung.alpha},
                                   {"points", mxpbf::to_json(rung.detection)["points"]}});
        maybe_write_profile(opts, rung.n_w, rung.n_w + 1, rung.profile);
    }
    Json segments = Json::array();
    for (const auto& seg : result.mean_segments) {
        Json rungs = Json::array();
        for (const auto& rung : seg.rungs) {
            rungs.push_back(Json{{"window", rung.n_w},
                                 {"alpha", rung.alpha},
                                 {"points", mxpbf::to_json(rung.detection)["points"]}});
        }
        segments.push_back(Json{{"first", seg.first},
                                {"last", seg.last},
                                {"per_window", rungs},
                                {"points", mxpbf::to_json(seg.aggregated, "mean")}});
    }

    Json report;
    report["tool"] = "mxpbf";
    report["command"] = "detect-combined";
    report["config"] = config;
    report["n"] = data.rows();
    report["p"] = data.cols();
    report["covariance"] = Json{{"per_window", cov_windows},
                                {"points", mxpbf::to_json(result.cov, "covariance")}};
    report["mean_segments"] = segments;
    report["points"] = mxpbf::to_json(result);
    finish_report(report, opts, watch);
    return 0;
}

int run_calibrate(const CommonOpts& opts, const std::string& kind_name, index_t window,
                  const std::string& curve_out) {
    Stopwatch watch;
    Json config = config_json(opts);
    config["kind"] = kind_name;
    config["window"] = window;
    mxpbf::DataMatrix data = load_input(opts, config);

    mxpbf::ScanKind kind =
        kind_name == "mean" ? mxpbf::ScanKind::mean : mxpbf::ScanKind::covariance;
    auto calib = calibration_config(opts);
    auto result = mxpbf::calibrate_alpha(data, window, kind, calib);

    if (!curve_out.empty()) {
        std::ofstream out(curve_out);
        if (!out) throw mxpbf::IoError("cannot open '" + curve_out + "' for writing");
        out << "alpha,fpr\n";
        for (const auto& pt : result.curve) out << pt.alpha << ',' << pt.fpr << '\n';
    }

    Json report;
    report["tool"] = "mxpbf";
    report["command"] = "calibrate";
    report["config"] = config;
    report["n"] = data.rows();
    report["p"] = data.cols();
    report["calibration"] = mxpbf::to_json(result);
    finish_report(report, opts, watch);
    return 0;
}

int run_simulate(const CommonOpts& opts, const mxpbf::Scenario& scenario,
                 const std::string& truth_out) {
    Stopwatch watch;
    if (opts.output == "-") throw mxpbf::DataError("simulate needs --output for the data CSV");
    auto dataset = mxpbf::gen_scenario(scenario);
    mxpbf::save_csv(dataset.data, opts.output);

    std::string truth_path = truth_out;
    if (truth_path.empty()) {
        truth_path = opts.output;
        if (truth_path.size() > 4 && truth_path.substr(truth_path.size() - 4) == ".csv") {
            truth_path.resize(truth_path.size() - 4);
        }
        truth_path += ".truth.csv";
    }
    mxpbf::save_locations(dataset.truth, truth_path);

    Json report;
    report["tool"] = "mxpbf";
    report["command"] = "simulate";
    report["scenario"] = mxpbf::to_json(scenario);
    report["data_file"] = opts.output;
    report["truth_file"] = truth_path;
    if (!opts.no_timing) report["timing_ms"] = watch.ms();
    std::string report_path = opts.output + ".scenario.json";
    mxpbf::write_report(report, report_path);
    return 0;
}

int run_evaluate(const CommonOpts& opts, const std::string& report_path,
                 const std::string& truth_path, index_t margin, const std::string& label) {
    Stopwatch watch;
    Json detect_report = mxpbf::read_report(report_path);
    if (!detect_report.contains("points") || !detect_report.contains("n")) {
        throw mxpbf::ParseError("'" + report_path + "' does not look like a detect report");
    }
    std::vector<index_t> detected;
    for (const auto& pt : detect_report["points"]) {
        detected.push_back(pt.at("location").get<index_t>());
    }
    auto truth = mxpbf::load_locations(truth_path);

    mxpbf::MetricConfig metric;
    metric.margin = margin;
    metric.n = detect_report["n"].get<index_t>();
    auto f1 = mxpbf::f1_score(truth, detected, metric);
    auto haus = mxpbf::hausdorff(truth, detected, metric);

    Json row = mxpbf::to_json(f1);
    row["hausdorff"] = haus;
    row["scenario"] = label.empty() ? truth_path : label;
    row["method"] = detect_report.value("command", "unknown");
    row["margin"] = margin;
    row["n"] = metric.n;
    row["detected_count"] = detected.size();
    row["truth_count"] = truth.size();

    Json report;
    report["tool"] = "mxpbf";
    report["command"] = "evaluate";
    report["rows"] = Json::array({row});
    finish_report(report, opts, watch);
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_input) {
    if (needs_input) {
        cmd->add_option("-i,--input", opts.input, "input CSV file")->required();
    }
    cmd->add_option("-o,--output", opts.output, "report path ('-' for stdout)");
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--workers", opts.workers, "worker threads (0 = all available)");
    cmd->add_flag("--no-timing", opts.no_timing, "omit timing fields from the report");
}

void add_detect_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-w,--windows", opts.windows, "window sizes, comma separated (odd count)");
    cmd->add_option("--alpha", opts.alpha, "prior exponent alpha, or 'auto' to calibrate");
    cmd->add_option("--threshold", opts.threshold, "detection threshold on the Bayes-factor scale")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--fpr", opts.fpr, "target false positive rate for alpha calibration");
    cmd->add_option("--nsim", opts.nsim, "simulated null datasets for calibration")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--scale-mad", opts.scale_mad, "scale each column by 1.4826 * MAD first");
    cmd->add_option("--profile-out", opts.profile_out, "basename for per-window profile CSVs");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mxPBF change point detection for high-dimensional mean and covariance structures"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* detect_mean = app.add_subcommand("detect-mean", "detect mean change points");
    add_common(detect_mean, opts, true);
    add_detect_options(detect_mean, opts);

    auto* detect_cov = app.add_subcommand("detect-cov", "detect covariance change points");
    bool rolling = false;
    add_common(detect_cov, opts, true);
    add_detect_options(detect_cov, opts);
    detect_cov->add_flag("--rolling-center", rolling,
                         "apply rolling centering before the covariance scan");

    auto* detect_combined = app.add_subcommand("detect-combined",
                                               "covariance-then-mean combined detection");
    add_common(detect_combined, opts, true);
    add_detect_options(detect_combined, opts);

    auto* calibrate = app.add_subcommand("calibrate", "FPR-based alpha selection");
    std::string kind_name = "mean";
    index_t window = 25;
    std::string curve_out;
    add_common(calibrate, opts, true);
    calibrate->add_option("--kind", kind_name, "mean or covariance")
        ->check(CLI::IsMember({"mean", "covariance"}));
    calibrate->add_option("-w,--window", window, "window size")->required();
    calibrate->add_option("--threshold", opts.threshold, "threshold on the Bayes-factor scale");
    calibrate->add_option("--fpr", opts.fpr, "target false positive rate");
    calibrate->add_option("--nsim", opts.nsim, "simulated null datasets");
    calibrate->add_flag("--scale-mad", opts.scale_mad, "scale columns by MAD first");
    calibrate->add_option("--curve-out", curve_out, "write the (alpha, fpr) table as CSV");

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic scenario dataset");
    mxpbf::Scenario scenario;
    std::string sc_kind = "mean", sc_layout = "single", sc_signals = "rare", sc_structure = "sparse";
    std::string truth_out;
    add_common(simulate, opts, false);
    simulate->add_option("--kind", sc_kind, "mean or covariance")
        ->check(CLI::IsMember({"mean", "covariance"}));
    simulate->add_option("--layout", sc_layout, "single or multiple change points")
        ->check(CLI::IsMember({"single", "multiple"}));
    simulate->add_option("-n,--rows", scenario.n, "number of observations");
    simulate->add_option("-p,--cols", scenario.p, "number of variables");
    simulate->add_option("--signal", scenario.signal, "signal magnitude (mu or psi)");
    simulate->add_option("--signals", sc_signals, "rare or many signals")
        ->check(CLI::IsMember({"rare", "many"}));
    simulate->add_option("--structure", sc_structure, "sparse or dense structure")
        ->check(CLI::IsMember({"sparse", "dense"}));
    simulate->add_option("--truth-out", truth_out, "path for the ground-truth location CSV");
    simulate->get_option("-o")->required();

    auto* evaluate = app.add_subcommand("evaluate", "score a detect report against ground truth");
    std::string eval_report, eval_truth, eval_label;
    index_t margin = 15;
    add_common(evaluate, opts, false);
    evaluate->add_option("-r,--report", eval_report, "detect report JSON")->required();
    evaluate->add_option("-t,--truth", eval_truth, "ground-truth location CSV")->required();
    evaluate->add_option("-m,--margin", margin, "true-positive margin M");
    evaluate->add_option("--label", eval_label, "scenario label for the metric row");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (detect_mean->parsed()) return run_detect(opts, mxpbf::ScanKind::mean, false);
        if (detect_cov->parsed()) return run_detect(opts, mxpbf::ScanKind::covariance, rolling);
        if (detect_combined->parsed()) return run_detect_combined(opts);
        if (calibrate->parsed()) return run_calibrate(opts, kind_name, window, curve_out);
        if (simulate->parsed()) {
            scenario.kind = sc_kind == "mean" ? mxpbf::ScenarioKind::mean
                                              : mxpbf::ScenarioKind::covariance;
            scenario.layout = sc_layout == "single" ? mxpbf::Layout::single : mxpbf::Layout::multiple;
            scenario.signal_count =
                sc_signals == "rare" ? mxpbf::SignalCount::rare : mxpbf::SignalCount::many;
            scenario.structure =
                sc_structure == "sparse" ? mxpbf::Structure::sparse : mxpbf::Structure::dense;
            scenario.seed = opts.seed;
            return run_simulate(opts, scenario, truth_out);
        }
        if (evaluate->parsed()) return run_evaluate(opts, eval_report, eval_truth, margin, eval_label);
    } catch (const mxpbf::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const mxpbf::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const mxpbf::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
