#include "mxpbf/report.hpp"

#include <fstream>
#include <iostream>

namespace mxpbf {

namespace {

Json members_json(const DetectionGroup& group) {
    Json members = Json::array();
    for (const auto& m : group.members) {
        members.push_back(
            Json{{"window", m.window}, {"location", m.location}, {"evidence", m.evidence}});
    }
    return members;
}

} // namespace

Json to_json(const ChangePointSet& set) {
    Json points = Json::array();
    for (std::size_t k = 0; k < set.points.size(); ++k) {
        points.push_back(Json{{"location", set.points[k]}, {"evidence", set.evidence[k]}});
    }
    return Json{{"window", set.window}, {"points", points}};
}

Json to_json(const MultiscaleResult& result, const std::string& source) {
    Json points = Json::array();
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        points.push_back(Json{{"location", result.points[k]},
                              {"source", source},
                              {"members", members_json(result.groups[k])}});
    }
    return points;
}

Json to_json(const CalibrationResult& result) {
    Json curve = Json::array();
    for (const auto& point : result.curve) {
        curve.push_back(Json{{"alpha", point.alpha}, {"fpr", point.fpr}});
    }
    return Json{{"alpha_hat", result.alpha_hat},
                {"reference_alpha", result.reference_alpha},
                {"curve", curve}};
}

Json to_json(const Scenario& scenario) {
    return Json{{"kind", to_string(scenario.kind)},
                {"layout", to_string(scenario.layout)},
                {"n", scenario.n},
                {"p", scenario.p},
                {"signal", scenario.signal},
                {"signal_count", to_string(scenario.signal_count)},
                {"structure", to_string(scenario.structure)},
                {"seed", scenario.seed},
                {"truth", scenario.truth()}};
}

Scenario scenario_from_json(const Json& j) {
    Scenario sc;
    std::string kind = j.at("kind");
    sc.kind = kind == "mean" ? ScenarioKind::mean : ScenarioKind::covariance;
    std::string layout = j.at("layout");
    sc.layout = layout == "single" ? Layout::single : Layout::multiple;
    sc.n = j.at("n");
    sc.p = j.at("p");
    sc.signal = j.at("signal");
    std::string count = j.at("signal_count");
    sc.signal_count = count == "rare" ? SignalCount::rare : SignalCount::many;
    std::string structure = j.at("structure");
    sc.structure = structure == "sparse" ? Structure::sparse : Structure::dense;
    sc.seed = j.at("seed");
    return sc;
}

Json to_json(const CombinedResult& result) {
    Json merged = Json::array();
    for (const auto& pt : result.merged) {
        merged.push_back(Json{
            {"location", pt.location},
            {"source", pt.source == PointSource::covariance ? "covariance" : "mean"}});
    }
    return merged;
}

Json to_json(const F1Result& f1) {
    return Json{{"precision", f1.precision},
                {"recall", f1.recall},
                {"f1", f1.f1},
                {"tp", f1.tp_count}};
}

void write_report(const Json& report, const std::string& path) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed while writing '" + path + "'");
}

Json read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("'" + path + "' is not a valid report: " + e.what());
    }
    return j;
}

} // namespace mxpbf
