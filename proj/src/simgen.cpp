#include "mxpbf/simgen.hpp"

#include <algorithm>
#include <cmath>

#include "mxpbf/linalg.hpp"

namespace mxpbf {

namespace {

// Sub-stream phases of one (scenario, replicate) generation.
enum StreamPhase : std::uint64_t { kStructure = 0, kSignal = 1, kNoise = 2 };

RngStream scenario_stream(const Scenario& sc, std::uint64_t replicate, StreamPhase phase) {
    return RngStream(sc.hash(), replicate, phase);
}

// First `take` elements of a partial Fisher-Yates shuffle of 0..count-1.
std::vector<index_t> sample_without_replacement(index_t count, index_t take, RngStream& rng) {
    std::vector<index_t> idx(static_cast<size_t>(count));
    for (index_t k = 0; k < count; ++k) idx[static_cast<size_t>(k)] = k;
    for (index_t k = 0; k < take; ++k) {
        auto swap_with = k + static_cast<index_t>(rng.uniform_int(static_cast<std::uint64_t>(count - k)));
        std::swap(idx[static_cast<size_t>(k)], idx[static_cast<size_t>(swap_with)]);
    }
    idx.resize(static_cast<size_t>(take));
    return idx;
}

// Maps a flat rank onto the strict lower triangle: flat = i*(i-1)/2 + j, j < i.
void unrank_lower(index_t flat, index_t& i, index_t& j) {
    i = static_cast<index_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(flat))) / 2.0);
    while (i * (i - 1) / 2 > flat) --i;
    while ((i + 1) * i / 2 <= flat) ++i;
    j = flat - i * (i - 1) / 2;
}

// Symmetric 0/value placement over unordered off-diagonal pairs.
Eigen::MatrixXd precision_with_density(index_t p, double density, RngStream& rng) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(p, p);
    index_t total_pairs = p * (p - 1) / 2;
    auto n_pairs = static_cast<index_t>(std::llround(density * static_cast<double>(total_pairs)));
    auto chosen = sample_without_replacement(total_pairs, n_pairs, rng);
    std::sort(chosen.begin(), chosen.end());
    for (index_t flat : chosen) {
        index_t i, j;
        unrank_lower(flat, i, j);
        omega(i, j) = 0.3;
        omega(j, i) = 0.3;
    }
    repair_positive_definite(omega, 1e-3);
    return omega;
}

std::vector<index_t> lower_triangle_positions(index_t p, index_t take, RngStream& rng) {
    index_t total = p * (p - 1) / 2;
    if (take > total) throw InfeasibleScenario("not enough lower-triangle entries to place signals");
    auto chosen = sample_without_replacement(total, take, rng);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// Segment row ranges [lo, hi] (1-based) implied by the truth locations; a
// change at i starts a new segment at row i.
std::vector<std::pair<index_t, index_t>> segments_of(const std::vector<index_t>& truth, index_t n) {
    std::vector<std::pair<index_t, index_t>> segs;
    index_t lo = 1;
    for (index_t t : truth) {
        segs.emplace_back(lo, t - 1);
        lo = t;
    }
    segs.emplace_back(lo, n);
    return segs;
}

} // namespace

std::vector<index_t> Scenario::truth() const {
    std::vector<index_t> ref =
        layout == Layout::single ? std::vector<index_t>{250} : std::vector<index_t>{150, 300, 350};
    std::vector<index_t> out;
    out.reserve(ref.size());
    for (index_t r : ref) {
        out.push_back(static_cast<index_t>(
            std::llround(static_cast<double>(r) * static_cast<double>(n) / 500.0)));
    }
    return out;
}

std::uint64_t Scenario::hash() const {
    std::uint8_t tags[4] = {static_cast<std::uint8_t>(kind), static_cast<std::uint8_t>(layout),
                            static_cast<std::uint8_t>(signal_count),
                            static_cast<std::uint8_t>(structure)};
    std::uint64_t h = fnv1a(tags, sizeof(tags));
    h = fnv1a(&n, sizeof(n), h);
    h = fnv1a(&p, sizeof(p), h);
    h = fnv1a(&signal, sizeof(signal), h);
    h = fnv1a(&seed, sizeof(seed), h);
    return h;
}

void Scenario::validate() const {
    if (n < 4) throw InfeasibleScenario("scenario needs n >= 4");
    if (p < 2) throw InfeasibleScenario("scenario needs p >= 2");
    if (signal < 0.0) throw InfeasibleScenario("signal magnitude must be >= 0");
    auto t = truth();
    index_t prev = 1;
    for (index_t loc : t) {
        if (loc <= prev || loc > n) throw InfeasibleScenario("scaled truth locations collapse at this n");
        prev = loc;
    }
    if (kind == ScenarioKind::mean && rare_or_many_count() > p) {
        throw InfeasibleScenario("more signal entries than variables");
    }
}

Eigen::MatrixXd gen_sparse_precision(index_t p, RngStream& rng) {
    if (p < 2) throw DataError("precision matrix needs p >= 2");
    return precision_with_density(p, 0.01, rng);
}

Eigen::MatrixXd gen_dense_precision(index_t p, RngStream& rng) {
    if (p < 2) throw DataError("precision matrix needs p >= 2");
    return precision_with_density(p, 0.40, rng);
}

Eigen::MatrixXd gen_cov_sparse_sigma(index_t p, RngStream& rng) {
    if (p < 2) throw DataError("covariance matrix needs p >= 2");
    Eigen::MatrixXd delta1 = Eigen::MatrixXd::Zero(p, p);
    index_t total = p * (p - 1) / 2;
    auto n_entries = static_cast<index_t>(std::llround(0.05 * static_cast<double>(total)));
    auto chosen = sample_without_replacement(total, n_entries, rng);
    std::sort(chosen.begin(), chosen.end());
    for (index_t flat : chosen) {
        index_t i, j;
        unrank_lower(flat, i, j);
        delta1(i, j) = 0.5;
        delta1(j, i) = 0.5;
    }
    double delta = std::abs(smallest_eigenvalue(delta1)) + 0.05;
    Eigen::MatrixXd full = delta1 + delta * Eigen::MatrixXd::Identity(p, p);
    Eigen::VectorXd d(p);
    for (index_t j = 0; j < p; ++j) d[j] = rng.uniform(0.5, 2.5);
    Eigen::VectorXd root = d.array().sqrt();
    return root.asDiagonal() * full * root.asDiagonal();
}

Eigen::MatrixXd gen_cov_dense_sigma(index_t p, RngStream& rng) {
    if (p < 2) throw DataError("covariance matrix needs p >= 2");
    Eigen::MatrixXd delta(p, p);
    for (index_t i = 0; i < p; ++i) {
        for (index_t j = 0; j < p; ++j) {
            double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            double expo = (i == j) ? 0.0 : std::pow(static_cast<double>(std::abs(i - j)), 0.1);
            delta(i, j) = sign * std::pow(0.4, expo);
        }
    }
    Eigen::VectorXd o(p);
    for (index_t j = 0; j < p; ++j) o[j] = rng.uniform(1.0, 5.0);
    Eigen::MatrixXd sigma = o.asDiagonal() * delta * o.asDiagonal();
    cholesky_lower(sigma, "dense covariance model");
    return sigma;
}

GroundTruthDataset gen_mean_scenario(const Scenario& scenario, std::uint64_t replicate) {
    scenario.validate();
    if (scenario.kind != ScenarioKind::mean) throw DataError("scenario kind is not mean");

    auto rng_structure = scenario_stream(scenario, replicate, kStructure);
    auto rng_signal = scenario_stream(scenario, replicate, kSignal);
    auto rng_noise = scenario_stream(scenario, replicate, kNoise);

    Eigen::MatrixXd omega = scenario.structure == Structure::sparse
                                ? gen_sparse_precision(scenario.p, rng_structure)
                                : gen_dense_precision(scenario.p, rng_structure);
    Eigen::LLT<Eigen::MatrixXd> llt(omega);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("repaired precision not factorizable");

    auto truth = scenario.truth();
    auto segs = segments_of(truth, scenario.n);
    index_t n0 = scenario.rare_or_many_count();

    // Segment means: odd segments are zero; each signal-bearing segment draws
    // its own support of n0 entries set to the signal value.
    std::vector<Eigen::VectorXd> means(segs.size(), Eigen::VectorXd::Zero(scenario.p));
    for (std::size_t s = 1; s < segs.size(); s += 2) {
        auto support = sample_without_replacement(scenario.p, n0, rng_signal);
        for (index_t j : support) means[s][j] = scenario.signal;
    }

    GroundTruthDataset out{DataMatrix(scenario.n, scenario.p), truth, scenario, means, {}};
    Eigen::VectorXd z(scenario.p);
    std::size_t seg = 0;
    for (index_t i = 1; i <= scenario.n; ++i) {
        while (i > segs[seg].second) ++seg;
        for (index_t j = 0; j < scenario.p; ++j) z[j] = rng_noise.normal();
        // Omega = L L^T, so U^-1 z with U = L^T has covariance Omega^-1.
        Eigen::VectorXd x = llt.matrixU().solve(z) + means[seg];
        for (index_t j = 0; j < scenario.p; ++j) out.data.at(i - 1, j) = x[j];
    }
    return out;
}

GroundTruthDataset gen_cov_scenario(const Scenario& scenario, std::uint64_t replicate) {
    scenario.validate();
    if (scenario.kind != ScenarioKind::covariance) throw DataError("scenario kind is not covariance");

    auto rng_structure = scenario_stream(scenario, replicate, kStructure);
    auto rng_signal = scenario_stream(scenario, replicate, kSignal);
    auto rng_noise = scenario_stream(scenario, replicate, kNoise);

    Eigen::MatrixXd base = scenario.structure == Structure::sparse
                               ? gen_cov_sparse_sigma(scenario.p, rng_structure)
                               : gen_cov_dense_sigma(scenario.p, rng_structure);

    auto truth = scenario.truth();
    auto segs = segments_of(truth, scenario.n);

    auto draw_signal_matrix = [&]() {
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(scenario.p, scenario.p);
        if (scenario.signal_count == SignalCount::rare) {
            auto positions = lower_triangle_positions(scenario.p, 5, rng_signal);
            for (index_t flat : positions) {
                index_t i, j;
                unrank_lower(flat, i, j);
                double v = rng_signal.uniform(0.0, scenario.signal);
                u(i, j) = v;
                u(j, i) = v;
            }
        } else {
            Eigen::VectorXd vec(scenario.p);
            for (index_t j = 0; j < scenario.p; ++j) vec[j] = rng_signal.uniform(0.0, scenario.signal);
            u = vec * vec.transpose();
        }
        return u;
    };

    // Segment covariance matrices; odd segments carry the base matrix, each
    // signal-bearing segment adds an independent U. The joint identity repair
    // applies to each (base, base + U) pair that needs it.
    std::vector<Eigen::MatrixXd> sigmas(segs.size(), base);
    for (std::size_t s = 1; s < segs.size(); s += 2) {
        Eigen::MatrixXd bumped = base + draw_signal_matrix();
        Eigen::MatrixXd& plain = sigmas[s - 1];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev_plain(plain, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev_bumped(bumped, Eigen::EigenvaluesOnly);
        double lmin_plain = ev_plain.eigenvalues().minCoeff();
        double lmin_bumped = ev_bumped.eigenvalues().minCoeff();
        bool ok_plain = is_positive_definite(lmin_plain, ev_plain.eigenvalues().maxCoeff());
        bool ok_bumped = is_positive_definite(lmin_bumped, ev_bumped.eigenvalues().maxCoeff());
        if (!ok_plain || !ok_bumped) {
            double shift = -std::min(lmin_plain, lmin_bumped) + 0.05;
            plain.diagonal().array() += shift;
            bumped.diagonal().array() += shift;
        }
        sigmas[s] = std::move(bumped);
    }

    std::vector<Eigen::MatrixXd> chols;
    chols.reserve(sigmas.size());
    for (const auto& sigma : sigmas) chols.push_back(cholesky_lower(sigma, "segment covariance"));

    GroundTruthDataset out{DataMatrix(scenario.n, scenario.p), truth, scenario, {}, sigmas};
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(scenario.p);
    std::size_t seg = 0;
    for (index_t i = 1; i <= scenario.n; ++i) {
        while (i > segs[seg].second) ++seg;
        Eigen::VectorXd x = mvn_sample(zero, chols[seg], rng_noise);
        for (index_t j = 0; j < scenario.p; ++j) out.data.at(i - 1, j) = x[j];
    }
    return out;
}

GroundTruthDataset gen_scenario(const Scenario& scenario, std::uint64_t replicate) {
    return scenario.kind == ScenarioKind::mean ? gen_mean_scenario(scenario, replicate)
                                               : gen_cov_scenario(scenario, replicate);
}

const char* to_string(ScenarioKind kind) {
    return kind == ScenarioKind::mean ? "mean" : "covariance";
}
const char* to_string(Layout layout) {
    return layout == Layout::single ? "single" : "multiple";
}
const char* to_string(SignalCount count) {
    return count == SignalCount::rare ? "rare" : "many";
}
const char* to_string(Structure structure) {
    return structure == Structure::sparse ? "sparse" : "dense";
}

} // namespace mxpbf
