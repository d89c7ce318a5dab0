#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mxpbf/rng.hpp"
#include "mxpbf/types.hpp"

namespace mxpbf {

enum class ScenarioKind { mean, covariance };
enum class Layout { single, multiple };
enum class SignalCount { rare, many };
enum class Structure { sparse, dense };

// Declarative description of a synthetic data-generating process. The single
// layout places one change at 250 and the multiple layout at {150, 300, 350},
// both scaled proportionally when n differs from 500.
struct Scenario {
    ScenarioKind kind = ScenarioKind::mean;
    Layout layout = Layout::single;
    index_t n = 500;
    index_t p = 200;
    double signal = 0.0;              // mu for mean scenarios, psi for covariance
    SignalCount signal_count = SignalCount::rare;
    Structure structure = Structure::sparse;
    std::uint64_t seed = 0;

    // rare = 5 signals; many = p/2 mean entries or a rank-one covariance bump
    index_t rare_or_many_count() const {
        return signal_count == SignalCount::rare ? 5 : p / 2;
    }

    std::vector<index_t> truth() const;
    std::uint64_t hash() const;
    void validate() const;
};

struct GroundTruthDataset {
    DataMatrix data;
    std::vector<index_t> truth;
    Scenario scenario;
    // Generator record: the exact per-segment parameters the rows were drawn
    // from (means for mean scenarios, covariances for covariance scenarios).
    std::vector<Eigen::VectorXd> segment_means;
    std::vector<Eigen::MatrixXd> segment_covariances;
};

// Precision matrix with ~1% of off-diagonal entries set to 0.3 (symmetric
// pairs), unit diagonal, repaired positive definite with floor 1e-3.
Eigen::MatrixXd gen_sparse_precision(index_t p, RngStream& rng);

// Same construction at 40% density.
Eigen::MatrixXd gen_dense_precision(index_t p, RngStream& rng);

// Sparse covariance: D^(1/2) (Delta_1 + delta I) D^(1/2) with 5% of the
// strict lower triangle of Delta_1 at 0.5, delta = |lambda_min| + 0.05 and
// d_j ~ Unif(0.5, 2.5).
Eigen::MatrixXd gen_cov_sparse_sigma(index_t p, RngStream& rng);

// Dense covariance: O Delta O with Delta_ij = (-1)^(i+j) 0.4^(|i-j|^(1/10))
// and o_j ~ Unif(1, 5). Throws NotPositiveDefinite if the Cholesky fails.
Eigen::MatrixXd gen_cov_dense_sigma(index_t p, RngStream& rng);

GroundTruthDataset gen_mean_scenario(const Scenario& scenario, std::uint64_t replicate = 0);
GroundTruthDataset gen_cov_scenario(const Scenario& scenario, std::uint64_t replicate = 0);

// Dispatches on scenario.kind.
GroundTruthDataset gen_scenario(const Scenario& scenario, std::uint64_t replicate = 0);

const char* to_string(ScenarioKind kind);
const char* to_string(Layout layout);
const char* to_string(SignalCount count);
const char* to_string(Structure structure);

} // namespace mxpbf
