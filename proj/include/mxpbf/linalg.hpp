#pragma once

#include <Eigen/Dense>

#include "mxpbf/errors.hpp"
#include "mxpbf/rng.hpp"
#include "mxpbf/types.hpp"

namespace mxpbf {

// Eigen view of the column-major DataMatrix storage (no copy).
inline Eigen::Map<const Eigen::MatrixXd> as_eigen(const DataMatrix& m) {
    return {m.column(0).data(), m.rows(), m.cols()};
}

inline double smallest_eigenvalue(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigenvalue computation failed");
    return solver.eigenvalues().minCoeff();
}

// "Not positive definite" with a numerical guard: eigenvalues that are zero
// up to rounding (rank-deficient sample covariances) must trigger the repair.
inline bool is_positive_definite(double lambda_min, double lambda_max) {
    double tol = 1e-10 * std::max(1.0, std::abs(lambda_max));
    return lambda_min > tol;
}

// Applies the additive identity repair (-lambda_min + floor) * I when the
// matrix is not positive definite; returns the shift applied (0 if none).
// After a repair the smallest eigenvalue equals `floor` exactly.
inline double repair_positive_definite(Eigen::MatrixXd& sym, double floor_value) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigenvalue computation failed");
    double lmin = solver.eigenvalues().minCoeff();
    double lmax = solver.eigenvalues().maxCoeff();
    if (is_positive_definite(lmin, lmax)) return 0.0;
    double shift = -lmin + floor_value;
    sym.diagonal().array() += shift;
    return shift;
}

inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& spd, const char* context) {
    Eigen::LLT<Eigen::MatrixXd> llt(spd);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite(std::string(context) + ": Cholesky factorization failed");
    }
    return llt.matrixL();
}

// x = mean + L z with z i.i.d. standard normal from the stream.
inline Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_lower,
                                  RngStream& rng) {
    Eigen::VectorXd z(mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    return mean + chol_lower * z;
}

} // namespace mxpbf
