#pragma once

#include <Eigen/Dense>

namespace mixobs {

/// Univariate Gaussian law N(mean, variance). Variance 0 encodes the
/// point mass at `mean`; density evaluation on it is a hard error, only
/// the induced nondegenerate output laws may be scored.
struct Gaussian1D {
    double mean = 0.0;
    double variance = 1.0;

    bool is_dirac() const { return variance == 0.0; }

    friend bool operator==(const Gaussian1D&, const Gaussian1D&) = default;
};

/// N(mean, variance) literal.
Gaussian1D normal(double mean, double variance);

/// Point mass at `mean`, stored as a zero-variance Gaussian.
Gaussian1D dirac(double mean);

/// Log-density of g at y, in nats. Throws DegenerateError when g is a
/// point mass.
double log_density(const Gaussian1D& g, double y);

/// Multivariate Gaussian N(mean, covariance). Construction validates
/// symmetry (1e-12 relative) and near-positive-semidefiniteness
/// (eigenvalues >= -1e-10 * trace).
struct GaussianVec {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;

    GaussianVec(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

    Eigen::Index dim() const { return mean.size(); }
};

} // namespace mixobs
