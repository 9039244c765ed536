#include "mixobs/gaussian.hpp"

#include "mixobs/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mixobs {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

Gaussian1D normal(double mean, double variance) {
    if (!(variance >= 0.0) || !std::isfinite(variance) || !std::isfinite(mean))
        throw std::invalid_argument("normal(mean,variance): variance must be finite and >= 0");
    return Gaussian1D{mean, variance};
}

Gaussian1D dirac(double mean) {
    if (!std::isfinite(mean)) throw std::invalid_argument("dirac(mean): mean must be finite");
    return Gaussian1D{mean, 0.0};
}

double log_density(const Gaussian1D& g, double y) {
    if (g.variance <= 0.0)
        throw DegenerateError("degenerate output distribution: variance 0 at mean " +
                              std::to_string(g.mean));
    const double d = y - g.mean;
    return -0.5 * (kLog2Pi + std::log(g.variance) + d * d / g.variance);
}

GaussianVec::GaussianVec(Eigen::VectorXd mean_in, Eigen::MatrixXd covariance_in)
    : mean(std::move(mean_in)), covariance(std::move(covariance_in)) {
    if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size())
        throw std::invalid_argument("GaussianVec: dimension mismatch");
    const double scale = covariance.cwiseAbs().maxCoeff();
    const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && asym > 1e-12 * scale)
        throw std::invalid_argument("GaussianVec: covariance not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -1e-10 * covariance.trace())
        throw std::invalid_argument("GaussianVec: covariance not positive semidefinite");
}

} // namespace mixobs
