#pragma once

#include "mixobs/measurement.hpp"
#include "mixobs/model.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace mixobs {

/// floor(m/n) separate observations of every variable, then one extra
/// observation each for (m mod n) variables drawn uniformly without
/// replacement. The extras (and only they) consume the seed.
Schedule separate_design(int n, int m, std::uint64_t seed);

/// Sparse bipartite mixing built by the configuration model: each of the
/// m measurement nodes has right_degree edge sockets, each of the n
/// variable nodes has right_degree*m/n, and a uniformly random matching
/// connects them. A present edge puts coefficient 1 in the row.
struct BipartiteDesignSpec {
    int n = 0;
    int m = 0;
    int right_degree = 0;
    std::uint64_t seed = 0;

    /// Throws ConfigError unless 1 <= right_degree <= n and
    /// right_degree*m is divisible by n.
    void validate() const;
};

/// Parallel edges collapse to a single 1, so a row may carry fewer than
/// right_degree ones; collapsed_multiedges counts how many were lost.
struct BipartiteDesign {
    Schedule schedule;
    std::size_t collapsed_multiedges = 0;
};

BipartiteDesign bipartite_design(const BipartiteDesignSpec& spec);

/// The 3x7 parity-check matrix of the (7,4) Hamming code: column i is
/// the binary expansion of i. For every pair of columns some row
/// contains exactly one of them, which is what separates every
/// hypothesis pair.
Schedule hamming74_design();

/// The mixing vector maximizing the Chernoff information between two
/// equal-covariance Gaussian vector hypotheses: a = Sigma^{-1}(mu1-mu2),
/// attaining exponent (mu1-mu2)^T Sigma^{-1} (mu1-mu2) / 8.
struct MeanShiftDesign {
    MeasurementVector a;
    double exponent = 0.0;
};

MeanShiftDesign optimal_mean_shift(const Eigen::VectorXd& mu1, const Eigen::VectorXd& mu2,
                                   const Eigen::MatrixXd& sigma);

/// The mixing vector maximizing the Chernoff information between two
/// equal-mean Gaussian vector hypotheses. The two quadratic programs
/// max a'S1a s.t. a'S2a<=1 and its swap are solved as generalized
/// symmetric eigenproblems; the winning variance ratio B >= 1 determines
/// the exponent through the zero-mean closed forms.
struct VarianceDesign {
    MeasurementVector a; // unit norm, first nonzero entry positive
    double ratio = 1.0;  // B
    double lambda_star = 0.5;
    double exponent = 0.0;
};

VarianceDesign optimal_variance_discrimination(const Eigen::MatrixXd& sigma1,
                                               const Eigen::MatrixXd& sigma2);

/// Uniform ensemble over the distinct coordinate permutations of base.
/// Throws ConfigError beyond max_n (full permutation ensembles grow as
/// n!).
Ensemble permutation_ensemble(const MeasurementVector& base, int max_n = 8);

/// Unit vector maximizing the sum of pairwise Chernoff informations of
/// the induced output laws, found by seeded pattern search with random
/// restarts. Only defined for k=1 with equal variances, where the
/// permutation ensemble of the result equalizes (and maximizes) all
/// pairwise outer Chernoff values.
struct BaseVectorResult {
    MeasurementVector a; // unit norm, first nonzero entry positive
    double objective = 0.0;
};

BaseVectorResult optimize_base_vector(const AnomalyModel& model, std::uint64_t seed,
                                      int restarts = 20);

} // namespace mixobs
