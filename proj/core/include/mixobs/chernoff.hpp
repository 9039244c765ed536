#pragma once

#include "mixobs/gaussian.hpp"
#include "mixobs/measurement.hpp"
#include "mixobs/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace mixobs {

/// An optimized error exponent (nats) together with the optimizing
/// lambda in [0,1].
struct ChernoffResult {
    double value = 0.0;
    double lambda_star = 0.0;
};

/// log integral of g1^lambda * g2^(1-lambda) over the line, in nats.
///
/// lambda is the exponent on g1 throughout this module; the geometric
/// mixture g1^lambda g2^(1-lambda) normalizes to tilted_gaussian. Closed
/// form: -lambda(1-lambda)(m1-m2)^2/(2 v) - log(v / (v1^(1-lambda) v2^lambda))/2
/// with v = lambda*v2 + (1-lambda)*v1. Always <= 0; 0 at the endpoints.
/// Throws DegenerateError on zero variance.
double log_affinity(const Gaussian1D& g1, const Gaussian1D& g2, double lambda);

/// Chernoff information C(g1,g2) = max over lambda of -log_affinity,
/// solved by bisection on the analytic derivative to |dlambda| <= 1e-10.
/// Zero iff g1 == g2.
ChernoffResult chernoff_gaussian(const Gaussian1D& g1, const Gaussian1D& g2);

/// (A-B)^2 / (8 v): the equal-variance mean-shift closed form.
double chernoff_equal_variance(double mean_a, double mean_b, double variance);

/// Closed forms for a zero-mean pair with variance ratio B > 1, i.e. the
/// pair (N(0,B), N(0,1)): the optimizing lambda
///   (B log B - (B-1)) / ((B-1) log B)
/// and the Chernoff value at it. Both match chernoff_gaussian on
/// (N(0,B), N(0,1)); swapping the pair maps lambda to 1-lambda.
double zero_mean_lambda_star(double ratio);
double zero_mean_chernoff(double ratio);

/// KL divergence D(p || q) between univariate Gaussians, nats.
double kl_divergence(const Gaussian1D& p, const Gaussian1D& q);

/// Normalized lambda-tilted product of g1 and g2, itself Gaussian:
/// precision mixes as lambda/v1 + (1-lambda)/v2. lambda=1 gives g1,
/// lambda=0 gives g2.
Gaussian1D tilted_gaussian(const Gaussian1D& g1, const Gaussian1D& g2, double lambda);

/// Inner conditional Chernoff information: the expectation over the
/// measurement ensemble sits inside the log. Governs random time-varying
/// measurements.
ChernoffResult inner_chernoff(const Ensemble& ensemble, const AnomalyModel& model,
                              const Hypothesis& hi, const Hypothesis& hj);

/// Outer conditional Chernoff information: the expectation sits outside
/// the log. Governs deterministic time-varying measurements; always >=
/// the inner value.
ChernoffResult outer_chernoff(const Ensemble& ensemble, const AnomalyModel& model,
                              const Hypothesis& hi, const Hypothesis& hj);

/// Best single-atom bound on the inner value: max over atoms t of
/// -log(1 - w_t + w_t e^{-C_t}) with C_t the atom's plain Chernoff
/// information. Positive iff some positive-weight atom separates the
/// pair.
double holder_lower_bound(const Ensemble& ensemble, const AnomalyModel& model,
                          const Hypothesis& hi, const Hypothesis& hj);

/// Outer conditional Chernoff information computed through its other
/// characterization: the lambda at which the expected KL divergences of
/// the tilted law to either hypothesis balance, and the balanced common
/// value. Agrees with outer_chernoff to 1e-8.
ChernoffResult oc_via_kl_balance(const Ensemble& ensemble, const AnomalyModel& model,
                                 const Hypothesis& hi, const Hypothesis& hj);

/// Pairwise exponent matrix over the full hypothesis space with its
/// minimum: the exponent that controls the error probability of the
/// full test.
struct ExponentReport {
    std::vector<Hypothesis> hypotheses;
    Eigen::MatrixXd pairwise; // nats; symmetric, diagonal 0
    Eigen::MatrixXd lambdas;  // lambda on the row hypothesis
    double min_exponent = 0.0;
    int argmin_i = 0; // 0-based indices into hypotheses
    int argmin_j = 1;

    std::size_t size() const { return hypotheses.size(); }

    /// CSV rows "i,j,exponent_nats,lambda_star" for i < j, 1-based.
    void write_csv(std::ostream& out) const;

    /// "E=<value> pair=(i,j)", 1-based.
    std::string summary() const;
};

inline constexpr std::uint64_t kPairwiseCap = 2048;

/// Exponents under a deterministic/random measurement distribution:
/// outer conditional Chernoff information per pair.
ExponentReport min_pairwise_exponent(const Ensemble& ensemble, const AnomalyModel& model);

/// Exponents under one fixed time-invariant measurement: plain Chernoff
/// information of the two output laws per pair.
ExponentReport min_pairwise_exponent(const MeasurementVector& fixed,
                                     const AnomalyModel& model);

/// Deterministic schedule: rows enter as an ensemble weighted by
/// frequency.
ExponentReport min_pairwise_exponent(const Schedule& schedule, const AnomalyModel& model);

/// Union-bound inversion of P_e <= L e^{-mE}: the m that pushes the
/// bound under target_error. An order-of-magnitude predictor, not a
/// guarantee. Throws DegenerateError when exponent <= 0.
std::int64_t sample_complexity(double exponent, int n, int k, double target_error);

} // namespace mixobs
