#pragma once

#include "mixobs/gaussian.hpp"
#include "mixobs/measurement.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mixobs {

/// The anomaly-detection setting: n i.i.d. variables of which k follow
/// the anomalous law and the rest the common one. Which k is unknown;
/// that is what a detector decides.
struct AnomalyModel {
    int n = 0;
    int k = 0;
    Gaussian1D common;    // f1
    Gaussian1D anomalous; // f2

    AnomalyModel(int n, int k, Gaussian1D common, Gaussian1D anomalous);
};

/// A candidate support set: the k indices hypothesized anomalous.
/// Indices are 0-based internally, strictly increasing; user-facing
/// formats are 1-based.
struct Hypothesis {
    std::vector<int> support;

    bool contains(int index) const;
    /// "{i,j,...}" with 1-based indices.
    std::string to_string() const;

    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

/// C(n,k), or throws ConfigError when the value exceeds `cap`.
std::uint64_t binomial_checked(int n, int k, std::uint64_t cap);

/// log C(n,k) via lgamma; exact enough for sample-complexity use at any size.
double log_binomial(int n, int k);

inline constexpr std::uint64_t kHypothesisCap = 1'000'000;

/// All C(n,k) supports in lexicographic order. Throws ConfigError
/// ("hypothesis space too large", naming C(n,k)) beyond `cap`.
std::vector<Hypothesis> enumerate_hypotheses(int n, int k,
                                             std::uint64_t cap = kHypothesisCap);

/// Law of Y = <a, X> when h is the true support: each coordinate
/// contributes a_i * f2 if i is in h, a_i * f1 otherwise, realizations
/// independent. Zero variance is legal here; it is rejected only at
/// density-evaluation time.
Gaussian1D output_distribution(const AnomalyModel& model, const Hypothesis& h,
                               const MeasurementVector& a);

/// Joint law of the variable vector X under h: independent coordinates,
/// so diagonal covariance with f2's parameters on the support.
GaussianVec hypothesis_law(const AnomalyModel& model, const Hypothesis& h);

} // namespace mixobs
