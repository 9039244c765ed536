#include "mixobs/model.hpp"

#include "mixobs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixobs {

AnomalyModel::AnomalyModel(int n_in, int k_in, Gaussian1D common_in, Gaussian1D anomalous_in)
    : n(n_in), k(k_in), common(common_in), anomalous(anomalous_in) {
    if (n < 2) throw std::invalid_argument("AnomalyModel: n must be >= 2");
    if (k < 1 || k >= n) throw std::invalid_argument("AnomalyModel: need 1 <= k < n");
    if (common == anomalous)
        throw std::invalid_argument("AnomalyModel: common and anomalous laws must differ");
}

bool Hypothesis::contains(int index) const {
    return std::binary_search(support.begin(), support.end(), index);
}

std::string Hypothesis::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(support[i] + 1);
    }
    out += '}';
    return out;
}

std::uint64_t binomial_checked(int n, int k, std::uint64_t cap) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        // c * (n-k+i) cannot overflow while c <= cap <= 2^63 / n
        if (c > cap) break;
        c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    if (c > cap)
        throw ConfigError("hypothesis space too large: C(" + std::to_string(n) + "," +
                          std::to_string(k) + ") exceeds cap " + std::to_string(cap));
    return c;
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("log_binomial: need 0 <= k <= n");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::vector<Hypothesis> enumerate_hypotheses(int n, int k, std::uint64_t cap) {
    if (k < 1 || k >= n) throw std::invalid_argument("enumerate_hypotheses: need 1 <= k < n");
    const std::uint64_t count = binomial_checked(n, k, cap);
    std::vector<Hypothesis> out;
    out.reserve(count);
    std::vector<int> support(k);
    for (int i = 0; i < k; ++i) support[i] = i;
    for (;;) {
        out.push_back(Hypothesis{support});
        int pos = k - 1;
        while (pos >= 0 && support[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++support[pos];
        for (int i = pos + 1; i < k; ++i) support[i] = support[i - 1] + 1;
    }
    return out;
}

Gaussian1D output_distribution(const AnomalyModel& model, const Hypothesis& h,
                               const MeasurementVector& a) {
    if (a.size() != static_cast<std::size_t>(model.n))
        throw std::invalid_argument("output_distribution: measurement length != n");
    double mean = 0.0;
    double variance = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double c = a[i];
        const Gaussian1D& f = h.contains(static_cast<int>(i)) ? model.anomalous : model.common;
        mean += c * f.mean;
        variance += c * c * f.variance;
    }
    return Gaussian1D{mean, variance};
}

GaussianVec hypothesis_law(const AnomalyModel& model, const Hypothesis& h) {
    Eigen::VectorXd mean(model.n);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(model.n, model.n);
    for (int i = 0; i < model.n; ++i) {
        const Gaussian1D& f = h.contains(i) ? model.anomalous : model.common;
        mean(i) = f.mean;
        cov(i, i) = f.variance;
    }
    return GaussianVec(std::move(mean), std::move(cov));
}

} // namespace mixobs
