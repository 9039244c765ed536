#include "mixobs/design.hpp"

#include "mixobs/chernoff.hpp"
#include "mixobs/errors.hpp"
#include "mixobs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace mixobs {

Schedule separate_design(int n, int m, std::uint64_t seed) {
    if (n < 1 || m < 1) throw std::invalid_argument("separate_design: need n >= 1, m >= 1");
    Schedule s;
    s.rows.reserve(m);
    const int full_rounds = m / n;
    for (int round = 0; round < full_rounds; ++round)
        for (int i = 0; i < n; ++i) s.rows.push_back(unit_vector(n, i));
    const int extra = m % n;
    if (extra > 0) {
        Rng rng(seed);
        for (std::size_t index : rng.sample_without_replacement(n, extra))
            s.rows.push_back(unit_vector(n, index));
    }
    return s;
}

void BipartiteDesignSpec::validate() const {
    if (n < 1 || m < 1) throw ConfigError("bipartite design: need n >= 1 and m >= 1");
    if (right_degree < 1 || right_degree > n)
        throw ConfigError("bipartite design: need 1 <= right_degree <= n");
    const long long total = static_cast<long long>(right_degree) * m;
    if (total % n != 0)
        throw ConfigError("bipartite design: right_degree*m = " + std::to_string(total) +
                          " not divisible by n = " + std::to_string(n));
}

BipartiteDesign bipartite_design(const BipartiteDesignSpec& spec) {
    spec.validate();
    const std::size_t d = static_cast<std::size_t>(spec.right_degree);
    const std::size_t left_degree = d * spec.m / spec.n;
    std::vector<int> sockets;
    sockets.reserve(d * spec.m);
    for (int i = 0; i < spec.n; ++i)
        for (std::size_t e = 0; e < left_degree; ++e) sockets.push_back(i);
    Rng rng(spec.seed);
    rng.shuffle(sockets);

    BipartiteDesign out;
    out.schedule.rows.reserve(spec.m);
    std::size_t ones = 0;
    for (int j = 0; j < spec.m; ++j) {
        MeasurementVector row;
        row.coefficients.assign(spec.n, 0.0);
        for (std::size_t e = 0; e < d; ++e)
            row.coefficients[sockets[j * d + e]] = 1.0;
        for (double c : row.coefficients) ones += c != 0.0;
        out.schedule.rows.push_back(std::move(row));
    }
    out.collapsed_multiedges = d * spec.m - ones;
    return out;
}

Schedule hamming74_design() {
    Schedule s;
    for (int bit = 0; bit < 3; ++bit) {
        MeasurementVector row;
        row.coefficients.assign(7, 0.0);
        for (int col = 0; col < 7; ++col)
            if (((col + 1) >> bit) & 1) row.coefficients[col] = 1.0;
        s.rows.push_back(std::move(row));
    }
    return s;
}

MeanShiftDesign optimal_mean_shift(const Eigen::VectorXd& mu1, const Eigen::VectorXd& mu2,
                                   const Eigen::MatrixXd& sigma) {
    if (mu1.size() != mu2.size() || sigma.rows() != mu1.size() || sigma.cols() != mu1.size())
        throw std::invalid_argument("optimal_mean_shift: dimension mismatch");
    const Eigen::VectorXd diff = mu1 - mu2;
    if (diff.lpNorm<Eigen::Infinity>() == 0.0)
        throw DegenerateError("optimal_mean_shift: no mean separation");
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("optimal_mean_shift: covariance not positive definite");
    const Eigen::VectorXd a = llt.solve(diff);
    MeanShiftDesign out;
    out.a.coefficients.assign(a.data(), a.data() + a.size());
    out.exponent = 0.125 * diff.dot(a);
    return out;
}

namespace {

void normalize_direction(Eigen::VectorXd& a) {
    a /= a.norm();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) != 0.0) {
            if (a(i) < 0.0) a = -a;
            break;
        }
    }
}

} // namespace

VarianceDesign optimal_variance_discrimination(const Eigen::MatrixXd& sigma1,
                                               const Eigen::MatrixXd& sigma2) {
    if (sigma1.rows() != sigma1.cols() || sigma2.rows() != sigma2.cols() ||
        sigma1.rows() != sigma2.rows())
        throw std::invalid_argument("optimal_variance_discrimination: dimension mismatch");
    if (Eigen::LLT<Eigen::MatrixXd>(sigma1).info() != Eigen::Success ||
        Eigen::LLT<Eigen::MatrixXd>(sigma2).info() != Eigen::Success)
        throw std::invalid_argument(
            "optimal_variance_discrimination: inputs must be positive definite");

    // max over a of (a'S1a)/(a'S2a) and its swap; the larger one is B.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> forward(sigma1, sigma2);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> backward(sigma2, sigma1);
    if (forward.info() != Eigen::Success || backward.info() != Eigen::Success)
        throw std::runtime_error("optimal_variance_discrimination: eigensolver failed");
    const Eigen::Index last = sigma1.rows() - 1;
    const double b_forward = forward.eigenvalues()(last);
    const double b_backward = backward.eigenvalues()(last);

    VarianceDesign out;
    Eigen::VectorXd a = b_forward >= b_backward ? forward.eigenvectors().col(last)
                                                : backward.eigenvectors().col(last);
    normalize_direction(a);
    out.a.coefficients.assign(a.data(), a.data() + a.size());
    out.ratio = std::max(1.0, std::max(b_forward, b_backward));
    out.lambda_star = out.ratio > 1.0 ? zero_mean_lambda_star(out.ratio) : 0.5;
    out.exponent = zero_mean_chernoff(out.ratio);
    return out;
}

Ensemble permutation_ensemble(const MeasurementVector& base, int max_n) {
    base.validate();
    const int n = static_cast<int>(base.size());
    if (n > max_n)
        throw ConfigError("permutation ensemble: n = " + std::to_string(n) + " exceeds cap " +
                          std::to_string(max_n) +
                          " (n! atoms); consider a cyclic-shift ensemble instead");
    std::vector<double> sorted = base.coefficients;
    std::sort(sorted.begin(), sorted.end());
    // next_permutation over the sorted multiset enumerates each distinct
    // rearrangement exactly once; they are equally likely under a uniform
    // random index permutation.
    std::vector<std::vector<double>> atoms;
    do {
        atoms.push_back(sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    Ensemble e;
    e.atoms.reserve(atoms.size());
    for (auto& atom : atoms) e.atoms.push_back(MeasurementVector{std::move(atom)});
    e.weights.assign(e.atoms.size(), 1.0 / static_cast<double>(e.atoms.size()));
    e.validate();
    return e;
}

namespace {

double pairwise_chernoff_sum(const AnomalyModel& model,
                             const std::vector<Hypothesis>& hypotheses,
                             const Eigen::VectorXd& a) {
    MeasurementVector v;
    v.coefficients.assign(a.data(), a.data() + a.size());
    std::vector<Gaussian1D> laws;
    laws.reserve(hypotheses.size());
    for (const auto& h : hypotheses) laws.push_back(output_distribution(model, h, v));
    double total = 0.0;
    for (std::size_t i = 0; i < laws.size(); ++i)
        for (std::size_t j = i + 1; j < laws.size(); ++j)
            total += chernoff_gaussian(laws[i], laws[j]).value;
    return total;
}

} // namespace

BaseVectorResult optimize_base_vector(const AnomalyModel& model, std::uint64_t seed,
                                      int restarts) {
    if (model.k != 1 || model.common.variance != model.anomalous.variance)
        throw ConfigError(
            "optimal base vector: outside scope (requires k = 1 and equal variances)");
    if (model.common.variance <= 0.0)
        throw DegenerateError("optimal base vector: zero-variance model");
    if (restarts < 1) throw std::invalid_argument("optimize_base_vector: restarts >= 1");

    const std::vector<Hypothesis> hypotheses = enumerate_hypotheses(model.n, model.k);
    const auto objective = [&](const Eigen::VectorXd& a) {
        return pairwise_chernoff_sum(model, hypotheses, a);
    };

    const int n = model.n;
    Eigen::VectorXd best_vector = Eigen::VectorXd::Unit(n, 0);
    double best_value = objective(best_vector);

    for (int restart = 0; restart < restarts; ++restart) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart), 0));
        Eigen::VectorXd x(n);
        do {
            for (int i = 0; i < n; ++i) x(i) = rng.normal();
        } while (x.norm() < 1e-9);
        x /= x.norm();
        double value = objective(x);

        // pattern search over coordinate probes, renormalized to the sphere
        double step = 0.5;
        while (step >= 1e-6) {
            bool improved = false;
            Eigen::VectorXd probe_best = x;
            double probe_value = value;
            for (int i = 0; i < n; ++i) {
                for (double sign : {1.0, -1.0}) {
                    Eigen::VectorXd probe = x;
                    probe(i) += sign * step;
                    const double norm = probe.norm();
                    if (norm < 1e-12) continue;
                    probe /= norm;
                    const double pv = objective(probe);
                    if (pv > probe_value) {
                        probe_value = pv;
                        probe_best = probe;
                        improved = true;
                    }
                }
            }
            if (improved) {
                x = probe_best;
                value = probe_value;
            } else {
                step *= 0.5;
            }
        }
        if (value > best_value) {
            best_value = value;
            best_vector = x;
        }
    }

    normalize_direction(best_vector);
    BaseVectorResult out;
    out.a.coefficients.assign(best_vector.data(), best_vector.data() + best_vector.size());
    out.objective = objective(best_vector);
    return out;
}

} // namespace mixobs
