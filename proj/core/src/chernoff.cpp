#include "mixobs/chernoff.hpp"

#include "mixobs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mixobs {

namespace {

constexpr double kLambdaTol = 1e-10;

void require_nondegenerate(const Gaussian1D& g, const char* which) {
    if (g.variance <= 0.0)
        throw DegenerateError(std::string("degenerate variance in ") + which);
}

void require_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("lambda must lie in [0,1]");
}

/// Affinity between two 1-D Gaussians reduced to the three numbers that
/// matter. All evaluations of log-affinity and its lambda-derivative go
/// through this.
struct AffinityTerm {
    double dm2; // (m1-m2)^2
    double v1;
    double v2;

    static AffinityTerm of(const Gaussian1D& g1, const Gaussian1D& g2) {
        const double dm = g1.mean - g2.mean;
        return AffinityTerm{dm * dm, g1.variance, g2.variance};
    }

    // The precision of the tilted product mixes harmonically, which is
    // why the variance mixture below carries weight lambda on v2.
    double value(double lambda) const {
        const double v = lambda * v2 + (1.0 - lambda) * v1;
        return -lambda * (1.0 - lambda) * dm2 / (2.0 * v) -
               0.5 * (std::log(v) - (1.0 - lambda) * std::log(v1) - lambda * std::log(v2));
    }

    double derivative(double lambda) const {
        const double v = lambda * v2 + (1.0 - lambda) * v1;
        const double dv = v2 - v1;
        const double mean_part =
            -0.5 * dm2 * ((1.0 - 2.0 * lambda) * v - lambda * (1.0 - lambda) * dv) / (v * v);
        const double var_part = -0.5 * dv / v + 0.5 * std::log(v2 / v1);
        return mean_part + var_part;
    }
};

/// Root of a nonincreasing derivative on [0,1]; the maximizer of the
/// concave objectives in this module. Endpoints where the objective is
/// pinned to 0 are returned directly.
double bisect_derivative(const std::function<double(double)>& deriv) {
    if (deriv(0.0) <= 0.0) return 0.0;
    if (deriv(1.0) >= 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > kLambdaTol) {
        const double mid = 0.5 * (lo + hi);
        const double d = deriv(mid);
        if (d > 0.0)
            lo = mid;
        else if (d < 0.0)
            hi = mid;
        else
            return mid;
    }
    return 0.5 * (lo + hi);
}

/// Per-atom output-law pairs for one hypothesis pair, with the degenerate
/// checks the conditional operations share.
struct PairTerms {
    std::vector<AffinityTerm> terms;
    std::vector<double> weights;
};

PairTerms make_pair_terms(const Ensemble& ensemble, const AnomalyModel& model,
                          const Hypothesis& hi, const Hypothesis& hj) {
    ensemble.validate();
    PairTerms out;
    out.terms.reserve(ensemble.size());
    out.weights = ensemble.weights;
    for (std::size_t t = 0; t < ensemble.size(); ++t) {
        const Gaussian1D a = output_distribution(model, hi, ensemble.atoms[t]);
        const Gaussian1D b = output_distribution(model, hj, ensemble.atoms[t]);
        if (a.variance <= 0.0 || b.variance <= 0.0)
            throw DegenerateError("atom " + std::to_string(t + 1) +
                                  ": degenerate output law for pair " + hi.to_string() + "," +
                                  hj.to_string());
        out.terms.push_back(AffinityTerm::of(a, b));
    }
    return out;
}

double outer_objective(const PairTerms& pt, double lambda) {
    double acc = 0.0;
    for (std::size_t t = 0; t < pt.terms.size(); ++t)
        acc += pt.weights[t] * pt.terms[t].value(lambda);
    return -acc;
}

double outer_derivative(const PairTerms& pt, double lambda) {
    double acc = 0.0;
    for (std::size_t t = 0; t < pt.terms.size(); ++t)
        acc += pt.weights[t] * pt.terms[t].derivative(lambda);
    return -acc;
}

ChernoffResult outer_chernoff_terms(const PairTerms& pt) {
    const double lambda =
        bisect_derivative([&](double l) { return outer_derivative(pt, l); });
    return ChernoffResult{std::max(0.0, outer_objective(pt, lambda)), lambda};
}

} // namespace

double log_affinity(const Gaussian1D& g1, const Gaussian1D& g2, double lambda) {
    require_lambda(lambda);
    require_nondegenerate(g1, "log_affinity");
    require_nondegenerate(g2, "log_affinity");
    return std::min(0.0, AffinityTerm::of(g1, g2).value(lambda));
}

ChernoffResult chernoff_gaussian(const Gaussian1D& g1, const Gaussian1D& g2) {
    require_nondegenerate(g1, "chernoff_gaussian");
    require_nondegenerate(g2, "chernoff_gaussian");
    const AffinityTerm term = AffinityTerm::of(g1, g2);
    const double lambda =
        bisect_derivative([&](double l) { return -term.derivative(l); });
    return ChernoffResult{std::max(0.0, -term.value(lambda)), lambda};
}

double chernoff_equal_variance(double mean_a, double mean_b, double variance) {
    if (variance <= 0.0)
        throw DegenerateError("chernoff_equal_variance: variance must be positive");
    const double d = mean_a - mean_b;
    return d * d / (8.0 * variance);
}

double zero_mean_lambda_star(double ratio) {
    if (!(ratio > 1.0)) throw std::invalid_argument("zero_mean_lambda_star: ratio must be > 1");
    const double lb = std::log(ratio);
    return (ratio * lb - (ratio - 1.0)) / ((ratio - 1.0) * lb);
}

double zero_mean_chernoff(double ratio) {
    if (!(ratio >= 1.0)) throw std::invalid_argument("zero_mean_chernoff: ratio must be >= 1");
    if (ratio == 1.0) return 0.0;
    const double lb = std::log(ratio);
    return 0.5 * (std::log((ratio - 1.0) / lb) - (ratio - 1.0 - lb) / (ratio - 1.0));
}

double kl_divergence(const Gaussian1D& p, const Gaussian1D& q) {
    require_nondegenerate(p, "kl_divergence");
    require_nondegenerate(q, "kl_divergence");
    const double dm = p.mean - q.mean;
    return 0.5 * (p.variance / q.variance + dm * dm / q.variance - 1.0 +
                  std::log(q.variance / p.variance));
}

Gaussian1D tilted_gaussian(const Gaussian1D& g1, const Gaussian1D& g2, double lambda) {
    require_lambda(lambda);
    require_nondegenerate(g1, "tilted_gaussian");
    require_nondegenerate(g2, "tilted_gaussian");
    const double precision = lambda / g1.variance + (1.0 - lambda) / g2.variance;
    if (!(precision > 0.0))
        throw DegenerateError("tilted_gaussian: nonpositive tilted precision");
    const double variance = 1.0 / precision;
    const double mean =
        variance * (lambda * g1.mean / g1.variance + (1.0 - lambda) * g2.mean / g2.variance);
    return Gaussian1D{mean, variance};
}

ChernoffResult inner_chernoff(const Ensemble& ensemble, const AnomalyModel& model,
                              const Hypothesis& hi, const Hypothesis& hj) {
    const PairTerms pt = make_pair_terms(ensemble, model, hi, hj);
    // log E_A[affinity] via log-sum-exp; the softmax-weighted derivative
    // is the analytic derivative of that objective.
    const auto objective = [&](double lambda) {
        double max_la = -std::numeric_limits<double>::infinity();
        for (const auto& term : pt.terms) max_la = std::max(max_la, term.value(lambda));
        double acc = 0.0;
        for (std::size_t t = 0; t < pt.terms.size(); ++t)
            acc += pt.weights[t] * std::exp(pt.terms[t].value(lambda) - max_la);
        return -(max_la + std::log(acc));
    };
    const auto derivative = [&](double lambda) {
        double max_la = -std::numeric_limits<double>::infinity();
        for (const auto& term : pt.terms) max_la = std::max(max_la, term.value(lambda));
        double num = 0.0, den = 0.0;
        for (std::size_t t = 0; t < pt.terms.size(); ++t) {
            const double w = pt.weights[t] * std::exp(pt.terms[t].value(lambda) - max_la);
            num += w * pt.terms[t].derivative(lambda);
            den += w;
        }
        return -num / den;
    };
    const double lambda = bisect_derivative(derivative);
    return ChernoffResult{std::max(0.0, objective(lambda)), lambda};
}

ChernoffResult outer_chernoff(const Ensemble& ensemble, const AnomalyModel& model,
                              const Hypothesis& hi, const Hypothesis& hj) {
    return outer_chernoff_terms(make_pair_terms(ensemble, model, hi, hj));
}

double holder_lower_bound(const Ensemble& ensemble, const AnomalyModel& model,
                          const Hypothesis& hi, const Hypothesis& hj) {
    const PairTerms pt = make_pair_terms(ensemble, model, hi, hj);
    double best = 0.0;
    for (std::size_t t = 0; t < pt.terms.size(); ++t) {
        if (pt.weights[t] <= 0.0) continue;
        const double lambda =
            bisect_derivative([&](double l) { return -pt.terms[t].derivative(l); });
        const double atom_chernoff = std::max(0.0, -pt.terms[t].value(lambda));
        const double bound =
            -std::log(1.0 - pt.weights[t] + pt.weights[t] * std::exp(-atom_chernoff));
        best = std::max(best, bound);
    }
    return best;
}

ChernoffResult oc_via_kl_balance(const Ensemble& ensemble, const AnomalyModel& model,
                                 const Hypothesis& hi, const Hypothesis& hj) {
    ensemble.validate();
    std::vector<Gaussian1D> laws_i, laws_j;
    laws_i.reserve(ensemble.size());
    laws_j.reserve(ensemble.size());
    for (std::size_t t = 0; t < ensemble.size(); ++t) {
        const Gaussian1D a = output_distribution(model, hi, ensemble.atoms[t]);
        const Gaussian1D b = output_distribution(model, hj, ensemble.atoms[t]);
        if (a.variance <= 0.0 || b.variance <= 0.0)
            throw DegenerateError("atom " + std::to_string(t + 1) +
                                  ": degenerate output law for pair " + hi.to_string() + "," +
                                  hj.to_string());
        laws_i.push_back(a);
        laws_j.push_back(b);
    }
    // Q_i(lambda) - Q_j(lambda) falls monotonically from E[D(Pj||Pi)] at
    // lambda=0 to -E[D(Pi||Pj)] at lambda=1; bisect for the balance point.
    const auto balance_gap = [&](double lambda) {
        double gap = 0.0;
        for (std::size_t t = 0; t < ensemble.size(); ++t) {
            const Gaussian1D tilt = tilted_gaussian(laws_i[t], laws_j[t], lambda);
            gap += ensemble.weights[t] *
                   (kl_divergence(tilt, laws_i[t]) - kl_divergence(tilt, laws_j[t]));
        }
        return gap;
    };
    double lambda;
    if (balance_gap(0.0) <= 0.0) {
        lambda = 0.5; // identical laws under every atom
    } else {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > kLambdaTol) {
            const double mid = 0.5 * (lo + hi);
            const double gap = balance_gap(mid);
            if (gap > 0.0)
                lo = mid;
            else if (gap < 0.0)
                hi = mid;
            else {
                lo = hi = mid;
            }
        }
        lambda = 0.5 * (lo + hi);
    }
    double value_i = 0.0, value_j = 0.0;
    for (std::size_t t = 0; t < ensemble.size(); ++t) {
        const Gaussian1D tilt = tilted_gaussian(laws_i[t], laws_j[t], lambda);
        value_i += ensemble.weights[t] * kl_divergence(tilt, laws_i[t]);
        value_j += ensemble.weights[t] * kl_divergence(tilt, laws_j[t]);
    }
    return ChernoffResult{std::max(0.0, 0.5 * (value_i + value_j)), lambda};
}

namespace {

ExponentReport build_report(std::vector<Hypothesis> hypotheses,
                            const std::function<ChernoffResult(int, int)>& pair_exponent) {
    const int count = static_cast<int>(hypotheses.size());
    ExponentReport report;
    report.hypotheses = std::move(hypotheses);
    report.pairwise = Eigen::MatrixXd::Zero(count, count);
    report.lambdas = Eigen::MatrixXd::Zero(count, count);
    report.min_exponent = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
            const ChernoffResult r = pair_exponent(i, j);
            report.pairwise(i, j) = r.value;
            report.pairwise(j, i) = r.value;
            report.lambdas(i, j) = r.lambda_star;
            report.lambdas(j, i) = 1.0 - r.lambda_star;
            if (r.value < report.min_exponent) {
                report.min_exponent = r.value;
                report.argmin_i = i;
                report.argmin_j = j;
            }
        }
    }
    return report;
}

std::vector<Hypothesis> hypotheses_for_report(const AnomalyModel& model) {
    const std::uint64_t count = binomial_checked(model.n, model.k, kHypothesisCap);
    if (count > kPairwiseCap)
        throw ConfigError("pairwise exponent matrix too large: L=" + std::to_string(count) +
                          " exceeds cap " + std::to_string(kPairwiseCap));
    return enumerate_hypotheses(model.n, model.k);
}

} // namespace

ExponentReport min_pairwise_exponent(const Ensemble& ensemble, const AnomalyModel& model) {
    ensemble.validate();
    std::vector<Hypothesis> hypotheses = hypotheses_for_report(model);
    // Precompute per-atom output laws once; every pair reuses them.
    std::vector<std::vector<Gaussian1D>> outputs(hypotheses.size());
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
        outputs[h].reserve(ensemble.size());
        for (std::size_t t = 0; t < ensemble.size(); ++t) {
            const Gaussian1D law = output_distribution(model, hypotheses[h], ensemble.atoms[t]);
            if (law.variance <= 0.0)
                throw DegenerateError("atom " + std::to_string(t + 1) +
                                      ": degenerate output law under hypothesis " +
                                      hypotheses[h].to_string());
            outputs[h].push_back(law);
        }
    }
    return build_report(std::move(hypotheses), [&](int i, int j) {
        PairTerms pt;
        pt.weights = ensemble.weights;
        pt.terms.reserve(ensemble.size());
        for (std::size_t t = 0; t < ensemble.size(); ++t)
            pt.terms.push_back(AffinityTerm::of(outputs[i][t], outputs[j][t]));
        return outer_chernoff_terms(pt);
    });
}

ExponentReport min_pairwise_exponent(const MeasurementVector& fixed, const AnomalyModel& model) {
    fixed.validate();
    std::vector<Hypothesis> hypotheses = hypotheses_for_report(model);
    std::vector<Gaussian1D> outputs;
    outputs.reserve(hypotheses.size());
    for (const auto& h : hypotheses) {
        const Gaussian1D law = output_distribution(model, h, fixed);
        if (law.variance <= 0.0)
            throw DegenerateError("fixed measurement: degenerate output law under hypothesis " +
                                  h.to_string());
        outputs.push_back(law);
    }
    return build_report(std::move(hypotheses),
                        [&](int i, int j) { return chernoff_gaussian(outputs[i], outputs[j]); });
}

ExponentReport min_pairwise_exponent(const Schedule& schedule, const AnomalyModel& model) {
    return min_pairwise_exponent(Ensemble::from_schedule(schedule), model);
}

void ExponentReport::write_csv(std::ostream& out) const {
    out << "i,j,exponent_nats,lambda_star\n";
    const int count = static_cast<int>(hypotheses.size());
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j)
            out << (i + 1) << ',' << (j + 1) << ',' << format_double(pairwise(i, j)) << ','
                << format_double(lambdas(i, j)) << '\n';
}

std::string ExponentReport::summary() const {
    return "E=" + format_double(min_exponent) + " pair=(" + std::to_string(argmin_i + 1) + "," +
           std::to_string(argmin_j + 1) + ")";
}

std::int64_t sample_complexity(double exponent, int n, int k, double target_error) {
    if (!(exponent > 0.0)) throw DegenerateError("indistinguishable hypotheses: exponent <= 0");
    if (!(target_error > 0.0 && target_error < 1.0))
        throw std::invalid_argument("sample_complexity: target_error must lie in (0,1)");
    const double log_count = log_binomial(n, k);
    return static_cast<std::int64_t>(
        std::ceil((log_count + std::log(1.0 / target_error)) / exponent));
}

} // namespace mixobs
