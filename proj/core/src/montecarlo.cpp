#include "mixobs/montecarlo.hpp"

#include "mixobs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mixobs {

namespace {

// Sub-stream tags so the truth draw, the design realization and the
// realization table never share a stream.
constexpr std::uint64_t kDesignStream = 0xd511;
constexpr std::uint64_t kFrozenDesignStream = 0xf0f0;

std::size_t hypothesis_index(const std::vector<Hypothesis>& hypotheses, const Hypothesis& h) {
    const auto it = std::lower_bound(
        hypotheses.begin(), hypotheses.end(), h,
        [](const Hypothesis& a, const Hypothesis& b) { return a.support < b.support; });
    if (it == hypotheses.end() || !(*it == h))
        throw std::invalid_argument("hypothesis not in the enumerated space");
    return static_cast<std::size_t>(it - hypotheses.begin());
}

Decision run_detector(const AnomalyModel& model, const Schedule& schedule,
                      const Observations& obs, const std::vector<Hypothesis>& hypotheses,
                      DetectorKind detector, const NPConfig& np) {
    switch (detector) {
    case DetectorKind::Lrt:
        return lrt(model, schedule, obs, hypotheses);
    case DetectorKind::PairwiseNp:
        return pairwise_np(model, schedule, obs, hypotheses, np);
    }
    throw std::logic_error("unknown detector");
}

Schedule realize_design(const TrialDesign& design, const AnomalyModel& model, int m,
                        std::uint64_t master_seed, std::uint64_t trial_seed) {
    Schedule schedule;
    if (m == 0) return schedule;
    if (const auto* fixed = std::get_if<FixedDesign>(&design)) {
        fixed->prototype.validate();
        schedule.rows.reserve(m);
        for (int j = 0; j < m; ++j)
            schedule.rows.push_back(fixed->prototype.rows[j % fixed->prototype.m()]);
    } else if (std::holds_alternative<SeparateTrialDesign>(design)) {
        schedule = separate_design(model.n, m, derive_seed(trial_seed, kDesignStream, 0));
    } else if (const auto* bip = std::get_if<BipartiteTrialDesign>(&design)) {
        BipartiteDesignSpec spec;
        spec.n = model.n;
        spec.m = m;
        spec.right_degree = bip->right_degree;
        spec.seed = bip->freeze_design
                        ? derive_seed(master_seed, static_cast<std::uint64_t>(m),
                                      kFrozenDesignStream)
                        : derive_seed(trial_seed, kDesignStream, 0);
        schedule = bipartite_design(spec).schedule;
    } else {
        const auto& ens = std::get<EnsembleTrialDesign>(design);
        schedule = ens.regime == EnsembleRegime::Random
                       ? realize_random_schedule(ens.ensemble, m,
                                                 derive_seed(trial_seed, kDesignStream, 0))
                       : realize_deterministic_schedule(ens.ensemble, m);
    }
    return schedule;
}

} // namespace

void TrialPlan::validate() const {
    if (trials < 1) throw std::invalid_argument("trial plan: trials >= 1");
    if (workers < 1) throw std::invalid_argument("trial plan: workers >= 1");
    if (m_values.empty()) throw std::invalid_argument("trial plan: no budgets");
    for (std::size_t i = 0; i < m_values.size(); ++i) {
        if (m_values[i] < 0) throw std::invalid_argument("trial plan: negative budget");
        if (i > 0 && m_values[i] <= m_values[i - 1])
            throw std::invalid_argument("trial plan: budgets must be strictly increasing");
    }
    if (const auto* fixed = std::get_if<FixedDesign>(&design)) fixed->prototype.validate();
    if (const auto* ens = std::get_if<EnsembleTrialDesign>(&design)) ens->ensemble.validate();
}

WilsonInterval wilson_interval(int errors, int trials) {
    if (trials < 1 || errors < 0 || errors > trials)
        throw std::invalid_argument("wilson_interval: need 0 <= errors <= trials");
    constexpr double z = 1.959963984540054; // 97.5 percentile of N(0,1)
    const double t = trials;
    const double p = errors / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = (p + z2 / (2.0 * t)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
    // the interval contains the point estimate; rounding must not break that
    const double low = std::min(p, std::max(0.0, center - half));
    const double high = std::max(p, std::min(1.0, center + half));
    return WilsonInterval{low, high};
}

std::vector<double> realization_table(const AnomalyModel& model, const Hypothesis& truth,
                                      int m, Rng& rng) {
    const int n = model.n;
    std::vector<double> table(static_cast<std::size_t>(n) * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            const Gaussian1D& f = truth.contains(i) ? model.anomalous : model.common;
            table[static_cast<std::size_t>(j) * n + i] =
                f.mean + std::sqrt(f.variance) * rng.normal();
        }
    }
    return table;
}

Observations apply_schedule(const Schedule& schedule, const std::vector<double>& table) {
    Observations obs;
    const std::size_t m = schedule.m();
    if (m == 0) return obs;
    const std::size_t n = schedule.n();
    if (table.size() != n * m)
        throw std::invalid_argument("realization table size mismatch");
    obs.values.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        double y = 0.0;
        const MeasurementVector& row = schedule.rows[j];
        for (std::size_t i = 0; i < n; ++i)
            if (row[i] != 0.0) y += row[i] * table[j * n + i];
        obs.values.push_back(y);
    }
    return obs;
}

bool simulate_trial(const AnomalyModel& model, const Hypothesis& truth,
                    const Schedule& schedule, DetectorKind detector, const NPConfig& np,
                    std::uint64_t seed) {
    const std::vector<Hypothesis> hypotheses = enumerate_hypotheses(model.n, model.k);
    const std::size_t truth_index = hypothesis_index(hypotheses, truth);
    Rng rng(seed);
    const std::vector<double> table =
        realization_table(model, truth, static_cast<int>(schedule.m()), rng);
    const Observations obs = apply_schedule(schedule, table);
    const Decision decision = run_detector(model, schedule, obs, hypotheses, detector, np);
    return decision == Decision::select(truth_index);
}

TrialOutcome run_trial(const TrialPlan& plan, const std::vector<Hypothesis>& hypotheses,
                       int m, int trial) {
    const std::uint64_t trial_seed =
        derive_seed(plan.master_seed, static_cast<std::uint64_t>(m),
                    static_cast<std::uint64_t>(trial));
    Rng rng(trial_seed);
    TrialOutcome outcome;
    outcome.truth_index = static_cast<std::size_t>(rng.uniform_index(hypotheses.size()));
    const Hypothesis& truth = hypotheses[outcome.truth_index];
    const Schedule schedule =
        realize_design(plan.design, plan.model, m, plan.master_seed, trial_seed);
    const std::vector<double> table = realization_table(plan.model, truth, m, rng);
    const Observations obs = apply_schedule(schedule, table);
    const Decision decision =
        run_detector(plan.model, schedule, obs, hypotheses, plan.detector, plan.np);
    outcome.correct = decision == Decision::select(outcome.truth_index);
    outcome.normal_draws = rng.normal_draws();
    return outcome;
}

std::vector<ErrorCurvePoint> error_curve(const TrialPlan& plan) {
    plan.validate();
    const std::vector<Hypothesis> hypotheses =
        enumerate_hypotheses(plan.model.n, plan.model.k);
    std::vector<ErrorCurvePoint> points;
    points.reserve(plan.m_values.size());
    for (int m : plan.m_values) {
        const int workers = std::min(plan.workers, plan.trials);
        std::vector<int> worker_errors(workers, 0);
        const auto run_range = [&](int worker) {
            int errors = 0;
            for (int trial = worker; trial < plan.trials; trial += workers)
                errors += !run_trial(plan, hypotheses, m, trial).correct;
            worker_errors[worker] = errors;
        };
        if (workers == 1) {
            run_range(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
            for (auto& t : pool) t.join();
        }
        ErrorCurvePoint point;
        point.m = m;
        point.trials = plan.trials;
        for (int e : worker_errors) point.errors += e;
        point.error_rate = static_cast<double>(point.errors) / plan.trials;
        const WilsonInterval ci = wilson_interval(point.errors, plan.trials);
        point.ci_low = ci.low;
        point.ci_high = ci.high;
        points.push_back(point);
    }
    return points;
}

ExponentFit empirical_exponent(const std::vector<ErrorCurvePoint>& points) {
    std::vector<double> ms, ys;
    for (const auto& p : points) {
        if (p.error_rate > 0.0 && p.error_rate < 1.0) {
            ms.push_back(p.m);
            ys.push_back(-std::log(p.error_rate));
        }
    }
    const std::size_t count = ms.size();
    if (count < 3)
        throw std::invalid_argument("empirical_exponent: need at least 3 points with "
                                    "error rate strictly between 0 and 1");
    double mean_m = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        mean_m += ms[i];
        mean_y += ys[i];
    }
    mean_m /= count;
    mean_y /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sxx += (ms[i] - mean_m) * (ms[i] - mean_m);
        sxy += (ms[i] - mean_m) * (ys[i] - mean_y);
    }
    if (sxx == 0.0) throw std::invalid_argument("empirical_exponent: budgets coincide");
    ExponentFit fit;
    fit.slope = sxy / sxx;
    double ss_resid = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double predicted = mean_y + fit.slope * (ms[i] - mean_m);
        ss_resid += (ys[i] - predicted) * (ys[i] - predicted);
    }
    fit.std_error = count > 2 ? std::sqrt(ss_resid / (count - 2) / sxx) : 0.0;
    return fit;
}

void write_error_curve_csv(std::ostream& out, const std::vector<CurveSeries>& series) {
    out << "m,design,detector,trials,errors,error_rate,ci_low,ci_high\n";
    for (const auto& s : series)
        for (const auto& p : s.points)
            out << p.m << ',' << s.design << ',' << s.detector << ',' << p.trials << ','
                << p.errors << ',' << format_double(p.error_rate) << ','
                << format_double(p.ci_low) << ',' << format_double(p.ci_high) << '\n';
}

void write_plot_script(std::ostream& out, const std::vector<CurveSeries>& series) {
    out << "# gnuplot script: error probability versus number of measurements\n";
    out << "set logscale y\n";
    out << "set xlabel 'm'\n";
    out << "set ylabel 'error probability'\n";
    out << "set key top right\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "$curve" << s << " << EOD\n";
        for (const auto& p : series[s].points)
            out << p.m << ' ' << format_double(std::max(p.error_rate, 1e-12)) << ' '
                << format_double(std::max(p.ci_low, 1e-12)) << ' '
                << format_double(std::max(p.ci_high, 1e-12)) << '\n';
        out << "EOD\n";
    }
    out << "plot ";
    for (std::size_t s = 0; s < series.size(); ++s) {
        if (s) out << ", \\\n     ";
        out << "$curve" << s << " using 1:2:3:4 with yerrorlines title '" << series[s].design
            << " / " << series[s].detector << "'";
    }
    out << "\n";
}

const char* detector_name(DetectorKind kind) {
    return kind == DetectorKind::Lrt ? "lrt" : "pairwise_np";
}

} // namespace mixobs
