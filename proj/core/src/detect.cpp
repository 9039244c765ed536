#include "mixobs/detect.hpp"

#include "mixobs/errors.hpp"
#include "mixobs/gaussian.hpp"
#include "mixobs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace mixobs {

Observations read_observations_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open observations file: " + path);
    Observations obs;
    double value;
    while (in >> value) obs.values.push_back(value);
    return obs;
}

void write_observations_file(const std::string& path, const Observations& obs) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    for (double v : obs.values) out << format_double(v) << '\n';
}

std::string format_decision(const Decision& decision,
                            const std::vector<Hypothesis>& hypotheses) {
    if (decision.is_failure()) return "FAILURE";
    const Hypothesis& h = hypotheses.at(*decision.selected);
    std::string out = "SELECTED";
    for (int index : h.support) out += ' ' + std::to_string(index + 1);
    return out;
}

namespace {

void check_alignment(const AnomalyModel& model, const Schedule& schedule,
                     const Observations& obs) {
    if (schedule.m() != obs.m())
        throw std::invalid_argument("observations/schedule length mismatch");
    for (const auto& row : schedule.rows)
        if (row.size() != static_cast<std::size_t>(model.n))
            throw std::invalid_argument("schedule row length != n");
    for (double v : obs.values)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite observation");
}

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double row_log_density(const AnomalyModel& model, const Hypothesis& h,
                       const std::vector<std::size_t>& nonzeros, const MeasurementVector& row,
                       double y, std::size_t row_index) {
    double mean = 0.0;
    double variance = 0.0;
    for (std::size_t i : nonzeros) {
        const double c = row[i];
        const Gaussian1D& f = h.contains(static_cast<int>(i)) ? model.anomalous : model.common;
        mean += c * f.mean;
        variance += c * c * f.variance;
    }
    if (variance <= 0.0)
        throw DegenerateError("degenerate output law at row " + std::to_string(row_index + 1) +
                              " under hypothesis " + h.to_string());
    const double d = y - mean;
    return -0.5 * (kLog2Pi + std::log(variance) + d * d / variance);
}

} // namespace

double log_likelihood(const AnomalyModel& model, const Hypothesis& h,
                      const Schedule& schedule, const Observations& obs) {
    check_alignment(model, schedule, obs);
    double total = 0.0;
    for (std::size_t j = 0; j < schedule.m(); ++j) {
        const Gaussian1D law = output_distribution(model, h, schedule.rows[j]);
        if (law.variance <= 0.0)
            throw DegenerateError("degenerate output law at row " + std::to_string(j + 1) +
                                  " under hypothesis " + h.to_string());
        total += log_density(law, obs.values[j]);
    }
    return total;
}

std::vector<double> hypothesis_log_likelihoods(const AnomalyModel& model,
                                               const Schedule& schedule,
                                               const Observations& obs,
                                               const std::vector<Hypothesis>& hypotheses) {
    check_alignment(model, schedule, obs);
    std::vector<double> scores(hypotheses.size(), 0.0);
    std::vector<std::size_t> nonzeros;
    for (std::size_t j = 0; j < schedule.m(); ++j) {
        const MeasurementVector& row = schedule.rows[j];
        nonzeros.clear();
        for (std::size_t i = 0; i < row.size(); ++i)
            if (row[i] != 0.0) nonzeros.push_back(i);
        for (std::size_t h = 0; h < hypotheses.size(); ++h)
            scores[h] += row_log_density(model, hypotheses[h], nonzeros, row, obs.values[j], j);
    }
    return scores;
}

Decision lrt(const AnomalyModel& model, const Schedule& schedule, const Observations& obs,
             const std::vector<Hypothesis>& hypotheses) {
    if (hypotheses.empty()) throw std::invalid_argument("lrt: empty hypothesis list");
    const std::vector<double> scores = hypothesis_log_likelihoods(model, schedule, obs, hypotheses);
    std::size_t best = 0;
    for (std::size_t h = 1; h < scores.size(); ++h)
        if (scores[h] > scores[best]) best = h;
    return Decision::select(best);
}

Decision pairwise_np(const AnomalyModel& model, const Schedule& schedule,
                     const Observations& obs, const std::vector<Hypothesis>& hypotheses,
                     const NPConfig& config) {
    if (hypotheses.empty()) throw std::invalid_argument("pairwise_np: empty hypothesis list");
    if (!std::isfinite(config.log_threshold))
        throw std::invalid_argument("pairwise_np: threshold must be finite");
    const std::vector<double> scores = hypothesis_log_likelihoods(model, schedule, obs, hypotheses);
    std::vector<char> wins_all(scores.size(), 1);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        for (std::size_t j = i + 1; j < scores.size(); ++j) {
            const double ratio = scores[i] - scores[j];
            if (!(ratio > config.log_threshold)) wins_all[i] = 0;
            if (!(-ratio > config.log_threshold)) wins_all[j] = 0;
        }
    }
    for (std::size_t h = 0; h < wins_all.size(); ++h)
        if (wins_all[h]) return Decision::select(h);
    return Decision::failure();
}

Schedule realize_random_schedule(const Ensemble& ensemble, int m, std::uint64_t seed) {
    ensemble.validate();
    if (m < 1) throw std::invalid_argument("realize_random_schedule: m >= 1");
    Rng rng(seed);
    Schedule s;
    s.rows.reserve(m);
    for (int j = 0; j < m; ++j) {
        const double u = rng.uniform();
        double cum = 0.0;
        std::size_t pick = ensemble.size() - 1;
        for (std::size_t t = 0; t < ensemble.size(); ++t) {
            cum += ensemble.weights[t];
            if (u < cum) {
                pick = t;
                break;
            }
        }
        s.rows.push_back(ensemble.atoms[pick]);
    }
    return s;
}

Schedule realize_deterministic_schedule(const Ensemble& ensemble, int m) {
    ensemble.validate();
    std::size_t positive = 0;
    for (double w : ensemble.weights) positive += w > 0.0;
    if (m < static_cast<int>(positive))
        throw std::invalid_argument(
            "realize_deterministic_schedule: m below number of positive-weight atoms");

    std::vector<std::size_t> counts(ensemble.size());
    std::vector<double> fractions(ensemble.size());
    std::size_t assigned = 0;
    for (std::size_t t = 0; t < ensemble.size(); ++t) {
        const double target = ensemble.weights[t] * m;
        counts[t] = static_cast<std::size_t>(std::floor(target));
        fractions[t] = target - static_cast<double>(counts[t]);
        assigned += counts[t];
    }
    std::vector<std::size_t> order(ensemble.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fractions[a] > fractions[b]; });
    for (std::size_t r = 0; assigned < static_cast<std::size_t>(m); ++r)
        ++counts[order[r]], ++assigned;

    Schedule s;
    s.rows.reserve(m);
    while (s.rows.size() < static_cast<std::size_t>(m))
        for (std::size_t t = 0; t < ensemble.size(); ++t)
            if (counts[t] > 0) {
                --counts[t];
                s.rows.push_back(ensemble.atoms[t]);
            }
    return s;
}

} // namespace mixobs
