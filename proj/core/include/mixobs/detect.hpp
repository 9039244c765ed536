#pragma once

#include "mixobs/measurement.hpp"
#include "mixobs/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mixobs {

/// Observed measurement values, aligned row-for-row with a schedule.
struct Observations {
    std::vector<double> values;

    std::size_t m() const { return values.size(); }
};

/// File format: one real per line.
Observations read_observations_file(const std::string& path);
void write_observations_file(const std::string& path, const Observations& obs);

/// Outcome of a detector: the index of the selected hypothesis, or
/// failure when no hypothesis wins every pairing it appears in.
struct Decision {
    std::optional<std::size_t> selected;

    bool is_failure() const { return !selected.has_value(); }

    static Decision failure() { return Decision{std::nullopt}; }
    static Decision select(std::size_t index) { return Decision{index}; }

    friend bool operator==(const Decision&, const Decision&) = default;
};

/// "SELECTED <sorted 1-based support>" or "FAILURE".
std::string format_decision(const Decision& decision,
                            const std::vector<Hypothesis>& hypotheses);

/// Per-pair log-likelihood-ratio threshold for the pairwise tournament.
/// 0 makes each pairing a maximum-likelihood comparison; ties then break
/// to the lowest hypothesis index.
struct NPConfig {
    double log_threshold = 0.0;
};

/// Sum over rows of the log-density of the observation under the output
/// law the hypothesis induces for that row. Empty schedules score 0.
/// Throws DegenerateError naming the row and hypothesis when a row's
/// output law has zero variance.
double log_likelihood(const AnomalyModel& model, const Hypothesis& h,
                      const Schedule& schedule, const Observations& obs);

/// log_likelihood of every hypothesis at once, skipping zero
/// coefficients row-wise; identical values to calling log_likelihood per
/// hypothesis.
std::vector<double> hypothesis_log_likelihoods(const AnomalyModel& model,
                                               const Schedule& schedule,
                                               const Observations& obs,
                                               const std::vector<Hypothesis>& hypotheses);

/// Maximum-likelihood selection; ties break to the lowest index, so an
/// empty schedule selects the first hypothesis.
Decision lrt(const AnomalyModel& model, const Schedule& schedule, const Observations& obs,
             const std::vector<Hypothesis>& hypotheses);

/// All-pairs Neyman-Pearson tournament: hypothesis i beats j when
/// loglik_i - loglik_j > threshold. Selects a hypothesis that wins every
/// pairing it appears in (lowest index if several), otherwise Failure —
/// exact ties at threshold 0 therefore fail rather than pick arbitrarily.
Decision pairwise_np(const AnomalyModel& model, const Schedule& schedule,
                     const Observations& obs, const std::vector<Hypothesis>& hypotheses,
                     const NPConfig& config);

/// m i.i.d. draws of an atom by weight.
Schedule realize_random_schedule(const Ensemble& ensemble, int m, std::uint64_t seed);

/// Atom t appears round(w_t * m) times via largest-remainder
/// apportionment (counts sum to m exactly, each within 1 of w_t * m),
/// interleaved round-robin.
Schedule realize_deterministic_schedule(const Ensemble& ensemble, int m);

} // namespace mixobs
