#pragma once

#include "mixobs/design.hpp"
#include "mixobs/detect.hpp"
#include "mixobs/model.hpp"
#include "mixobs/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mixobs {

enum class DetectorKind { Lrt, PairwiseNp };

enum class EnsembleRegime { Random, Deterministic };

/// A fixed prototype whose rows are cycled out to each budget; a
/// single-row prototype is the time-invariant measurement case.
struct FixedDesign {
    Schedule prototype;
};

/// floor(m/n) rounds of unit vectors plus seeded extras, re-drawn per
/// trial.
struct SeparateTrialDesign {};

/// Configuration-model bipartite mixing, re-realized per trial unless
/// freeze_design pins one graph per budget.
struct BipartiteTrialDesign {
    int right_degree = 6;
    bool freeze_design = false;
};

/// Rows drawn from an ensemble, either i.i.d. per row (Random) or by
/// exact apportionment (Deterministic).
struct EnsembleTrialDesign {
    Ensemble ensemble;
    EnsembleRegime regime = EnsembleRegime::Random;
};

using TrialDesign =
    std::variant<FixedDesign, SeparateTrialDesign, BipartiteTrialDesign, EnsembleTrialDesign>;

/// One error-probability experiment: budgets, trial counts, detector,
/// and the master seed every stream derives from.
struct TrialPlan {
    AnomalyModel model;
    TrialDesign design;
    std::vector<int> m_values;
    int trials = 1000;
    DetectorKind detector = DetectorKind::Lrt;
    NPConfig np;
    std::uint64_t master_seed = 0;
    int workers = 1;

    TrialPlan(AnomalyModel model_in, TrialDesign design_in)
        : model(std::move(model_in)), design(std::move(design_in)) {}

    /// Throws unless trials >= 1, workers >= 1 and m_values is
    /// nonempty, nonnegative and strictly increasing.
    void validate() const;
};

struct ErrorCurvePoint {
    int m = 0;
    int trials = 0;
    int errors = 0;
    double error_rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// 95% Wilson score interval for errors/trials; chosen over the normal
/// approximation because observed counts sit near 0.
struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

WilsonInterval wilson_interval(int errors, int trials);

/// Fresh independent realizations of all n variables for each of m
/// measurements, flattened measurement-major: entry [j*n + i] is X_i at
/// time j. Exactly n*m normal draws from rng.
std::vector<double> realization_table(const AnomalyModel& model, const Hypothesis& truth,
                                      int m, Rng& rng);

/// Y_j = <row_j, X^j> for each schedule row against a realization table.
Observations apply_schedule(const Schedule& schedule, const std::vector<double>& table);

/// Runs one seeded trial against a fixed schedule: draw the table, take
/// the measurements, detect, compare with the truth. The detector's
/// Failure counts as incorrect.
bool simulate_trial(const AnomalyModel& model, const Hypothesis& truth,
                    const Schedule& schedule, DetectorKind detector, const NPConfig& np,
                    std::uint64_t seed);

/// One trial of an error-curve cell, exposed so the seeding, the truth
/// draw and the draw accounting are auditable. Stream layout per trial:
/// seed = derive_seed(master, m, trial); the truth index is the first
/// draw; design realization uses derived sub-seeds; the table follows.
struct TrialOutcome {
    std::size_t truth_index = 0;
    bool correct = false;
    std::uint64_t normal_draws = 0;
};

TrialOutcome run_trial(const TrialPlan& plan, const std::vector<Hypothesis>& hypotheses,
                       int m, int trial);

/// The full experiment: per budget, `trials` independent seeded trials
/// with uniformly drawn truth. Reproducible bit-for-bit from the plan;
/// workers only partition the trial loop.
std::vector<ErrorCurvePoint> error_curve(const TrialPlan& plan);

/// Least-squares slope of -log(error_rate) against m over points with
/// 0 < error_rate < 1, with the standard error of the slope. Throws
/// unless at least 3 points are usable.
struct ExponentFit {
    double slope = 0.0;
    double std_error = 0.0;
};

ExponentFit empirical_exponent(const std::vector<ErrorCurvePoint>& points);

/// One labelled curve for CSV/plot output.
struct CurveSeries {
    std::string design;
    std::string detector;
    std::vector<ErrorCurvePoint> points;
};

/// CSV: m,design,detector,trials,errors,error_rate,ci_low,ci_high.
void write_error_curve_csv(std::ostream& out, const std::vector<CurveSeries>& series);

/// Self-contained gnuplot script for the same series (log-scale error
/// probability versus m).
void write_plot_script(std::ostream& out, const std::vector<CurveSeries>& series);

const char* detector_name(DetectorKind kind);

} // namespace mixobs
