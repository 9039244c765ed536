// mixobs command-line tool: error exponents, measurement designs,
// detection from files, and seeded Monte Carlo error-probability
// experiments, including one-command reruns of the two preset
// experiments (fig1/fig2).

#include "mixobs/chernoff.hpp"
#include "mixobs/design.hpp"
#include "mixobs/detect.hpp"
#include "mixobs/errors.hpp"
#include "mixobs/model_config.hpp"
#include "mixobs/montecarlo.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mixobs;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    int workers = 1;
    int trials = 1000;
};

std::uint64_t require_seed(const GlobalOptions& opts) {
    if (!opts.seed)
        throw ConfigError("--seed is required for any command that draws randomness");
    return *opts.seed;
}

AnomalyModel require_model(const GlobalOptions& opts) {
    if (opts.config_path.empty()) throw ConfigError("--config <model file> is required");
    return load_model_config(opts.config_path);
}

fs::path ensure_out_dir(const GlobalOptions& opts) {
    fs::path dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir.string());
    return dir;
}

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> values;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw ConfigError("bad coefficient '" + token + "' in vector '" + text + "'");
        }
    }
    if (values.empty()) throw ConfigError("empty vector literal");
    return values;
}

std::vector<int> parse_budgets(const std::string& text) {
    std::vector<int> budgets;
    if (text.find(':') != std::string::npos) {
        int start = 0, stop = 0, step = 0;
        if (std::sscanf(text.c_str(), "%d:%d:%d", &start, &stop, &step) != 3 || step <= 0)
            throw ConfigError("bad budget range '" + text + "' (expected start:stop:step)");
        for (int m = start; m <= stop; m += step) budgets.push_back(m);
    } else {
        for (double v : parse_vector(text)) {
            if (v != static_cast<int>(v)) throw ConfigError("budgets must be integers");
            budgets.push_back(static_cast<int>(v));
        }
    }
    return budgets;
}

struct DesignOptions {
    std::string kind;     // separate | bipartite | hamming74 | single | permutation | schedule
    int degree = 6;
    std::string vector_literal;
    std::string schedule_file;
    std::string regime = "deterministic"; // for ensemble designs in simulate
    std::string pair = "1,2";             // hypothesis pair for optimal designs
};

MeasurementVector vector_from_options(const DesignOptions& d, int n) {
    if (d.vector_literal.empty())
        throw ConfigError("--vector <c1,c2,...> is required for this design");
    MeasurementVector v{parse_vector(d.vector_literal)};
    if (static_cast<int>(v.size()) != n)
        throw ConfigError("vector length " + std::to_string(v.size()) +
                          " does not match model n = " + std::to_string(n));
    v.validate();
    return v;
}

std::pair<int, int> parse_hypothesis_pair(const std::string& text, std::size_t count) {
    const auto pair = parse_vector(text);
    if (pair.size() != 2) throw ConfigError("--pair wants 'i,j'");
    const int a = static_cast<int>(pair[0]) - 1, b = static_cast<int>(pair[1]) - 1;
    if (a < 0 || b < 0 || a >= static_cast<int>(count) || b >= static_cast<int>(count) || a == b)
        throw ConfigError("--pair indices out of range");
    return {a, b};
}

void print_vector(std::ostream& out, const char* label, const std::vector<double>& values) {
    out << label << " = (";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ", ";
        out << format_double(values[i]);
    }
    out << ")\n";
}

// ---------------------------------------------------------------------------
// exponent

int cmd_exponent(const GlobalOptions& opts, const DesignOptions& design, int budget) {
    const AnomalyModel model = require_model(opts);
    ExponentReport report = [&] {
        if (design.kind == "single")
            return min_pairwise_exponent(vector_from_options(design, model.n), model);
        if (design.kind == "separate") {
            std::vector<MeasurementVector> atoms;
            for (int i = 0; i < model.n; ++i) atoms.push_back(unit_vector(model.n, i));
            return min_pairwise_exponent(Ensemble::uniform(std::move(atoms)), model);
        }
        if (design.kind == "hamming74") {
            if (model.n != 7) throw ConfigError("hamming74 design requires n = 7");
            return min_pairwise_exponent(hamming74_design(), model);
        }
        if (design.kind == "permutation")
            return min_pairwise_exponent(
                permutation_ensemble(vector_from_options(design, model.n)), model);
        if (design.kind == "schedule") {
            if (design.schedule_file.empty())
                throw ConfigError("--schedule-file is required for --design schedule");
            return min_pairwise_exponent(read_schedule_file(design.schedule_file), model);
        }
        if (design.kind == "bipartite") {
            if (budget <= 0) throw ConfigError("bipartite exponent needs --m <budget>");
            BipartiteDesignSpec spec;
            spec.n = model.n;
            spec.m = budget;
            spec.right_degree = design.degree;
            spec.seed = require_seed(opts);
            return min_pairwise_exponent(bipartite_design(spec).schedule, model);
        }
        throw ConfigError("unknown design '" + design.kind + "' for exponent");
    }();

    const fs::path out = ensure_out_dir(opts) / "exponent.csv";
    std::ofstream csv(out);
    if (!csv) throw ConfigError("cannot write " + out.string());
    report.write_csv(csv);

    std::cout << report.summary() << '\n';
    if (!(report.min_exponent > 0.0))
        throw DegenerateError("indistinguishable hypotheses: minimum exponent is 0");
    for (double eps : {0.1, 0.01})
        std::cout << "samples(error<=" << format_double(eps)
                  << ") ~ " << sample_complexity(report.min_exponent, model.n, model.k, eps)
                  << '\n';
    std::cout << "wrote " << out.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// design

int cmd_design(const GlobalOptions& opts, const DesignOptions& design, int budget) {
    const fs::path dir = ensure_out_dir(opts);
    const fs::path out = dir / "schedule.txt";
    Schedule schedule;

    if (design.kind == "hamming74") {
        schedule = hamming74_design();
    } else if (design.kind == "separate") {
        const AnomalyModel model = require_model(opts);
        if (budget <= 0) throw ConfigError("separate design needs --m <budget>");
        schedule = separate_design(model.n, budget,
                                   budget % model.n == 0 ? 0 : require_seed(opts));
    } else if (design.kind == "bipartite") {
        const AnomalyModel model = require_model(opts);
        if (budget <= 0) throw ConfigError("bipartite design needs --m <budget>");
        BipartiteDesignSpec spec;
        spec.n = model.n;
        spec.m = budget;
        spec.right_degree = design.degree;
        spec.seed = require_seed(opts);
        const BipartiteDesign bd = bipartite_design(spec);
        schedule = bd.schedule;
        std::cout << "bipartite n=" << spec.n << " m=" << spec.m
                  << " right_degree=" << spec.right_degree
                  << " left_degree=" << (static_cast<long long>(spec.right_degree) * spec.m / spec.n)
                  << " collapsed_multiedges=" << bd.collapsed_multiedges << '\n';
    } else if (design.kind == "mean-shift") {
        const AnomalyModel model = require_model(opts);
        const auto hypotheses = enumerate_hypotheses(model.n, model.k);
        const auto [i, j] = parse_hypothesis_pair(design.pair, hypotheses.size());
        const GaussianVec law_i = hypothesis_law(model, hypotheses[i]);
        const GaussianVec law_j = hypothesis_law(model, hypotheses[j]);
        if (model.common.variance != model.anomalous.variance)
            throw ConfigError("mean-shift design requires equal variances");
        const MeanShiftDesign ms = optimal_mean_shift(law_i.mean, law_j.mean, law_i.covariance);
        print_vector(std::cout, "a", ms.a.coefficients);
        std::cout << "exponent = " << format_double(ms.exponent) << " nats\n";
        schedule.rows.push_back(ms.a);
    } else if (design.kind == "variance") {
        const AnomalyModel model = require_model(opts);
        if (model.common.mean != model.anomalous.mean)
            throw ConfigError("variance design requires equal means");
        const auto hypotheses = enumerate_hypotheses(model.n, model.k);
        const auto [i, j] = parse_hypothesis_pair(design.pair, hypotheses.size());
        const GaussianVec law_i = hypothesis_law(model, hypotheses[i]);
        const GaussianVec law_j = hypothesis_law(model, hypotheses[j]);
        const VarianceDesign vd =
            optimal_variance_discrimination(law_i.covariance, law_j.covariance);
        print_vector(std::cout, "a", vd.a.coefficients);
        std::cout << "B = " << format_double(vd.ratio)
                  << "\nlambda_star = " << format_double(vd.lambda_star)
                  << "\nexponent = " << format_double(vd.exponent) << " nats\n";
        schedule.rows.push_back(vd.a);
    } else if (design.kind == "base-vector") {
        const AnomalyModel model = require_model(opts);
        const BaseVectorResult best = optimize_base_vector(model, require_seed(opts));
        print_vector(std::cout, "a", best.a.coefficients);
        std::cout << "pairwise chernoff sum = " << format_double(best.objective) << " nats\n";
        schedule.rows.push_back(best.a);
    } else if (design.kind == "permutation") {
        const AnomalyModel model = require_model(opts);
        const Ensemble ens = permutation_ensemble(vector_from_options(design, model.n));
        if (budget <= 0) throw ConfigError("permutation design needs --m <budget>");
        schedule = realize_deterministic_schedule(ens, budget);
        std::cout << "permutation ensemble atoms = " << ens.size() << '\n';
    } else {
        throw ConfigError("unknown design '" + design.kind + "'");
    }

    write_schedule_file(out.string(), schedule);
    std::cout << "wrote " << out.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// detect

int cmd_detect(const GlobalOptions& opts, const DesignOptions& design,
               const std::string& observations_file, const std::string& detector,
               double threshold) {
    const AnomalyModel model = require_model(opts);
    if (design.schedule_file.empty()) throw ConfigError("--schedule-file is required");
    if (observations_file.empty()) throw ConfigError("--observations is required");
    const Schedule schedule = read_schedule_file(design.schedule_file);
    const Observations obs = read_observations_file(observations_file);
    const auto hypotheses = enumerate_hypotheses(model.n, model.k);
    Decision decision;
    if (detector == "lrt") {
        decision = lrt(model, schedule, obs, hypotheses);
    } else if (detector == "np") {
        decision = pairwise_np(model, schedule, obs, hypotheses, NPConfig{threshold});
    } else {
        throw ConfigError("unknown detector '" + detector + "' (lrt or np)");
    }
    std::cout << format_decision(decision, hypotheses) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// simulate / reproduce

TrialDesign trial_design_from_options(const DesignOptions& design, const AnomalyModel& model) {
    if (design.kind == "separate") return SeparateTrialDesign{};
    if (design.kind == "bipartite") return BipartiteTrialDesign{design.degree, false};
    if (design.kind == "single")
        return FixedDesign{Schedule{{vector_from_options(design, model.n)}}};
    if (design.kind == "schedule") {
        if (design.schedule_file.empty())
            throw ConfigError("--schedule-file is required for --design schedule");
        return FixedDesign{read_schedule_file(design.schedule_file)};
    }
    if (design.kind == "hamming74") {
        if (model.n != 7) throw ConfigError("hamming74 design requires n = 7");
        return FixedDesign{hamming74_design()};
    }
    if (design.kind == "permutation") {
        const Ensemble ens = permutation_ensemble(vector_from_options(design, model.n));
        if (design.regime == "random")
            return EnsembleTrialDesign{ens, EnsembleRegime::Random};
        if (design.regime == "deterministic")
            return EnsembleTrialDesign{ens, EnsembleRegime::Deterministic};
        throw ConfigError("unknown regime '" + design.regime + "' (random or deterministic)");
    }
    throw ConfigError("unknown design '" + design.kind + "' for simulation");
}

void run_curves(const GlobalOptions& opts, const AnomalyModel& model,
                const std::vector<std::pair<std::string, TrialDesign>>& designs,
                const std::vector<int>& budgets, DetectorKind detector, double threshold,
                const std::string& stem) {
    const std::uint64_t seed = require_seed(opts);
    std::vector<CurveSeries> series;
    for (const auto& [label, design] : designs) {
        TrialPlan plan(model, design);
        plan.m_values = budgets;
        plan.trials = opts.trials;
        plan.detector = detector;
        plan.np.log_threshold = threshold;
        plan.master_seed = seed;
        plan.workers = opts.workers;
        CurveSeries s;
        s.design = label;
        s.detector = detector_name(detector);
        s.points = error_curve(plan);
        for (const auto& p : s.points)
            std::cout << stem << " " << label << " m=" << p.m << " errors=" << p.errors << "/"
                      << p.trials << " rate=" << format_double(p.error_rate) << " ci=["
                      << format_double(p.ci_low) << "," << format_double(p.ci_high) << "]\n";
        series.push_back(std::move(s));
    }
    const fs::path dir = ensure_out_dir(opts);
    const fs::path csv_path = dir / (stem + ".csv");
    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError("cannot write " + csv_path.string());
    write_error_curve_csv(csv, series);
    const fs::path plot_path = dir / (stem + ".gp");
    std::ofstream plot(plot_path);
    if (!plot) throw ConfigError("cannot write " + plot_path.string());
    write_plot_script(plot, series);
    std::cout << "wrote " << csv_path.string() << " and " << plot_path.string() << '\n';
}

int cmd_simulate(const GlobalOptions& opts, const DesignOptions& design,
                 const std::string& budgets_text, const std::string& detector,
                 double threshold) {
    const AnomalyModel model = require_model(opts);
    if (budgets_text.empty()) throw ConfigError("--m-values is required");
    const std::vector<int> budgets = parse_budgets(budgets_text);
    const DetectorKind kind = [&] {
        if (detector == "lrt") return DetectorKind::Lrt;
        if (detector == "np") return DetectorKind::PairwiseNp;
        throw ConfigError("unknown detector '" + detector + "' (lrt or np)");
    }();
    run_curves(opts, model, {{design.kind, trial_design_from_options(design, model)}}, budgets,
               kind, threshold, "curve");
    return 0;
}

int cmd_reproduce(const GlobalOptions& opts, const std::string& figure) {
    // The two experiment presets: sparse bipartite mixing with 6 ones per
    // row versus separate observation, likelihood ratio test, 1000 trials
    // per budget.
    const std::vector<std::pair<std::string, TrialDesign>> designs = {
        {"bipartite_d6", BipartiteTrialDesign{6, false}},
        {"separate", SeparateTrialDesign{}},
    };
    if (figure == "fig1") {
        // n=100: one variable N(0,100) among N(0,1). Budgets are the
        // multiples of 50 in [50,300]; 6m must split evenly over 100
        // variable nodes.
        const AnomalyModel model(100, 1, normal(0, 1), normal(0, 100));
        run_curves(opts, model, designs, {50, 100, 150, 200, 250, 300}, DetectorKind::Lrt, 0.0,
                   "fig1");
        return 0;
    }
    if (figure == "fig2") {
        // n=102: mean-shift pair, common N(8,1), anomalous N(0,1).
        // Budgets are multiples of 17 so each variable joins exactly
        // 6m/102 measurements; includes the m=68 spotlight.
        const AnomalyModel model(102, 1, normal(8, 1), normal(0, 1));
        run_curves(opts, model, designs, {34, 51, 68, 85, 102, 136, 170, 204, 238, 272, 306},
                   DetectorKind::Lrt, 0.0, "fig2");
        return 0;
    }
    throw ConfigError("unknown figure '" + figure + "' (fig1 or fig2)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identifying anomalous random variables from mixed linear observations"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "Model config file (key=value)");
    app.add_option("--seed", opts.seed, "Master seed (required for randomized commands)");
    app.add_option("--out", opts.out_dir, "Output directory (default '.')");
    app.add_option("--workers", opts.workers, "Worker threads for trial loops");
    app.add_option("--trials", opts.trials, "Trials per budget (default 1000)");

    DesignOptions design;
    int budget = 0;
    std::string budgets_text;
    std::string detector = "lrt";
    double threshold = 0.0;
    std::string observations_file;
    std::string figure;

    CLI::App* exponent = app.add_subcommand("exponent", "Pairwise error exponents and minimum");
    exponent->add_option("--design", design.kind,
                         "single|separate|hamming74|permutation|schedule|bipartite")
        ->required();
    exponent->add_option("--vector", design.vector_literal, "Coefficients c1,c2,...");
    exponent->add_option("--schedule-file", design.schedule_file, "Schedule file to analyze");
    exponent->add_option("--degree", design.degree, "Ones per bipartite row (default 6)");
    exponent->add_option("--m", budget, "Rows for bipartite realization");

    CLI::App* design_cmd = app.add_subcommand("design", "Emit a measurement design");
    design_cmd->add_option("--kind", design.kind,
                           "separate|bipartite|hamming74|mean-shift|variance|base-vector|permutation")
        ->required();
    design_cmd->add_option("--vector", design.vector_literal, "Base vector for permutation");
    design_cmd->add_option("--degree", design.degree, "Ones per bipartite row (default 6)");
    design_cmd->add_option("--m", budget, "Number of rows");
    design_cmd->add_option("--pair", design.pair, "Hypothesis pair i,j for optimal designs");

    CLI::App* detect_cmd = app.add_subcommand("detect", "Run a detector on recorded data");
    detect_cmd->add_option("--schedule-file", design.schedule_file, "Schedule file")->required();
    detect_cmd->add_option("--observations", observations_file, "One observation per line")
        ->required();
    detect_cmd->add_option("--detector", detector, "lrt|np (default lrt)");
    detect_cmd->add_option("--threshold", threshold, "Pairwise log-likelihood threshold");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo error-probability curve");
    simulate->add_option("--design", design.kind,
                         "separate|bipartite|single|schedule|hamming74|permutation")
        ->required();
    simulate->add_option("--m-values", budgets_text, "Budgets: 50,100,150 or start:stop:step")
        ->required();
    simulate->add_option("--detector", detector, "lrt|np (default lrt)");
    simulate->add_option("--threshold", threshold, "Pairwise log-likelihood threshold");
    simulate->add_option("--vector", design.vector_literal, "Coefficients for --design single");
    simulate->add_option("--schedule-file", design.schedule_file, "Prototype schedule file");
    simulate->add_option("--degree", design.degree, "Ones per bipartite row (default 6)");
    simulate->add_option("--regime", design.regime,
                         "random|deterministic rows for ensemble designs");

    CLI::App* reproduce = app.add_subcommand("reproduce", "Re-run a preset experiment");
    reproduce->add_option("figure", figure, "fig1 or fig2")->required();

    try {
        app.parse(argc, argv);
        if (exponent->parsed()) return cmd_exponent(opts, design, budget);
        if (design_cmd->parsed()) return cmd_design(opts, design, budget);
        if (detect_cmd->parsed())
            return cmd_detect(opts, design, observations_file, detector, threshold);
        if (simulate->parsed())
            return cmd_simulate(opts, design, budgets_text, detector, threshold);
        if (reproduce->parsed()) return cmd_reproduce(opts, figure);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DegenerateError& e) {
        std::cerr << "model degeneracy: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
