#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfee/baselines.hpp"
#include "mfee/bench.hpp"
#include "mfee/estimator.hpp"
#include "mfee/info.hpp"
#include "mfee/io.hpp"
#include "mfee/thermo.hpp"

namespace {

using nlohmann::json;

constexpr int kExitBadInput = 2;
constexpr int kExitEstimator = 3;
constexpr int kExitResidual = 4;

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;  // NaN / infinity markers have no JSON literal
}

json result_to_json(const mfee::MfeeResult& r) {
    json trace = json::array();
    for (const auto& step : r.trace)
        trace.push_back({{"i", step.index},
                         {"D", step.divergence},
                         {"beta0", finite_or_null(step.beta0)},
                         {"beta", step.beta}});
    return {{"estimate", r.estimate.probs()},
            {"beta", r.beta},
            {"beta0", finite_or_null(r.beta0)},
            {"free_energy", finite_or_null(r.free_energy)},
            {"effective_information", r.effective_information},
            {"trace", std::move(trace)}};
}

void emit(const json& report, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw mfee::IoError("cannot open output: " + output_path);
    out << report.dump(2) << "\n";
}

struct EstimateOptions {
    std::string input;
    std::string alphabet;
    std::string method = "mfee";
    std::string output;
    double smoothing = 1e-4;
    std::optional<double> prior_alpha;
    bool raw_geomean = false;
    bool allow_unavailable = false;
};

json estimate_one(const std::string& method, const mfee::SampleSequence& data,
                  const EstimateOptions& opt) {
    const mfee::MfeeConfig config{opt.smoothing, !opt.raw_geomean};
    json report{{"method", method}};
    if (method == "ml") {
        report["estimate"] = mfee::ml_estimate(data.counts(), opt.smoothing).probs();
    } else if (method == "me") {
        if (data.size() == 0)
            throw mfee::EstimationError("maximum entropy needs a nonempty sample mean");
        double mean = 0.0;
        for (int s : data.states) mean += s;
        mean /= static_cast<double>(data.size());
        report["estimate"] =
            mfee::max_entropy_estimate(mean, static_cast<std::size_t>(data.alphabet_size))
                .probs();
        report["sample_mean"] = mean;
    } else if (method == "map") {
        const auto outcome =
            mfee::map_jeffreys(data.counts(), opt.prior_alpha.value_or(0.5));
        report["available"] = outcome.available();
        if (outcome.available()) {
            report["estimate"] = outcome.dist->probs();
        } else {
            report["missing_states"] = outcome.missing_states;
            if (!opt.allow_unavailable)
                throw mfee::EstimationError(
                    "MAP estimate unavailable: zero counts at some states "
                    "(use --allow-unavailable to emit the report anyway)");
        }
    } else if (method == "mfee") {
        const mfee::MfeeResult r =
            opt.prior_alpha
                ? mfee::bayes_anchored_estimate(data, *opt.prior_alpha,
                                                mfee::BayesAnchor::PosteriorMean, config)
                : mfee::mfee_estimate(data, config);
        report.update(result_to_json(r));
    } else {
        throw CLI::ValidationError("--method", "unknown method: " + method);
    }
    return report;
}

int cmd_estimate(const EstimateOptions& opt) {
    mfee::io::LabelMap alphabet;
    const bool fixed = !opt.alphabet.empty();
    if (fixed) alphabet = mfee::io::read_alphabet(opt.alphabet);
    const mfee::SampleSequence data = mfee::io::read_sample_file(opt.input, alphabet, fixed);
    if (data.alphabet_size < 2)
        throw mfee::IoError("alphabet has fewer than two states; supply --alphabet");

    json report{{"alphabet", alphabet.labels()}};
    if (opt.method == "all") {
        json reports = json::array();
        for (const char* m : {"ml", "me", "map", "mfee"})
            reports.push_back(estimate_one(m, data, opt));
        report["reports"] = std::move(reports);
    } else {
        report.update(estimate_one(opt.method, data, opt));
    }
    emit(report, opt.output);
    return 0;
}

struct ConditionOptions {
    std::string input;
    std::string alphabet;
    std::string mode = "per-context";
    std::string output;
    double smoothing = 1e-4;
    bool raw_geomean = false;
};

int cmd_condition(const ConditionOptions& opt) {
    mfee::io::LabelMap alphabet;
    const bool fixed = !opt.alphabet.empty();
    if (fixed) alphabet = mfee::io::read_alphabet(opt.alphabet);
    const auto data = mfee::io::read_pairs_csv(opt.input, alphabet, fixed);
    if (alphabet.size() < 2)
        throw mfee::IoError("alphabet has fewer than two states; supply --alphabet");

    const auto mode = opt.mode == "global" ? mfee::ConditionalMode::Global
                                           : mfee::ConditionalMode::PerContext;
    const mfee::MfeeConfig config{opt.smoothing, !opt.raw_geomean};
    const auto table = mfee::mfee_conditional(
        data.pairs, static_cast<int>(data.contexts.size()),
        static_cast<int>(alphabet.size()), mode, config);

    json rows = json::array();
    for (std::size_t y = 0; y < table.rows.size(); ++y)
        rows.push_back({{"context", data.contexts.labels()[y]},
                        {"estimate", table.rows[y].dist.probs()},
                        {"beta", table.rows[y].beta},
                        {"n", table.rows[y].sample_count}});
    emit({{"alphabet", alphabet.labels()},
          {"contexts", data.contexts.labels()},
          {"mode", opt.mode},
          {"rows", std::move(rows)}},
         opt.output);
    return 0;
}

struct BenchmarkOptions {
    std::string config;
    std::string csv;
    std::string svg;
    int jobs = 1;
};

int cmd_benchmark(const BenchmarkOptions& opt) {
    const auto config = opt.config.empty()
                            ? mfee::bench::BenchmarkConfig::defaults()
                            : mfee::bench::BenchmarkConfig::from_json_file(opt.config);
    const auto records = mfee::bench::run_benchmark(config, opt.jobs);
    const auto rows = mfee::bench::aggregate(records);
    mfee::bench::write_csv(rows, opt.csv);
    if (!opt.svg.empty()) mfee::bench::write_svg_chart(rows, opt.svg);

    for (const auto& row : rows) {
        std::cout << mfee::bench::method_name(row.method) << " dist=" << row.dist_id
                  << " N=" << row.sample_size;
        if (row.mean_kl)
            std::cout << " mean_kl=" << *row.mean_kl << " stderr=" << row.stderr_kl;
        else
            std::cout << " mean_kl=unavailable";
        std::cout << " n=" << row.n_available << "\n";
    }
    return 0;
}

struct DiagnoseOptions {
    std::string input;
    std::string alphabet;
    std::string output;
    double smoothing = 1e-4;
    std::optional<double> beta;
};

int cmd_diagnose(const DiagnoseOptions& opt) {
    mfee::io::LabelMap alphabet;
    const bool fixed = !opt.alphabet.empty();
    if (fixed) alphabet = mfee::io::read_alphabet(opt.alphabet);
    const mfee::SampleSequence data = mfee::io::read_sample_file(opt.input, alphabet, fixed);
    if (data.alphabet_size < 2)
        throw mfee::IoError("alphabet has fewer than two states; supply --alphabet");

    double beta;
    if (opt.beta) {
        beta = *opt.beta;
        if (beta <= 0.0 || beta > 1.0)
            throw mfee::IoError("--beta must be in (0, 1]");
    } else {
        beta = mfee::mfee_estimate(data, {.smoothing = opt.smoothing}).beta;
        if (beta == 0.0) throw mfee::IoError("empty sample; pass --beta explicitly");
    }

    const auto ml = mfee::ml_estimate(data.counts(), opt.smoothing);
    const auto report = mfee::identity_report(ml, beta);

    json residuals{{"entropy_identity", report.residuals.entropy_identity},
                   {"energy_from_logZ", report.residuals.energy_from_logZ},
                   {"gibbs_helmholtz", report.residuals.gibbs_helmholtz},
                   {"entropy_from_F", report.residuals.entropy_from_F},
                   {"fluctuation_fd", report.residuals.fluctuation_fd}};
    residuals["beta_from_dH_dU"] = report.residuals.beta_from_dH_dU
                                       ? json(*report.residuals.beta_from_dH_dU)
                                       : json(nullptr);
    emit({{"alphabet", alphabet.labels()},
          {"beta", report.beta},
          {"Z", report.Z},
          {"logZ", report.logZ},
          {"U", report.U},
          {"H", report.H},
          {"F", report.F},
          {"fluctuation", report.fluctuation},
          {"fisher", report.fisher},
          {"heat_capacity", report.heat_capacity},
          {"residuals", std::move(residuals)},
          {"within_tolerance", report.within_tolerance()}},
         opt.output);
    return report.within_tolerance() ? 0 : kExitResidual;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum free energy estimation of discrete distributions"};
    app.require_subcommand(1);

    EstimateOptions est;
    auto* estimate = app.add_subcommand("estimate", "Estimate a distribution from samples");
    estimate->add_option("--input", est.input, "Sample file, one token per line")->required();
    estimate->add_option("--alphabet", est.alphabet, "JSON array of state labels");
    estimate->add_option("--method", est.method, "ml|me|map|mfee|all")
        ->check(CLI::IsMember({"ml", "me", "map", "mfee", "all"}));
    estimate->add_option("--smoothing", est.smoothing, "Additive count smoothing");
    estimate->add_option("--prior-alpha", [&est](const CLI::results_t& r) {
        est.prior_alpha = std::stod(r[0]);
        return true;
    }, "Dirichlet prior for Bayesian anchoring / MAP");
    estimate->add_flag("--raw-geomean", est.raw_geomean,
                       "Use the sub-normalized geometric mean");
    estimate->add_flag("--allow-unavailable", est.allow_unavailable,
                       "Report MAP unavailability instead of failing");
    estimate->add_option("--output", est.output, "Write JSON report here");

    ConditionOptions cond;
    auto* condition = app.add_subcommand("condition", "Conditional estimation from pairs");
    condition->add_option("--input", cond.input, "CSV with context,state rows")->required();
    condition->add_option("--alphabet", cond.alphabet, "JSON array of state labels");
    condition->add_option("--mode", cond.mode, "per-context|global")
        ->check(CLI::IsMember({"per-context", "global"}));
    condition->add_option("--smoothing", cond.smoothing, "Additive count smoothing");
    condition->add_flag("--raw-geomean", cond.raw_geomean,
                        "Use the sub-normalized geometric mean");
    condition->add_option("--output", cond.output, "Write JSON report here");

    BenchmarkOptions bench;
    auto* benchmark = app.add_subcommand("benchmark", "Run the robustness study");
    benchmark->add_option("--config", bench.config, "JSON benchmark config");
    benchmark->add_option("--csv", bench.csv, "Aggregated CSV output path")->required();
    benchmark->add_option("--svg", bench.svg, "SVG chart output path");
    benchmark->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);

    DiagnoseOptions diag;
    auto* diagnose = app.add_subcommand("diagnose", "Thermodynamic identity report");
    diagnose->add_option("--input", diag.input, "Sample file, one token per line")->required();
    diagnose->add_option("--alphabet", diag.alphabet, "JSON array of state labels");
    diagnose->add_option("--beta", [&diag](const CLI::results_t& r) {
        diag.beta = std::stod(r[0]);
        return true;
    }, "Temperature to diagnose at (default: from the recursion)");
    diagnose->add_option("--smoothing", diag.smoothing, "Additive count smoothing");
    diagnose->add_option("--output", diag.output, "Write JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*estimate) return cmd_estimate(est);
        if (*condition) return cmd_condition(cond);
        if (*benchmark) return cmd_benchmark(bench);
        if (*diagnose) return cmd_diagnose(diag);
    } catch (const mfee::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const mfee::EstimationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimator;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return 0;
}
