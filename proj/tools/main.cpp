#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpmc/divergence.hpp"
#include "cpmc/errors.hpp"
#include "execute.hpp"
#include "ingest.hpp"
#include "run_config.hpp"

namespace {

// Exit codes: 0 ok, 2 configuration, 3 data, 4 runtime.
constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;
constexpr int kRuntimeExit = 4;

int run_command(const cpmc::cli::RunConfig& config) {
    cpmc::cli::execute(config);
    return 0;
}

int divergence_command(const std::string& path_p, const std::string& path_q, double delta) {
    // Histogram files as written by `run`: k <tab> probability.
    auto load = [](const std::string& path) {
        const auto rows = cpmc::cli::ingest(path, "probability");
        return std::vector<double>(rows.begin(), rows.end());
    };
    auto p = load(path_p);
    auto q = load(path_q);
    const std::size_t len = std::max(p.size(), q.size());
    p.resize(len, 0.0);
    q.resize(len, 0.0);
    std::cout << "D(P||Q)\t" << cpmc::divergence(p, q, delta) << '\n';
    std::cout << "D(Q||P)\t" << cpmc::divergence(q, p, delta) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cpmc: Bayesian multiple-changepoint detection\n"
                 "Adaptive MCMC over the collapsed changepoint posterior, an exact\n"
                 "filtering-recursions engine, and divergence diagnostics."};
    app.require_subcommand(1);

    cpmc::cli::RunConfig config;
    std::string engine_name = "adaptive";
    std::string compare_name;
    std::string model_name = "gaussian-mean";
    std::string gap_name = "geometric";
    std::string manifest_path;
    bool burn_in_set = false;

    auto* run = app.add_subcommand("run", "run an engine on a series and write artifacts");
    run->add_option("-i,--input", config.input_path, "input series file (one column or delimited)");
    run->add_option("-c,--column", config.column, "column index or header name (default: first)");
    run->add_option("--manifest", manifest_path,
                    "load the full configuration from a previous run's manifest.json");
    run->add_option("-e,--engine", engine_name, "adaptive | non-adaptive | recursions");
    run->add_option("--compare-engine", compare_name,
                    "also run this engine and emit a divergence report");

    run->add_option("-m,--model", model_name,
                    "poisson-gamma | gaussian-mean | gaussian-precision");
    run->add_option("--alpha", config.alpha, "Poisson-Gamma shape");
    run->add_option("--beta", config.beta, "Poisson-Gamma rate");
    run->add_option("--prior-mean", config.prior_mean, "Gaussian-mean prior mean m");
    run->add_option("--sigma2", config.sigma2, "Gaussian-mean observation variance");
    run->add_option("--tau2", config.tau2, "Gaussian-mean prior variance factor");
    run->add_option("--mu", config.mu, "Gaussian-precision fixed mean");
    run->add_option("--alpha0", config.alpha0, "Gaussian-precision Gamma shape");
    run->add_option("--beta0", config.beta0, "Gaussian-precision Gamma rate");

    run->add_option("--prior", gap_name, "gap prior: geometric | negative-binomial");
    run->add_option("-p,--prior-p", config.p, "gap prior success probability");
    run->add_option("--prior-k", config.nb_k, "negative binomial k");

    run->add_option("-I,--iterations", config.sampler.iterations, "sampler iterations");
    run->add_option("-b,--burn-in", config.sampler.burn_in,
                    "burn-in iterations (default: iterations/2)")
        ->trigger_on_parse()
        ->each([&burn_in_set](const std::string&) { burn_in_set = true; });
    run->add_option("--thin", config.sampler.thin,
                    "thinning stride (default: keep at most 1e6 samples)");
    run->add_option("-s,--seed", config.sampler.seed, "RNG seed");
    run->add_option("--p-add", config.sampler.p_add, "probability of proposing an add move");
    run->add_option("--alpha-target", config.sampler.alpha_target,
                    "target acceptance rate for adaptation");
    run->add_option("--adapt-h", config.sampler.h, "initial adaptation intensity h");
    run->add_flag("--no-adaptation", [&config](std::int64_t) {
        config.sampler.adaptation_enabled = false;
    }, "freeze the selection weights (uniform proposals)");
    run->add_flag("--adjust", config.sampler.adjust_enabled,
                  "perform an adjust move after every add/delete attempt");
    run->add_flag("--thresholding", config.sampler.thresholding_enabled,
                  "split non-changepoints into alias-sampled active and flat inactive groups");
    run->add_flag("--dual-adaptation", config.sampler.dual_adaptation_enabled,
                  "update both weight vectors from each accepted move");
    run->add_option("--dual-weight", config.sampler.dual_weight, "dual adaptation weight w");
    run->add_option("--a-cutoff", config.sampler.a_cutoff, "thresholding activation cutoff");
    run->add_option("--a-inactive", config.sampler.a_inactive, "flat inactive-group weight");
    run->add_option("--log-floor", config.sampler.log_floor, "lower clamp on log weights");
    run->add_option("--log-ceil", config.sampler.log_ceil, "upper clamp on log weights");
    run->add_option("--time-budget", config.sampler.time_budget_seconds,
                    "stop after this many wall-clock seconds instead of a fixed count");
    run->add_option("--init-changepoints", config.init_changepoints,
                    "comma separated initial changepoint positions")
        ->delimiter(',');
    run->add_option("--init-random-k", config.init_random_k,
                    "start from this many uniformly scattered changepoints");
    run->add_option("--chains", config.chains,
                    "independent chains run concurrently and merged");
    run->add_option("--dump-samples", config.dump_samples_path,
                    "write retained changepoint configurations to this file");

    run->add_option("--truncation", config.truncation,
                    "recursions truncation threshold (0 = exact)");
    run->add_option("--recursion-samples", config.recursion_samples,
                    "number of perfect-simulation draws");
    run->add_option("--recursions-max-n", config.recursions_max_n,
                    "refuse the recursions engine above this n");
    run->add_flag("--force-recursions", config.force_recursions,
                  "run the recursions engine past the n guard");

    run->add_option("-o,--output-dir", config.output_dir,
                    "artifact directory (default: $CPMC_OUTPUT_DIR or .)");
    run->add_option("--delta", config.delta, "divergence smoothing parameter");
    run->add_flag("--emit-trace", config.emit_trace, "also write the MAP trace");

    std::string div_p, div_q;
    double div_delta = 1e-12;
    auto* div = app.add_subcommand("divergence",
                                   "divergence between two count-histogram files");
    div->add_option("p", div_p, "first histogram (count_hist.tsv)")->required();
    div->add_option("q", div_q, "second histogram")->required();
    div->add_option("--delta", div_delta, "smoothing parameter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigExit;
    }

    try {
        if (div->parsed()) return divergence_command(div_p, div_q, div_delta);

        if (!manifest_path.empty()) {
            cpmc::cli::RunConfig loaded = cpmc::cli::config_from_manifest(manifest_path);
            if (!config.output_dir.empty()) loaded.output_dir = config.output_dir;
            return run_command(loaded);
        }
        if (config.input_path.empty())
            throw cpmc::ConfigError("an input file is required (or --manifest)");
        config.engine = cpmc::cli::engine_from_string(engine_name);
        if (!compare_name.empty()) {
            config.compare = true;
            config.compare_engine = cpmc::cli::engine_from_string(compare_name);
        }
        config.model = [&] {
            if (model_name == "poisson-gamma") return cpmc::ModelKind::PoissonGamma;
            if (model_name == "gaussian-mean") return cpmc::ModelKind::GaussianMean;
            if (model_name == "gaussian-precision")
                return cpmc::ModelKind::GaussianPrecision;
            throw cpmc::ConfigError("unknown model '" + model_name + "'");
        }();
        config.gap = [&] {
            if (gap_name == "geometric") return cpmc::GapKind::Geometric;
            if (gap_name == "negative-binomial") return cpmc::GapKind::NegativeBinomial;
            throw cpmc::ConfigError("unknown gap prior '" + gap_name + "'");
        }();
        if (!burn_in_set && config.sampler.time_budget_seconds <= 0.0)
            config.sampler.burn_in = config.sampler.iterations / 2;
        return run_command(config);
    } catch (const cpmc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigExit;
    } catch (const cpmc::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeExit;
    }
}
