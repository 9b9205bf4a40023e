#include "run_config.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cpmc/errors.hpp"

namespace cpmc::cli {

using nlohmann::json;

std::string to_string(Engine engine) {
    switch (engine) {
    case Engine::Adaptive: return "adaptive";
    case Engine::NonAdaptive: return "non-adaptive";
    case Engine::Recursions: return "recursions";
    }
    return "?";
}

Engine engine_from_string(const std::string& name) {
    if (name == "adaptive") return Engine::Adaptive;
    if (name == "non-adaptive") return Engine::NonAdaptive;
    if (name == "recursions") return Engine::Recursions;
    throw ConfigError("unknown engine '" + name +
                      "' (expected adaptive, non-adaptive or recursions)");
}

namespace {

ModelKind model_from_string(const std::string& name) {
    if (name == "poisson-gamma") return ModelKind::PoissonGamma;
    if (name == "gaussian-mean") return ModelKind::GaussianMean;
    if (name == "gaussian-precision") return ModelKind::GaussianPrecision;
    throw ConfigError("unknown model '" + name + "'");
}

GapKind gap_from_string(const std::string& name) {
    if (name == "geometric") return GapKind::Geometric;
    if (name == "negative-binomial") return GapKind::NegativeBinomial;
    throw ConfigError("unknown gap prior '" + name + "'");
}

}  // namespace

SegmentModel RunConfig::make_model() const {
    switch (model) {
    case ModelKind::PoissonGamma: return SegmentModel::poisson_gamma(alpha, beta);
    case ModelKind::GaussianMean: return SegmentModel::gaussian_mean(prior_mean, sigma2, tau2);
    case ModelKind::GaussianPrecision:
        return SegmentModel::gaussian_precision(mu, alpha0, beta0);
    }
    throw ConfigError("unknown model kind");
}

GapPrior RunConfig::make_prior() const {
    return gap == GapKind::Geometric ? GapPrior::geometric(p)
                                     : GapPrior::negative_binomial(nb_k, p);
}

void RunConfig::validate(std::span<const double> y) const {
    make_model();  // hyperparameter checks
    make_prior();
    if (y.size() < 2) throw DataError("series must contain at least 2 observations");
    if (model == ModelKind::PoissonGamma) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] < 0.0 || y[i] != std::floor(y[i]))
                throw ConfigError(
                    "poisson-gamma model requires non-negative integer data; observation " +
                    std::to_string(i + 1) + " = " + std::to_string(y[i]));
        }
    }
    const int n = static_cast<int>(y.size());
    int prev = 0;
    for (int pos : init_changepoints) {
        if (pos <= prev || pos > n - 1)
            throw ConfigError("initial changepoints must be strictly increasing in [1, n-1]");
        prev = pos;
    }
    if (init_random_k < 0 || init_random_k > n - 1)
        throw ConfigError("init-random-k must lie in [0, n-1]");
    if (init_random_k > 0 && !init_changepoints.empty())
        throw ConfigError("choose either explicit initial changepoints or init-random-k");
    if (chains < 1) throw ConfigError("chains must be >= 1");
    if (chains > 1 && !dump_samples_path.empty())
        throw ConfigError("sample dumping requires a single chain");
    if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta must lie in [0, 1)");
    if (truncation < 0.0) throw ConfigError("truncation threshold must be >= 0");
    if (recursion_samples < 1) throw ConfigError("recursion-samples must be >= 1");

    const bool needs_sampler =
        engine != Engine::Recursions || (compare && compare_engine != Engine::Recursions);
    if (needs_sampler) {
        if (sampler.iterations == 0 && sampler.time_budget_seconds <= 0.0)
            throw ConfigError("sampler engines need --iterations or --time-budget");
        sampler.validate();
    }
    const bool uses_recursions =
        engine == Engine::Recursions || (compare && compare_engine == Engine::Recursions);
    if (uses_recursions && n > recursions_max_n && !force_recursions)
        throw ConfigError(
            "recursions engine refused: n = " + std::to_string(n) + " exceeds the limit " +
            std::to_string(recursions_max_n) +
            " (quadratic precompute; rerun with --force-recursions to override, or use the "
            "adaptive sampler)");
    if (compare && compare_engine == engine)
        throw ConfigError("comparison engine must differ from the primary engine");
}

json to_json(const RunConfig& c) {
    json j;
    j["input"] = c.input_path;
    j["column"] = c.column;
    j["engine"] = to_string(c.engine);
    j["compare"] = c.compare;
    j["compare_engine"] = to_string(c.compare_engine);
    j["model"] = {{"kind", cpmc::to_string(c.model)},
                  {"alpha", c.alpha},
                  {"beta", c.beta},
                  {"prior_mean", c.prior_mean},
                  {"sigma2", c.sigma2},
                  {"tau2", c.tau2},
                  {"mu", c.mu},
                  {"alpha0", c.alpha0},
                  {"beta0", c.beta0}};
    j["gap_prior"] = {{"kind", cpmc::to_string(c.gap)}, {"p", c.p}, {"k", c.nb_k}};
    j["sampler"] = {{"p_add", c.sampler.p_add},
                    {"alpha_target", c.sampler.alpha_target},
                    {"h", c.sampler.h},
                    {"adaptation", c.sampler.adaptation_enabled},
                    {"adjust", c.sampler.adjust_enabled},
                    {"thresholding", c.sampler.thresholding_enabled},
                    {"dual_adaptation", c.sampler.dual_adaptation_enabled},
                    {"dual_weight", c.sampler.dual_weight},
                    {"iterations", c.sampler.iterations},
                    {"burn_in", c.sampler.burn_in},
                    {"thin", c.sampler.thin},
                    {"seed", c.sampler.seed},
                    {"time_budget_seconds", c.sampler.time_budget_seconds},
                    {"a_cutoff", c.sampler.a_cutoff},
                    {"a_inactive", c.sampler.a_inactive},
                    {"log_floor", c.sampler.log_floor},
                    {"log_ceil", c.sampler.log_ceil}};
    j["init_changepoints"] = c.init_changepoints;
    j["init_random_k"] = c.init_random_k;
    j["chains"] = c.chains;
    j["dump_samples"] = c.dump_samples_path;
    j["recursions"] = {{"truncation", c.truncation},
                       {"samples", c.recursion_samples},
                       {"max_n", c.recursions_max_n},
                       {"force", c.force_recursions}};
    j["output_dir"] = c.output_dir;
    j["delta"] = c.delta;
    j["emit_trace"] = c.emit_trace;
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.input_path = j.at("input").get<std::string>();
    c.column = j.value("column", std::string{});
    c.engine = engine_from_string(j.at("engine").get<std::string>());
    c.compare = j.value("compare", false);
    c.compare_engine =
        engine_from_string(j.value("compare_engine", std::string{"recursions"}));

    const auto& m = j.at("model");
    c.model = model_from_string(m.at("kind").get<std::string>());
    c.alpha = m.value("alpha", 1.0);
    c.beta = m.value("beta", 1.0);
    c.prior_mean = m.value("prior_mean", 0.0);
    c.sigma2 = m.value("sigma2", 1.0);
    c.tau2 = m.value("tau2", 1.0);
    c.mu = m.value("mu", 0.0);
    c.alpha0 = m.value("alpha0", 1.0);
    c.beta0 = m.value("beta0", 1.0);

    const auto& g = j.at("gap_prior");
    c.gap = gap_from_string(g.at("kind").get<std::string>());
    c.p = g.at("p").get<double>();
    c.nb_k = g.value("k", 1);

    const auto& s = j.at("sampler");
    c.sampler.p_add = s.value("p_add", 0.5);
    c.sampler.alpha_target = s.value("alpha_target", 0.15);
    c.sampler.h = s.value("h", 0.01);
    c.sampler.adaptation_enabled = s.value("adaptation", true);
    c.sampler.adjust_enabled = s.value("adjust", false);
    c.sampler.thresholding_enabled = s.value("thresholding", false);
    c.sampler.dual_adaptation_enabled = s.value("dual_adaptation", false);
    c.sampler.dual_weight = s.value("dual_weight", 0.5);
    c.sampler.iterations = s.value("iterations", std::uint64_t{0});
    c.sampler.burn_in = s.value("burn_in", std::uint64_t{0});
    c.sampler.thin = s.value("thin", std::uint64_t{0});
    c.sampler.seed = s.value("seed", std::uint64_t{1});
    c.sampler.time_budget_seconds = s.value("time_budget_seconds", 0.0);
    c.sampler.a_cutoff = s.value("a_cutoff", c.sampler.a_cutoff);
    c.sampler.a_inactive = s.value("a_inactive", c.sampler.a_inactive);
    c.sampler.log_floor = s.value("log_floor", c.sampler.log_floor);
    c.sampler.log_ceil = s.value("log_ceil", c.sampler.log_ceil);

    c.init_changepoints = j.value("init_changepoints", std::vector<int>{});
    c.init_random_k = j.value("init_random_k", 0);
    c.chains = j.value("chains", 1);
    c.dump_samples_path = j.value("dump_samples", std::string{});

    const auto& r = j.at("recursions");
    c.truncation = r.value("truncation", 0.0);
    c.recursion_samples = r.value("samples", std::uint64_t{100'000});
    c.recursions_max_n = r.value("max_n", 100'000);
    c.force_recursions = r.value("force", false);

    c.output_dir = j.value("output_dir", std::string{});
    c.delta = j.value("delta", 1e-12);
    c.emit_trace = j.value("emit_trace", false);
    return c;
}

RunConfig config_from_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest: " + manifest_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed manifest " + manifest_path + ": " + e.what());
    }
    if (!j.contains("config")) throw ConfigError("manifest has no config section");
    return config_from_json(j.at("config"));
}

}  // namespace cpmc::cli
