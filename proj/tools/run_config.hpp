#ifndef CPMC_TOOLS_RUN_CONFIG_HPP
#define CPMC_TOOLS_RUN_CONFIG_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cpmc/gap_prior.hpp"
#include "cpmc/sampler.hpp"
#include "cpmc/segment_model.hpp"

namespace cpmc::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "CPMC_OUTPUT_DIR";

enum class Engine { Adaptive, NonAdaptive, Recursions };

std::string to_string(Engine engine);
Engine engine_from_string(const std::string& name);

struct RunConfig {
    // data
    std::string input_path;
    std::string column;

    // engines
    Engine engine = Engine::Adaptive;
    bool compare = false;
    Engine compare_engine = Engine::Recursions;

    // segment model
    ModelKind model = ModelKind::GaussianMean;
    double alpha = 1.0, beta = 1.0;                      // poisson-gamma
    double prior_mean = 0.0, sigma2 = 1.0, tau2 = 1.0;   // gaussian-mean
    double mu = 0.0, alpha0 = 1.0, beta0 = 1.0;          // gaussian-precision

    // gap prior
    GapKind gap = GapKind::Geometric;
    double p = 0.01;
    int nb_k = 1;

    // sampler engines
    SamplerConfig sampler;
    std::vector<int> init_changepoints;
    int init_random_k = 0;  // scatter this many changepoints uniformly at start
    int chains = 1;
    std::string dump_samples_path;

    // recursions engine
    double truncation = 0.0;
    std::uint64_t recursion_samples = 100'000;
    int recursions_max_n = 100'000;
    bool force_recursions = false;

    // output
    std::string output_dir;  // empty: $CPMC_OUTPUT_DIR or "."
    double delta = 1e-12;    // divergence smoothing for comparison reports
    bool emit_trace = false;

    SegmentModel make_model() const;
    GapPrior make_prior() const;

    // Full validation of engine/model/prior combinations against the data.
    void validate(std::span<const double> y) const;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig config_from_manifest(const std::string& manifest_path);

}  // namespace cpmc::cli

#endif
