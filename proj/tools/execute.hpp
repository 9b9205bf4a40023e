#ifndef CPMC_TOOLS_EXECUTE_HPP
#define CPMC_TOOLS_EXECUTE_HPP

#include <optional>
#include <string>

#include "cpmc/sampler.hpp"
#include "cpmc/summary.hpp"
#include "run_config.hpp"

namespace cpmc::cli {

struct EngineOutput {
    Engine engine = Engine::Adaptive;
    PosteriorSummary summary;
    MoveStats stats;                    // sampler engines
    std::uint64_t iterations_run = 0;   // sampler engines
    double precompute_seconds = 0.0;    // recursions
    double log_evidence = 0.0;          // recursions (log_q[1])
    bool has_evidence = false;
    double engine_seconds = 0.0;
};

struct ExecutionResult {
    int n = 0;
    EngineOutput primary;
    std::optional<EngineOutput> comparison;
    double d_primary_compare = 0.0;
    double d_compare_primary = 0.0;
    std::string output_dir;
};

// Run one engine in isolation (no artifacts written).
EngineOutput run_engine(Engine engine, const RunConfig& config, const SeriesCache& cache,
                        const SegmentModel& model, const GapPrior& prior);

// Full run: ingest, validate, execute the engine(s), write result artifacts
// and the manifest into the output directory.
ExecutionResult execute(const RunConfig& config);

}  // namespace cpmc::cli

#endif
