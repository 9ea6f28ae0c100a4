#ifndef WAKESCAN_RUNNER_HPP
#define WAKESCAN_RUNNER_HPP

#include "wakescan/detect.hpp"
#include "wakescan/eval.hpp"
#include "wakescan/synth.hpp"

#include <functional>
#include <vector>

namespace wakescan {

/// Index-parallel loop; each index owns its output slot, so results are
/// identical for any job count.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

/// Built-in per-prior defaults. The regularization scale grows linearly with
/// the image side because line integrals do.
PriorSpec default_prior(PriorKind kind, int image_size);

SolverConfig default_solver_config(PriorKind kind, int image_size);

/// Run the detection pipeline over a scene set; reports come back in scene
/// order regardless of the job count.
std::vector<PipelineResult> run_scene_batch(const std::vector<SuiteScene>& scenes,
                                            const SolverConfig& solver_config,
                                            const DetectConfig& detect_config, int jobs);

struct SuiteRunResult {
    std::vector<PipelineResult> outcomes;  // scene order
    DetectionCounts counts;
    Metrics metrics;
};

/// Generate the 28-scene suite for one seed, detect with the given prior, and
/// aggregate per-wake counts.
SuiteRunResult run_suite(const SuiteConfig& suite, const SolverConfig& solver_config,
                         const DetectConfig& detect_config, int jobs);

/// Margin sweep for one prior over a generated suite: the expensive stages
/// run once per scene; only confirmation and scoring vary with the margin.
std::vector<RocPoint> roc_sweep(const std::vector<SuiteScene>& scenes,
                                const SolverConfig& solver_config,
                                const DetectConfig& detect_config,
                                const std::vector<double>& margins, int jobs);

}  // namespace wakescan

#endif
