#include "wakescan/runner.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace wakescan {

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(jobs));
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

PriorSpec default_prior(PriorKind kind, int image_size) {
    PriorSpec spec;
    spec.kind = kind;
    switch (kind) {
        case PriorKind::GMC:
            spec.lambda = 0.4 * image_size;
            spec.gamma = 0.8;
            break;
        case PriorKind::L1:
            spec.lambda = 0.4 * image_size;
            break;
        case PriorKind::Lp:
            spec.lambda = 0.4 * image_size;
            spec.p = 0.5;
            break;
        case PriorKind::TV:
            spec.lambda = 0.2 * image_size;
            break;
        case PriorKind::Nuclear:
            spec.lambda = 0.4 * image_size;
            break;
    }
    return spec;
}

SolverConfig default_solver_config(PriorKind kind, int image_size) {
    SolverConfig config;
    config.prior = default_prior(kind, image_size);
    return config;
}

std::vector<PipelineResult> run_scene_batch(const std::vector<SuiteScene>& scenes,
                                            const SolverConfig& solver_config,
                                            const DetectConfig& detect_config, int jobs) {
    std::vector<PipelineResult> results(scenes.size());
    parallel_for(static_cast<int>(scenes.size()), jobs, [&](int i) {
        const auto& scene = scenes[static_cast<size_t>(i)];
        const double c = scene.image.center();
        results[static_cast<size_t>(i)] = detect_pipeline(
            scene.image, Eigen::Vector2d(c, c), solver_config, detect_config, scene.id);
    });
    return results;
}

SuiteRunResult run_suite(const SuiteConfig& suite, const SolverConfig& solver_config,
                         const DetectConfig& detect_config, int jobs) {
    const std::vector<SuiteScene> scenes = paper_case_suite(suite);
    SuiteRunResult out;
    out.outcomes = run_scene_batch(scenes, solver_config, detect_config, jobs);
    for (size_t i = 0; i < scenes.size(); ++i)
        out.counts += score_report(out.outcomes[i].report, scenes[i].truth);
    out.metrics = compute_metrics(out.counts);
    return out;
}

std::vector<RocPoint> roc_sweep(const std::vector<SuiteScene>& scenes,
                                const SolverConfig& solver_config,
                                const DetectConfig& detect_config,
                                const std::vector<double>& margins, int jobs) {
    const auto outcomes = run_scene_batch(scenes, solver_config, detect_config, jobs);
    std::vector<std::pair<WakeReport, GroundTruth>> scored;
    scored.reserve(scenes.size());
    for (size_t i = 0; i < scenes.size(); ++i)
        scored.emplace_back(outcomes[i].report, scenes[i].truth);
    return roc_from_reports(scored, margins);
}

}  // namespace wakescan
