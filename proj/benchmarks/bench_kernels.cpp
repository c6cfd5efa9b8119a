// Compares the OpenMP kernels against their serial reference twins: the
// bicubic upscaler and the batch pipeline runner. Run with --smoke for the
// quick correctness-only pass wired into ctest; the default run uses sizes
// large enough for meaningful throughput numbers.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "groundkit/agents.hpp"
#include "groundkit/dataset.hpp"
#include "groundkit/imaging.hpp"
#include "groundkit/imaging_ref.hpp"
#include "groundkit/metrics.hpp"
#include "groundkit/parallel.hpp"

using namespace groundkit;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

img::Raster noise_raster(int w, int h, std::uint64_t seed) {
    img::Raster r;
    r.width = w;
    r.height = h;
    r.pixels.resize(std::size_t(w) * h * 3);
    std::mt19937_64 rng(seed);
    for (auto& px : r.pixels) px = std::uint8_t(rng());
    return r;
}

// Parallel bicubic vs the serial reference on one raster. Returns the worst
// per-channel difference; anything above 1 intensity level is a bug.
int bench_bicubic(int w, int h, int factor, bool print) {
    const img::Raster src = noise_raster(w, h, 0xbeef);

    auto t0 = Clock::now();
    const img::Raster fast = img::upscale_bicubic(src, factor);
    const double ms_fast = ms_since(t0);

    t0 = Clock::now();
    const img::Raster ref = img::upscale_bicubic_reference(src, factor);
    const double ms_ref = ms_since(t0);

    int worst = 0;
    for (std::size_t i = 0; i < fast.pixels.size(); ++i)
        worst = std::max(worst, std::abs(int(fast.pixels[i]) - int(ref.pixels[i])));

    if (print) {
        const double mpx = double(fast.width) * fast.height / 1e6;
        std::printf("bicubic %dx%d x%d (%.1f Mpx out): omp %.1f ms (%.1f Mpx/s), "
                    "serial %.1f ms (%.1f Mpx/s), speedup %.2fx, worst diff %d\n",
                    w, h, factor, mpx, ms_fast, mpx / ms_fast * 1e3, ms_ref,
                    mpx / ms_ref * 1e3, ms_ref / ms_fast, worst);
    }
    return worst;
}

// Batch pipeline throughput: run_batch with a worker pool vs the serial
// path, on identical tasks and seeds. Results must agree exactly since every
// predictor stream is keyed by (seed, task, step), never by thread.
bool bench_batch(int n_tasks, bool print) {
    const auto tasks = gbt::make_synthetic_dataset(n_tasks, 2026);
    agents::PipelineConfig cfg;
    cfg.stage1.sim.kind = pred::SimKind::Noisy;
    cfg.stage1.sim.sigma = 250.0;
    cfg.stage2.sim.kind = pred::SimKind::Oracle;
    cfg.scale_factor = 1;
    cfg.seed = 2026;

    auto run = [&](int workers, std::vector<agents::PipelineResult>& out) {
        out.assign(tasks.size(), {});
        const auto t0 = Clock::now();
        run_batch(int(tasks.size()), workers, [&](int i) {
            out[std::size_t(i)] = agents::run_pipeline(tasks[std::size_t(i)], cfg);
        });
        return ms_since(t0);
    };

    std::vector<agents::PipelineResult> serial, parallel;
    const double ms_serial = run(1, serial);
    const int workers = std::max(2, omp_get_max_threads());
    const double ms_parallel = run(workers, parallel);

    bool agree = true;
    for (std::size_t i = 0; i < serial.size(); ++i) {
        agree = agree && serial[i].roi_contains_target == parallel[i].roi_contains_target &&
                serial[i].correct == parallel[i].correct &&
                serial[i].finalized_roi.x_min == parallel[i].finalized_roi.x_min &&
                serial[i].finalized_roi.y_min == parallel[i].finalized_roi.y_min;
    }
    if (print) {
        std::printf("pipeline batch %d tasks: serial %.1f ms (%.0f tasks/s), "
                    "omp x%d %.1f ms (%.0f tasks/s), speedup %.2fx, results %s\n",
                    n_tasks, ms_serial, n_tasks / ms_serial * 1e3, workers, ms_parallel,
                    n_tasks / ms_parallel * 1e3, ms_serial / ms_parallel,
                    agree ? "identical" : "DIVERGED");
    }
    return agree;
}

}  // namespace

int main(int argc, char** argv) {
    bool smoke = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--smoke") == 0) smoke = true;

    int bad = 0;
    if (smoke) {
        if (bench_bicubic(48, 32, 2, false) > 1) ++bad;
        if (!bench_batch(16, false)) ++bad;
        std::printf("bench smoke: %s\n", bad ? "FAILED" : "ok");
        return bad ? 1 : 0;
    }

    if (bench_bicubic(640, 400, 3, true) > 1) ++bad;
    if (bench_bicubic(1280, 800, 2, true) > 1) ++bad;
    if (!bench_batch(400, true)) ++bad;
    return bad ? 1 : 0;
}
