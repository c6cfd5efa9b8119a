#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>

#include "groundkit/errors.hpp"
#include "groundkit/metrics.hpp"
#include "groundkit/parallel.hpp"

namespace groundkit::gbt {

std::string resolution_cluster(const geom::ImageBounds& res) {
    const double aspect = double(res.width) / double(res.height);
    if (aspect >= 3.0) return "Ultra-wide";
    const double megapixels = double(res.width) * double(res.height) / 1e6;
    if (megapixels < 5.0) return "Standard (HD/QHD)";
    if (megapixels < 8.0) return "High-Res";
    return "Extreme (4K+)";
}

double composite_score(double containment, double conditional) {
    if (containment < 0.0 || containment > 1.0 || conditional < 0.0 || conditional > 1.0)
        throw ValidationError("composite_score: inputs must be fractions in [0,1]");
    return containment * conditional;
}

double sign_test_p(int wins, int losses) {
    if (wins < 0 || losses < 0) throw ValidationError("sign_test_p: negative counts");
    const int n = wins + losses;
    if (n == 0) return 1.0;
    const int tail = std::min(wins, losses);
    // Exact binomial tail at p = 1/2 via log binomials; exact to double
    // precision for any n that fits a benchmark.
    double p = 0.0;
    for (int k = 0; k <= tail; ++k) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                std::lgamma(n - k + 1.0) - n * std::log(2.0);
        p += std::exp(log_term);
    }
    return std::min(1.0, 2.0 * p);
}

namespace {

bool contained(const agents::PipelineResult& r, const GroundingTask& t, bool any_overlap) {
    if (!t.target) return false;
    if (any_overlap) return img::region_intersects_rect(*t.target, r.finalized_roi);
    return r.roi_contains_target;
}

}  // namespace

MetricsReport compute_metrics(const std::vector<agents::PipelineResult>& results,
                              const std::vector<GroundingTask>& tasks, bool any_overlap) {
    if (results.size() != tasks.size())
        throw ValidationError("compute_metrics: results and tasks are not aligned");

    MetricsReport rep;
    rep.task_count = int(tasks.size());

    int contain_den = 0, contain_num = 0;
    int cond_den = 0, cond_num = 0;
    int top1_den = 0, top1_num = 0;
    int steps_den = 0;
    double steps_sum = 0.0;
    int infeasible = 0, infeasible_refused = 0;
    int feasible = 0, feasible_refused = 0;

    struct GroupAcc {
        int contain_den = 0, contain_num = 0, cond_den = 0, cond_num = 0, top1_den = 0,
            top1_num = 0;
    };
    struct ClusterAcc {
        int count = 0, passed = 0;
        double steps = 0.0;
    };
    std::map<std::string, GroupAcc> groups;
    std::map<std::string, ClusterAcc> clusters;

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& task = tasks[i];
        const auto& res = results[i];

        if (res.failed) ++rep.failed_count;
        if (res.refused) ++rep.refused_count;

        if (task.feasible) {
            ++feasible;
            if (res.refused) ++feasible_refused;
        } else {
            ++infeasible;
            if (res.refused) ++infeasible_refused;
        }

        // Top-1 spans every feasible task; refusals and failures score zero.
        if (task.feasible && task.target) {
            ++top1_den;
            const bool hit = !res.refused && !res.failed && res.correct.value_or(false);
            if (hit) ++top1_num;
            auto& g = groups[task.group];
            ++g.top1_den;
            if (hit) ++g.top1_num;
        }

        // Stage 1/2 rates cover tasks that actually produced a ROI.
        if (res.refused || res.failed || !task.target) continue;

        const bool in_roi = contained(res, task, any_overlap);
        ++contain_den;
        if (in_roi) ++contain_num;
        if (in_roi) {
            ++cond_den;
            if (res.correct.value_or(false)) ++cond_num;
        }
        steps_sum += res.trace.predictor_calls;
        ++steps_den;

        auto& g = groups[task.group];
        ++g.contain_den;
        if (in_roi) ++g.contain_num;
        if (in_roi) {
            ++g.cond_den;
            if (res.correct.value_or(false)) ++g.cond_num;
        }

        auto& c = clusters[resolution_cluster(task.resolution)];
        ++c.count;
        c.steps += res.trace.predictor_calls;
        if (in_roi) ++c.passed;
    }

    rep.containment_rate = contain_den ? double(contain_num) / contain_den : 0.0;
    if (cond_den > 0) {
        rep.conditional_accuracy = double(cond_num) / cond_den;
        rep.composite_score = composite_score(rep.containment_rate, *rep.conditional_accuracy);
    }
    rep.top1_accuracy = top1_den ? double(top1_num) / top1_den : 0.0;
    rep.avg_steps = steps_den ? steps_sum / steps_den : 0.0;
    rep.pass_rate = rep.containment_rate;
    if (infeasible > 0) rep.refusal_accuracy = double(infeasible_refused) / infeasible;
    if (feasible > 0) rep.false_positive_rate = double(feasible_refused) / feasible;

    for (const auto& [name, acc] : groups) {
        GroupStats gs;
        gs.group = name;
        gs.count = acc.contain_den;
        gs.containment = acc.contain_den ? double(acc.contain_num) / acc.contain_den : 0.0;
        if (acc.cond_den > 0) gs.conditional = double(acc.cond_num) / acc.cond_den;
        gs.top1 = acc.top1_den ? double(acc.top1_num) / acc.top1_den : 0.0;
        rep.groups.push_back(std::move(gs));
    }
    for (const auto& [name, acc] : clusters) {
        ClusterStats cs;
        cs.name = name;
        cs.count = acc.count;
        cs.avg_steps = acc.count ? acc.steps / acc.count : 0.0;
        cs.pass_rate = acc.count ? double(acc.passed) / acc.count : 0.0;
        rep.clusters.push_back(std::move(cs));
    }
    return rep;
}

void SweepConfig::validate() const {
    if (roi_sizes.empty()) throw ValidationError("sweep: roi_sizes must not be empty");
    for (std::size_t i = 0; i < roi_sizes.size(); ++i) {
        if (roi_sizes[i] <= 0.0) throw ValidationError("sweep: roi sizes must be positive");
        if (i > 0 && roi_sizes[i] <= roi_sizes[i - 1])
            throw ValidationError("sweep: roi sizes must be ascending");
    }
    zoom.validate();
}

namespace {

struct ArmOutcome {
    bool failed = false;
    bool contained = false;
    bool correct = false;
    int steps = 0;
};

// One task at one ROI size: pick the ROI (static or zoom), then make one
// stage-2 style grounding call inside it. Geometry only; no rasters.
ArmOutcome eval_roi_task(const GroundingTask& task, const SweepConfig& cfg, double size) {
    ArmOutcome out;
    const pred::SimulatedWorld world = build_world(task, cfg.seed);
    const auto predictor = agents::make_predictor(cfg.predictor, world);

    zoom::GroundingContext ctx;
    ctx.task_id = task.id;
    ctx.instruction = task.instruction;
    ctx.bounds = task.resolution;

    geom::Rect roi;
    int calls = 0;
    try {
        if (cfg.use_zoom) {
            zoom::ZoomParams params = cfg.zoom;
            params.s_min = size;
            const zoom::ZoomTrace trace = zoom::run_zoom(ctx, *predictor, params, cfg.mode);
            if (trace.failed) {
                out.failed = true;
                return out;
            }
            roi = zoom::finalize(trace, params, ctx.bounds);
            calls = trace.predictor_calls;
        } else {
            roi = zoom::static_one_shot_roi(ctx, *predictor, size);
            calls = 1;
        }

        const geom::Rect grid = geom::grid_crop_rect(roi, ctx.bounds);
        pred::PredictQuery query;
        query.instruction = task.instruction;
        query.crop = grid;
        query.scale = 1.0;
        query.task_id = task.id;
        query.step = calls;
        geom::Point local = predictor->predict(query);
        ++calls;
        local = geom::clamp_point(local, {0.0, 0.0, grid.width(), grid.height()});
        const geom::Point global = agents::map_crop_to_global(local, grid, 1.0);

        out.steps = calls;
        if (task.target) {
            out.contained = geom::is_inside(task.target->center(), roi);
            out.correct = img::point_in_region(global, *task.target);
        }
    } catch (const std::exception&) {
        out.failed = true;
    }
    return out;
}

}  // namespace

std::vector<SweepRow> sweep_rows_from_samples(const std::vector<SweepSample>& samples) {
    std::vector<double> order;
    std::map<double, SweepRow> acc;
    std::map<double, std::array<int, 3>> counters;  // contain, cond_num, cond_den
    for (const auto& s : samples) {
        if (!acc.count(s.roi_size)) {
            order.push_back(s.roi_size);
            acc[s.roi_size].roi_size = s.roi_size;
        }
        SweepRow& row = acc[s.roi_size];
        auto& c = counters[s.roi_size];
        if (s.failed) {
            ++row.failures;
            continue;
        }
        if (!s.has_target) continue;
        ++row.evaluated;
        if (s.contained) {
            ++c[0];
            ++c[2];
            if (s.correct) ++c[1];
        }
    }
    std::vector<SweepRow> rows;
    for (const double size : order) {
        SweepRow row = acc[size];
        const auto& c = counters[size];
        row.containment = row.evaluated ? double(c[0]) / row.evaluated : 0.0;
        if (c[2] > 0) {
            row.conditional = double(c[1]) / c[2];
            row.composite = composite_score(row.containment, *row.conditional);
        }
        rows.push_back(row);
    }
    return rows;
}

SweepResult run_sweep(const SweepConfig& config, const std::vector<GroundingTask>& tasks) {
    config.validate();
    if (tasks.empty()) throw ValidationError("sweep: empty dataset");

    SweepResult result;
    for (const double size : config.roi_sizes) {
        std::vector<ArmOutcome> outcomes(tasks.size());
        run_batch(int(tasks.size()), config.workers, [&](int i) {
            outcomes[std::size_t(i)] = eval_roi_task(tasks[std::size_t(i)], config, size);
        });
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            SweepSample s;
            s.roi_size = size;
            s.task_id = tasks[i].id;
            s.failed = outcomes[i].failed;
            s.has_target = tasks[i].target.has_value();
            s.contained = outcomes[i].contained;
            s.correct = outcomes[i].correct;
            result.samples.push_back(std::move(s));
        }
    }
    result.rows = sweep_rows_from_samples(result.samples);
    return result;
}

const char* ablation_kind_name(AblationKind kind) {
    switch (kind) {
        case AblationKind::BidirectionalVsUnidirectional: return "bidirectional_vs_unidirectional";
        case AblationKind::AsymmetricVsSymmetric: return "asymmetric_vs_symmetric";
        case AblationKind::PruningRates: return "pruning_rates";
        case AblationKind::ScalingFactors: return "scaling_factors";
    }
    return "pruning_rates";
}

AblationKind ablation_kind_from_name(const std::string& name) {
    for (AblationKind k :
         {AblationKind::BidirectionalVsUnidirectional, AblationKind::AsymmetricVsSymmetric,
          AblationKind::PruningRates, AblationKind::ScalingFactors}) {
        if (name == ablation_kind_name(k)) return k;
    }
    throw ValidationError("unknown ablation kind: " + name);
}

namespace {

AblationArm run_arm(const std::string& name, const agents::PipelineConfig& cfg, int workers,
                    const std::vector<GroundingTask>& tasks) {
    AblationArm arm;
    arm.name = name;
    arm.results.resize(tasks.size());
    run_batch(int(tasks.size()), workers, [&](int i) {
        arm.results[std::size_t(i)] = agents::run_pipeline(tasks[std::size_t(i)], cfg);
    });
    arm.report = compute_metrics(arm.results, tasks);
    return arm;
}

}  // namespace

AblationTable run_ablation(AblationKind kind, const agents::PipelineConfig& base, int workers,
                           const std::vector<GroundingTask>& tasks) {
    base.validate();
    if (tasks.empty()) throw ValidationError("ablation: empty dataset");

    AblationTable table;
    table.kind = kind;

    switch (kind) {
        case AblationKind::BidirectionalVsUnidirectional:
            for (const auto mode : {zoom::ZoomMode::Bidirectional, zoom::ZoomMode::Unidirectional}) {
                agents::PipelineConfig cfg = base;
                cfg.mode = mode;
                table.arms.push_back(run_arm(zoom::zoom_mode_name(mode), cfg, workers, tasks));
            }
            break;
        case AblationKind::AsymmetricVsSymmetric:
            for (const auto mode :
                 {zoom::ZoomMode::Bidirectional, zoom::ZoomMode::SymmetricBaseline}) {
                agents::PipelineConfig cfg = base;
                cfg.mode = mode;
                table.arms.push_back(run_arm(
                    mode == zoom::ZoomMode::Bidirectional ? "asymmetric" : "symmetric", cfg,
                    workers, tasks));
            }
            break;
        case AblationKind::PruningRates:
            for (const double rate : {0.10, 0.20, 0.30}) {
                agents::PipelineConfig cfg = base;
                cfg.zoom.delta_in = rate;
                char name[32];
                std::snprintf(name, sizeof name, "delta_in_%.2f", rate);
                table.arms.push_back(run_arm(name, cfg, workers, tasks));
            }
            break;
        case AblationKind::ScalingFactors:
            for (const int factor : {1, 2, 3, 4}) {
                agents::PipelineConfig cfg = base;
                cfg.scale_factor = factor;
                table.arms.push_back(
                    run_arm("scale_" + std::to_string(factor), cfg, workers, tasks));
            }
            break;
    }
    return table;
}

}  // namespace groundkit::gbt
