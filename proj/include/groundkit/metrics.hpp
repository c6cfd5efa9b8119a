#pragma once

#include <optional>
#include <string>
#include <vector>

#include "groundkit/agents.hpp"
#include "groundkit/dataset.hpp"

namespace groundkit::gbt {

// Resolution band for efficiency breakdowns. Panels with aspect >= 3 are
// ultra-wide; the rest split on megapixels (< 5, < 8, rest).
std::string resolution_cluster(const geom::ImageBounds& res);

struct ClusterStats {
    std::string name;
    int count = 0;
    double avg_steps = 0.0;
    double pass_rate = 0.0;
};

struct GroupStats {
    std::string group;
    int count = 0;
    double containment = 0.0;
    std::optional<double> conditional;
    double top1 = 0.0;
};

struct MetricsReport {
    int task_count = 0;
    int failed_count = 0;
    int refused_count = 0;
    double containment_rate = 0.0;
    std::optional<double> conditional_accuracy;  // absent when nothing contained
    std::optional<double> composite_score;       // containment x conditional
    double top1_accuracy = 0.0;
    double avg_steps = 0.0;
    double pass_rate = 0.0;
    std::optional<double> refusal_accuracy;      // absent without infeasible tasks
    std::optional<double> false_positive_rate;   // absent without feasible tasks
    std::vector<GroupStats> groups;
    std::vector<ClusterStats> clusters;
};

// Aggregates per-task results. Failed tasks leave every denominator except
// top-1 (where a missing answer is simply wrong). any_overlap switches
// containment from center-in-ROI to region-touches-ROI.
MetricsReport compute_metrics(const std::vector<agents::PipelineResult>& results,
                              const std::vector<GroundingTask>& tasks, bool any_overlap = false);

double composite_score(double containment, double conditional);

// Two-sided exact sign test: probability of a split at least this lopsided
// under a fair coin. Ties must be dropped by the caller.
double sign_test_p(int wins, int losses);

struct SweepConfig {
    std::vector<double> roi_sizes = {400, 600, 800, 1000, 1200, 1400, 1600, 1800};
    agents::PredictorSpec predictor;  // drives both the ROI stage and stage 2
    bool use_zoom = false;            // false: static one-shot baseline
    zoom::ZoomMode mode = zoom::ZoomMode::Bidirectional;
    zoom::ZoomParams zoom;            // s_min is overridden per sweep size
    std::uint64_t seed = 0;
    int workers = 1;

    void validate() const;  // sizes positive and ascending
};

struct SweepRow {
    double roi_size = 0.0;
    double containment = 0.0;
    std::optional<double> conditional;
    std::optional<double> composite;
    int evaluated = 0;
    int failures = 0;
};

// One (size, task) outcome; rows are a pure aggregation of these, so a
// stored run can be re-derived and integrity-checked.
struct SweepSample {
    double roi_size = 0.0;
    std::string task_id;
    bool failed = false;
    bool has_target = false;
    bool contained = false;
    bool correct = false;
};

struct SweepResult {
    std::vector<SweepSample> samples;
    std::vector<SweepRow> rows;
};

std::vector<SweepRow> sweep_rows_from_samples(const std::vector<SweepSample>& samples);

SweepResult run_sweep(const SweepConfig& config, const std::vector<GroundingTask>& tasks);

enum class AblationKind {
    BidirectionalVsUnidirectional,
    AsymmetricVsSymmetric,
    PruningRates,
    ScalingFactors,
};

const char* ablation_kind_name(AblationKind kind);
AblationKind ablation_kind_from_name(const std::string& name);  // throws ValidationError

struct AblationArm {
    std::string name;
    MetricsReport report;
    std::vector<agents::PipelineResult> results;  // kept for persistence
};

struct AblationTable {
    AblationKind kind = AblationKind::PruningRates;
    std::vector<AblationArm> arms;  // arm 0 is the comparison baseline
};

// Matched-seed arms over the same tasks; only the ablated knob varies.
AblationTable run_ablation(AblationKind kind, const agents::PipelineConfig& base, int workers,
                           const std::vector<GroundingTask>& tasks);

}  // namespace groundkit::gbt
