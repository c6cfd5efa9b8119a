#pragma once

#include <memory>
#include <optional>
#include <string>

#include "groundkit/dataset.hpp"
#include "groundkit/llm_client.hpp"
#include "groundkit/predictor.hpp"
#include "groundkit/prompts.hpp"
#include "groundkit/zoom.hpp"

namespace groundkit::agents {

// Which backend answers prediction queries. Simulated specs get their world
// built per task; http shares one endpoint across tasks.
struct PredictorSpec {
    enum class Backend { Sim, Http };
    Backend backend = Backend::Sim;
    pred::SimPredictorSpec sim;
    pred::HttpEndpoint http;
};

std::unique_ptr<pred::Predictor> make_predictor(const PredictorSpec& spec,
                                                const pred::SimulatedWorld& world);

struct RefusalConfig {
    bool enabled = false;
    prompts::RefusalVariant variant = prompts::RefusalVariant::V1;
    int scaling = 1;  // upscale factor applied to the screenshot first
};

struct PipelineConfig {
    RefusalConfig refusal;
    zoom::ZoomParams zoom;
    zoom::ZoomMode mode = zoom::ZoomMode::Bidirectional;
    prompts::RewriteStrategy rewrite = prompts::RewriteStrategy::Raw;
    int scale_factor = 3;  // bicubic upscale of the finalized crop, 1..4
    PredictorSpec stage1;
    PredictorSpec stage2;
    std::optional<pred::HttpEndpoint> refusal_endpoint;
    std::optional<pred::HttpEndpoint> rewrite_endpoint;
    std::uint64_t seed = 0;  // drives world building and synthetic rasters

    void validate() const;  // throws ValidationError
};

struct FeasibilityVerdict {
    bool proceed = true;
    std::string rationale;
    bool parse_failed = false;  // reply was unusable; defaulted to proceed
};

// Stage 0. Sends the variant's verbatim template, the instruction, and the
// (optionally upscaled) screenshot; maps the fenced-JSON answer to a
// verdict. Unparseable replies default to proceed: refusing on a glitch
// would inflate the false positive rate.
FeasibilityVerdict check_feasibility(const img::Raster& image, const std::string& instruction,
                                     prompts::RefusalVariant variant, int scaling,
                                     const pred::HttpEndpoint& endpoint);

// Stage 2 preamble. Renders the strategy template over the raw instruction,
// shows the model the finalized crop, and post-processes the reply.
// Structured strategies that fail to parse fall back to the raw instruction.
std::string rewrite_instruction(const img::Raster& crop, const std::string& raw_instruction,
                                prompts::RewriteStrategy strategy,
                                const pred::HttpEndpoint& endpoint);

geom::Point map_crop_to_global(const geom::Point& p_local, const geom::Rect& crop_rect,
                               double scale_factor);

struct PipelineResult {
    std::string task_id;
    bool refused = false;
    std::string refusal_rationale;
    geom::Rect finalized_roi;
    bool roi_contains_target = false;  // target center inside finalized_roi
    std::string rewritten_instruction;
    std::optional<geom::Point> final_point;  // absent when refused or failed
    std::optional<bool> correct;             // absent without ground truth
    zoom::ZoomTrace trace;
    int predictor_calls = 0;
    bool failed = false;
    std::string failure;
    double ms_stage0 = 0.0;
    double ms_stage1 = 0.0;
    double ms_stage2 = 0.0;
    double ms_total = 0.0;
};

// The three-stage flow for one task. Stage-level errors are recorded in the
// result, never thrown, so batch runs always complete.
PipelineResult run_pipeline(const gbt::GroundingTask& task, const PipelineConfig& config);

}  // namespace groundkit::agents
