#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "groundkit/agents.hpp"
#include "groundkit/metrics.hpp"
#include "groundkit/zoom.hpp"

// JSON shapes for everything the result store persists. All doubles go
// through nlohmann's shortest-round-trip printer, so values survive a
// save/load cycle bit-for-bit (replay depends on this).

namespace groundkit::serde {

nlohmann::json rect_to_json(const geom::Rect& r);
geom::Rect rect_from_json(const nlohmann::json& j);
nlohmann::json point_to_json(const geom::Point& p);
geom::Point point_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const zoom::ZoomParams& p);
zoom::ZoomParams params_from_json(const nlohmann::json& j);

// Full trace record, self-describing enough to replay: includes the image
// bounds, mode, params, and the raw crop-local prediction of every step.
nlohmann::json trace_to_json(const zoom::ZoomTrace& trace, const std::string& task_id,
                             zoom::ZoomMode mode, const geom::ImageBounds& bounds,
                             const zoom::ZoomParams& params, const geom::Rect& finalized_roi);

struct RecordedTrace {
    std::string task_id;
    zoom::ZoomMode mode = zoom::ZoomMode::Bidirectional;
    geom::ImageBounds bounds;
    zoom::ZoomParams params;
    std::vector<geom::Point> locals;  // per-step raw predictions
    geom::Rect final_roi;
    geom::Rect finalized_roi;
};

RecordedTrace recorded_trace_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const agents::PipelineResult& result);
// Restores the fields metric recomputation needs (timings and the full
// trace body are not round-tripped).
agents::PipelineResult result_from_json(const nlohmann::json& j);

nlohmann::json sweep_sample_to_json(const gbt::SweepSample& s);
gbt::SweepSample sweep_sample_from_json(const nlohmann::json& j);

nlohmann::json sim_spec_to_json(const pred::SimPredictorSpec& spec);
pred::SimPredictorSpec sim_spec_from_json(const nlohmann::json& j);
nlohmann::json endpoint_to_json(const pred::HttpEndpoint& ep);
pred::HttpEndpoint endpoint_from_json(const nlohmann::json& j);
nlohmann::json predictor_spec_to_json(const agents::PredictorSpec& spec);
agents::PredictorSpec predictor_spec_from_json(const nlohmann::json& j);

nlohmann::json pipeline_config_to_json(const agents::PipelineConfig& cfg);
agents::PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

}  // namespace groundkit::serde
