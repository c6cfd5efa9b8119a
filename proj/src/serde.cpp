#include "groundkit/serde.hpp"

#include "groundkit/errors.hpp"

namespace groundkit::serde {

using nlohmann::json;

json rect_to_json(const geom::Rect& r) { return json::array({r.x_min, r.y_min, r.x_max, r.y_max}); }

geom::Rect rect_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw ValidationError("rect: expected 4-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json point_to_json(const geom::Point& p) { return json::array({p.x, p.y}); }

geom::Point point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("point: expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json params_to_json(const zoom::ZoomParams& p) {
    return {{"delta_in", p.delta_in},   {"delta_out", p.delta_out},
            {"e_max", p.e_max},         {"s_min", p.s_min},
            {"n_stable", p.n_stable},   {"eps_stable", p.eps_stable},
            {"max_iters", p.max_iters}};
}

zoom::ZoomParams params_from_json(const json& j) {
    zoom::ZoomParams p;
    if (j.contains("delta_in")) p.delta_in = j["delta_in"].get<double>();
    if (j.contains("delta_out")) p.delta_out = j["delta_out"].get<double>();
    if (j.contains("e_max")) p.e_max = j["e_max"].get<int>();
    if (j.contains("s_min")) p.s_min = j["s_min"].get<double>();
    if (j.contains("n_stable")) p.n_stable = j["n_stable"].get<int>();
    if (j.contains("eps_stable")) p.eps_stable = j["eps_stable"].get<double>();
    if (j.contains("max_iters")) p.max_iters = j["max_iters"].get<int>();
    p.validate();
    return p;
}

json trace_to_json(const zoom::ZoomTrace& trace, const std::string& task_id, zoom::ZoomMode mode,
                   const geom::ImageBounds& bounds, const zoom::ZoomParams& params,
                   const geom::Rect& finalized_roi) {
    json steps = json::array();
    for (const auto& s : trace.steps) {
        json step = {{"index", s.index},
                     {"roi_before", rect_to_json(s.roi_before)},
                     {"local", point_to_json(s.local)},
                     {"in_bounds", s.in_bounds},
                     {"event", zoom::zoom_event_name(s.event)},
                     {"roi_after", rect_to_json(s.roi_after)}};
        if (s.global) step["global"] = point_to_json(*s.global);
        steps.push_back(std::move(step));
    }
    json history = json::array();
    for (const auto& p : trace.history) history.push_back(point_to_json(p));

    json j = {{"task_id", task_id},
              {"mode", zoom::zoom_mode_name(mode)},
              {"bounds", json::array({bounds.width, bounds.height})},
              {"params", params_to_json(params)},
              {"steps", std::move(steps)},
              {"history", std::move(history)},
              {"error_count", trace.error_count},
              {"termination", zoom::termination_name(trace.termination)},
              {"final_roi", rect_to_json(trace.final_roi)},
              {"finalized_roi", rect_to_json(finalized_roi)},
              {"predictor_calls", trace.predictor_calls}};
    if (trace.failed) {
        j["failed"] = true;
        j["failure"] = trace.failure;
    }
    return j;
}

RecordedTrace recorded_trace_from_json(const json& j) {
    RecordedTrace rec;
    rec.task_id = j.at("task_id").get<std::string>();
    rec.mode = zoom::zoom_mode_from_name(j.at("mode").get<std::string>());
    rec.bounds = {j.at("bounds")[0].get<int>(), j.at("bounds")[1].get<int>()};
    rec.params = params_from_json(j.at("params"));
    for (const auto& step : j.at("steps")) rec.locals.push_back(point_from_json(step.at("local")));
    rec.final_roi = rect_from_json(j.at("final_roi"));
    rec.finalized_roi = rect_from_json(j.at("finalized_roi"));
    return rec;
}

json result_to_json(const agents::PipelineResult& r) {
    json j = {{"task_id", r.task_id},
              {"refused", r.refused},
              {"finalized_roi", rect_to_json(r.finalized_roi)},
              {"roi_contains_target", r.roi_contains_target},
              {"stage1_calls", r.trace.predictor_calls},
              {"predictor_calls", r.predictor_calls},
              {"termination", zoom::termination_name(r.trace.termination)},
              {"failed", r.failed}};
    if (!r.refusal_rationale.empty()) j["refusal_rationale"] = r.refusal_rationale;
    if (!r.rewritten_instruction.empty()) j["rewritten_instruction"] = r.rewritten_instruction;
    if (r.final_point) j["final_point"] = point_to_json(*r.final_point);
    if (r.correct) j["correct"] = *r.correct;
    if (r.failed) j["failure"] = r.failure;
    j["ms"] = {{"stage0", r.ms_stage0},
               {"stage1", r.ms_stage1},
               {"stage2", r.ms_stage2},
               {"total", r.ms_total}};
    return j;
}

agents::PipelineResult result_from_json(const json& j) {
    agents::PipelineResult r;
    r.task_id = j.at("task_id").get<std::string>();
    r.refused = j.at("refused").get<bool>();
    r.finalized_roi = rect_from_json(j.at("finalized_roi"));
    r.roi_contains_target = j.at("roi_contains_target").get<bool>();
    r.trace.predictor_calls = j.at("stage1_calls").get<int>();
    r.predictor_calls = j.at("predictor_calls").get<int>();
    r.failed = j.at("failed").get<bool>();
    if (j.contains("refusal_rationale")) r.refusal_rationale = j["refusal_rationale"];
    if (j.contains("rewritten_instruction")) r.rewritten_instruction = j["rewritten_instruction"];
    if (j.contains("final_point")) r.final_point = point_from_json(j["final_point"]);
    if (j.contains("correct")) r.correct = j["correct"].get<bool>();
    if (j.contains("failure")) r.failure = j["failure"];
    return r;
}

json sweep_sample_to_json(const gbt::SweepSample& s) {
    return {{"roi_size", s.roi_size},   {"task_id", s.task_id},
            {"failed", s.failed},       {"has_target", s.has_target},
            {"contained", s.contained}, {"correct", s.correct}};
}

gbt::SweepSample sweep_sample_from_json(const json& j) {
    gbt::SweepSample s;
    s.roi_size = j.at("roi_size").get<double>();
    s.task_id = j.at("task_id").get<std::string>();
    s.failed = j.at("failed").get<bool>();
    s.has_target = j.at("has_target").get<bool>();
    s.contained = j.at("contained").get<bool>();
    s.correct = j.at("correct").get<bool>();
    return s;
}

json sim_spec_to_json(const pred::SimPredictorSpec& spec) {
    return {{"kind", pred::sim_kind_name(spec.kind)},
            {"sigma", spec.sigma},
            {"fixation_probability", spec.fixation_probability},
            {"oob_probability", spec.oob_probability},
            {"seed", spec.seed}};
}

pred::SimPredictorSpec sim_spec_from_json(const json& j) {
    pred::SimPredictorSpec spec;
    if (j.contains("kind")) spec.kind = pred::sim_kind_from_name(j["kind"].get<std::string>());
    if (j.contains("sigma")) spec.sigma = j["sigma"].get<double>();
    if (j.contains("fixation_probability"))
        spec.fixation_probability = j["fixation_probability"].get<double>();
    if (j.contains("oob_probability")) spec.oob_probability = j["oob_probability"].get<double>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    spec.validate();
    return spec;
}

json endpoint_to_json(const pred::HttpEndpoint& ep) {
    return {{"base_url", ep.base_url},     {"path", ep.path},
            {"model", ep.model},           {"api_key_env", ep.api_key_env},
            {"timeout_ms", ep.timeout_ms}, {"max_retries", ep.max_retries},
            {"backoff_ms", ep.backoff_ms}, {"prompt_template", ep.prompt_template}};
}

pred::HttpEndpoint endpoint_from_json(const json& j) {
    pred::HttpEndpoint ep;
    ep.base_url = j.at("base_url").get<std::string>();
    if (j.contains("path")) ep.path = j["path"].get<std::string>();
    if (j.contains("model")) ep.model = j["model"].get<std::string>();
    if (j.contains("api_key_env")) ep.api_key_env = j["api_key_env"].get<std::string>();
    if (j.contains("timeout_ms")) ep.timeout_ms = j["timeout_ms"].get<int>();
    if (j.contains("max_retries")) ep.max_retries = j["max_retries"].get<int>();
    if (j.contains("backoff_ms")) ep.backoff_ms = j["backoff_ms"].get<int>();
    if (j.contains("prompt_template")) ep.prompt_template = j["prompt_template"].get<std::string>();
    return ep;
}

json predictor_spec_to_json(const agents::PredictorSpec& spec) {
    if (spec.backend == agents::PredictorSpec::Backend::Http) {
        json j = endpoint_to_json(spec.http);
        j["backend"] = "http";
        return j;
    }
    json j = sim_spec_to_json(spec.sim);
    j["backend"] = "sim";
    return j;
}

agents::PredictorSpec predictor_spec_from_json(const json& j) {
    agents::PredictorSpec spec;
    const std::string backend = j.value("backend", "sim");
    if (backend == "http") {
        spec.backend = agents::PredictorSpec::Backend::Http;
        spec.http = endpoint_from_json(j);
    } else if (backend == "sim") {
        spec.backend = agents::PredictorSpec::Backend::Sim;
        spec.sim = sim_spec_from_json(j);
    } else {
        throw ValidationError("predictor spec: unknown backend '" + backend + "'");
    }
    return spec;
}

json pipeline_config_to_json(const agents::PipelineConfig& cfg) {
    json j = {{"refusal",
               {{"enabled", cfg.refusal.enabled},
                {"variant", prompts::refusal_variant_name(cfg.refusal.variant)},
                {"scaling", cfg.refusal.scaling}}},
              {"zoom", params_to_json(cfg.zoom)},
              {"mode", zoom::zoom_mode_name(cfg.mode)},
              {"rewrite", prompts::rewrite_strategy_name(cfg.rewrite)},
              {"scale_factor", cfg.scale_factor},
              {"stage1", predictor_spec_to_json(cfg.stage1)},
              {"stage2", predictor_spec_to_json(cfg.stage2)},
              {"seed", cfg.seed}};
    if (cfg.refusal_endpoint) j["refusal_endpoint"] = endpoint_to_json(*cfg.refusal_endpoint);
    if (cfg.rewrite_endpoint) j["rewrite_endpoint"] = endpoint_to_json(*cfg.rewrite_endpoint);
    return j;
}

agents::PipelineConfig pipeline_config_from_json(const json& j) {
    agents::PipelineConfig cfg;
    if (j.contains("refusal")) {
        const json& r = j["refusal"];
        if (r.contains("enabled")) cfg.refusal.enabled = r["enabled"].get<bool>();
        if (r.contains("variant"))
            cfg.refusal.variant = prompts::refusal_variant_from_name(r["variant"].get<std::string>());
        if (r.contains("scaling")) cfg.refusal.scaling = r["scaling"].get<int>();
    }
    if (j.contains("zoom")) cfg.zoom = params_from_json(j["zoom"]);
    if (j.contains("mode")) cfg.mode = zoom::zoom_mode_from_name(j["mode"].get<std::string>());
    if (j.contains("rewrite"))
        cfg.rewrite = prompts::rewrite_strategy_from_name(j["rewrite"].get<std::string>());
    if (j.contains("scale_factor")) cfg.scale_factor = j["scale_factor"].get<int>();
    if (j.contains("stage1")) cfg.stage1 = predictor_spec_from_json(j["stage1"]);
    if (j.contains("stage2")) cfg.stage2 = predictor_spec_from_json(j["stage2"]);
    if (j.contains("refusal_endpoint"))
        cfg.refusal_endpoint = endpoint_from_json(j["refusal_endpoint"]);
    if (j.contains("rewrite_endpoint"))
        cfg.rewrite_endpoint = endpoint_from_json(j["rewrite_endpoint"]);
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

}  // namespace groundkit::serde
