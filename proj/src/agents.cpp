#include <algorithm>
#include <cctype>
#include <chrono>
#include <nlohmann/json.hpp>

#include "groundkit/agents.hpp"
#include "groundkit/errors.hpp"

namespace groundkit::agents {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// First parseable JSON object in the reply; fenced blocks take priority.
std::optional<nlohmann::json> extract_json_object(const std::string& text) {
    auto scan = [](const std::string& s) -> std::optional<nlohmann::json> {
        for (std::size_t i = s.find('{'); i != std::string::npos; i = s.find('{', i + 1)) {
            for (std::size_t j = s.rfind('}'); j != std::string::npos && j > i;
                 j = (j == 0 ? std::string::npos : s.rfind('}', j - 1))) {
                nlohmann::json obj = nlohmann::json::parse(s.substr(i, j - i + 1), nullptr, false);
                if (obj.is_object()) return obj;
            }
        }
        return std::nullopt;
    };

    const std::size_t fence = text.find("```");
    if (fence != std::string::npos) {
        std::size_t body = text.find('\n', fence);
        if (body != std::string::npos) {
            const std::size_t close = text.find("```", body);
            if (close != std::string::npos) {
                if (auto obj = scan(text.substr(body, close - body))) return obj;
            }
        }
    }
    return scan(text);
}

std::string lowercase_trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

// Drops a surrounding markdown fence, if any, and trims the result.
std::string strip_fences(const std::string& text) {
    std::string s = text;
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    if (s.rfind("```", 0) == 0) {
        const std::size_t nl = s.find('\n');
        s = nl == std::string::npos ? std::string() : s.substr(nl + 1);
        const std::size_t close = s.rfind("```");
        if (close != std::string::npos) s = s.substr(0, close);
        s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
        s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    }
    return s;
}

}  // namespace

std::unique_ptr<pred::Predictor> make_predictor(const PredictorSpec& spec,
                                                const pred::SimulatedWorld& world) {
    if (spec.backend == PredictorSpec::Backend::Http) return pred::make_http_predictor(spec.http);
    return std::make_unique<pred::SimPredictor>(spec.sim, world);
}

void PipelineConfig::validate() const {
    zoom.validate();
    if (scale_factor < 1 || scale_factor > 4)
        throw ValidationError("pipeline config: scale_factor must be 1..4");
    if (refusal.enabled && !refusal_endpoint)
        throw ValidationError("pipeline config: refusal enabled but no endpoint configured");
    if (refusal.scaling < 1 || refusal.scaling > 3)
        throw ValidationError("pipeline config: refusal scaling must be 1..3");
    if (rewrite != prompts::RewriteStrategy::Raw && !rewrite_endpoint)
        throw ValidationError("pipeline config: rewrite strategy needs an endpoint");
    if (stage1.backend == PredictorSpec::Backend::Sim) stage1.sim.validate();
    if (stage2.backend == PredictorSpec::Backend::Sim) stage2.sim.validate();
}

FeasibilityVerdict check_feasibility(const img::Raster& image, const std::string& instruction,
                                     prompts::RefusalVariant variant, int scaling,
                                     const pred::HttpEndpoint& endpoint) {
    const img::Raster* shown = &image;
    img::Raster upscaled;
    if (scaling > 1) {
        upscaled = img::upscale_bicubic(image, scaling);
        shown = &upscaled;
    }

    const std::string reply = pred::chat_complete(
        endpoint, {pred::ChatPart::from_text(std::string(prompts::refusal_template(variant))),
                   pred::ChatPart::from_text(instruction),
                   pred::ChatPart::from_png(img::encode_png(*shown))});

    FeasibilityVerdict verdict;
    const auto obj = extract_json_object(reply);
    if (!obj || !obj->contains("answer") || !(*obj)["answer"].is_string()) {
        verdict.parse_failed = true;
        return verdict;  // default: proceed
    }
    const std::string answer = lowercase_trim((*obj)["answer"].get<std::string>());
    if (answer == "no") verdict.proceed = false;
    else if (answer != "yes") verdict.parse_failed = true;  // still proceed
    if (obj->contains("reasoning") && (*obj)["reasoning"].is_string())
        verdict.rationale = (*obj)["reasoning"].get<std::string>();
    return verdict;
}

std::string rewrite_instruction(const img::Raster& crop, const std::string& raw_instruction,
                                prompts::RewriteStrategy strategy,
                                const pred::HttpEndpoint& endpoint) {
    if (strategy == prompts::RewriteStrategy::Raw)
        throw ValidationError("rewrite_instruction: strategy 'raw' makes no model call");

    const std::string prompt = prompts::render_rewrite(strategy, raw_instruction);
    const std::string reply = pred::chat_complete(
        endpoint,
        {pred::ChatPart::from_text(prompt), pred::ChatPart::from_png(img::encode_png(crop))});

    if (strategy == prompts::RewriteStrategy::StructuredOutput ||
        strategy == prompts::RewriteStrategy::Hybrid) {
        const auto obj = extract_json_object(reply);
        if (obj && obj->contains("clarified_instruction") && obj->contains("element_description") &&
            (*obj)["clarified_instruction"].is_string() &&
            (*obj)["element_description"].is_string()) {
            return (*obj)["clarified_instruction"].get<std::string>() + " " +
                   (*obj)["element_description"].get<std::string>();
        }
        return raw_instruction;  // degrade to the baseline, never abort
    }
    return strip_fences(reply);
}

geom::Point map_crop_to_global(const geom::Point& p_local, const geom::Rect& crop_rect,
                               double scale_factor) {
    return {crop_rect.x_min + p_local.x / scale_factor, crop_rect.y_min + p_local.y / scale_factor};
}

PipelineResult run_pipeline(const gbt::GroundingTask& task, const PipelineConfig& config) {
    config.validate();
    const auto t_total = Clock::now();

    PipelineResult result;
    result.task_id = task.id;

    gbt::TaskImage image(task, config.seed);
    const pred::SimulatedWorld world = gbt::build_world(task, config.seed);

    // Stage 0: feasibility gate.
    if (config.refusal.enabled) {
        const auto t0 = Clock::now();
        try {
            const FeasibilityVerdict verdict =
                check_feasibility(image.raster(), task.instruction, config.refusal.variant,
                                  config.refusal.scaling, *config.refusal_endpoint);
            result.refusal_rationale = verdict.rationale;
            if (!verdict.proceed) {
                result.refused = true;
                result.ms_stage0 = ms_since(t0);
                result.ms_total = ms_since(t_total);
                return result;
            }
        } catch (const std::exception& e) {
            result.failed = true;
            result.failure = std::string("stage0: ") + e.what();
            result.ms_stage0 = ms_since(t0);
            result.ms_total = ms_since(t_total);
            return result;
        }
        result.ms_stage0 = ms_since(t0);
    }

    // Stage 1: ROI search.
    const auto t1 = Clock::now();
    zoom::GroundingContext ctx;
    ctx.task_id = task.id;
    ctx.instruction = task.instruction;
    ctx.bounds = image.bounds();
    try {
        const auto stage1 = make_predictor(config.stage1, world);
        if (stage1->caps().needs_pixels) ctx.image = &image.raster();
        result.trace = zoom::run_zoom(ctx, *stage1, config.zoom, config.mode);
        result.finalized_roi = zoom::finalize(result.trace, config.zoom, ctx.bounds);
    } catch (const std::exception& e) {
        result.failed = true;
        result.failure = std::string("stage1: ") + e.what();
        result.ms_stage1 = ms_since(t1);
        result.ms_total = ms_since(t_total);
        return result;
    }
    result.predictor_calls = result.trace.predictor_calls;
    if (result.trace.failed) {
        result.failed = true;
        result.failure = "stage1: " + result.trace.failure;
        result.ms_stage1 = ms_since(t1);
        result.ms_total = ms_since(t_total);
        return result;
    }
    if (task.target)
        result.roi_contains_target = geom::is_inside(task.target->center(), result.finalized_roi);
    result.ms_stage1 = ms_since(t1);

    // Stage 2: scale, rewrite, final grounding.
    const auto t2 = Clock::now();
    try {
        const geom::Rect grid = geom::grid_crop_rect(result.finalized_roi, ctx.bounds);
        const auto stage2 = make_predictor(config.stage2, world);
        const bool wants_pixels =
            stage2->caps().needs_pixels || config.rewrite != prompts::RewriteStrategy::Raw;

        img::Raster scaled;
        if (wants_pixels) {
            const img::Raster cropped = img::crop(image.raster(), grid);
            scaled = config.scale_factor == 1 ? cropped
                                              : img::upscale_bicubic(cropped, config.scale_factor);
        }

        result.rewritten_instruction =
            config.rewrite == prompts::RewriteStrategy::Raw
                ? task.instruction
                : rewrite_instruction(scaled, task.instruction, config.rewrite,
                                      *config.rewrite_endpoint);

        pred::PredictQuery query;
        query.instruction = result.rewritten_instruction;
        query.crop = grid;
        query.scale = config.scale_factor;
        query.task_id = task.id;
        query.step = result.trace.predictor_calls;  // continue the per-task call count
        if (stage2->caps().needs_pixels) query.pixels = &scaled;

        geom::Point local = stage2->predict(query);
        ++result.predictor_calls;
        // The final answer must land in the crop the model actually saw.
        local = geom::clamp_point(local, {0.0, 0.0, grid.width() * config.scale_factor,
                                          grid.height() * config.scale_factor});
        result.final_point = map_crop_to_global(local, grid, config.scale_factor);
        if (task.target) result.correct = img::point_in_region(*result.final_point, *task.target);
    } catch (const std::exception& e) {
        result.failed = true;
        result.failure = std::string("stage2: ") + e.what();
    }
    result.ms_stage2 = ms_since(t2);
    result.ms_total = ms_since(t_total);
    return result;
}

}  // namespace groundkit::agents
