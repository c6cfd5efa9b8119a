#include <algorithm>
#include <cmath>

#include "groundkit/errors.hpp"
#include "groundkit/zoom.hpp"

namespace groundkit::zoom {

void ZoomParams::validate() const {
    if (!(delta_in > 0.0 && delta_in < 1.0))
        throw ValidationError("zoom params: delta_in must be in (0,1)");
    if (!(delta_out > 0.0 && delta_out < 1.0))
        throw ValidationError("zoom params: delta_out must be in (0,1)");
    if (e_max < 1) throw ValidationError("zoom params: e_max must be >= 1");
    if (!(s_min > 0.0)) throw ValidationError("zoom params: s_min must be > 0");
    if (n_stable < 2) throw ValidationError("zoom params: n_stable must be >= 2");
    if (!(eps_stable > 0.0)) throw ValidationError("zoom params: eps_stable must be > 0");
    if (max_iters < e_max + 1)
        throw ValidationError("zoom params: max_iters must be >= e_max + 1");
}

const char* zoom_mode_name(ZoomMode m) {
    switch (m) {
        case ZoomMode::Bidirectional: return "bidirectional";
        case ZoomMode::Unidirectional: return "unidirectional";
        case ZoomMode::SymmetricBaseline: return "symmetric_baseline";
    }
    return "bidirectional";
}

ZoomMode zoom_mode_from_name(const std::string& name) {
    for (ZoomMode m :
         {ZoomMode::Bidirectional, ZoomMode::Unidirectional, ZoomMode::SymmetricBaseline}) {
        if (name == zoom_mode_name(m)) return m;
    }
    throw ValidationError("unknown zoom mode: " + name);
}

const char* zoom_event_name(ZoomEvent e) {
    switch (e) {
        case ZoomEvent::ZoomIn: return "ZoomIn";
        case ZoomEvent::ZoomOut: return "ZoomOut";
        case ZoomEvent::ForcedZoomIn: return "ForcedZoomIn";
    }
    return "ZoomIn";
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::AreaThreshold: return "AreaThreshold";
        case Termination::Converged: return "Converged";
        case Termination::IterationCap: return "IterationCap";
    }
    return "AreaThreshold";
}

bool search_converged(const std::vector<geom::Point>& history, int n_stable, double eps_stable) {
    if (int(history.size()) < n_stable) return false;
    const geom::Point& latest = history.back();
    for (int k = 2; k <= n_stable; ++k) {
        const geom::Point& earlier = history[history.size() - k];
        if (geom::euclidean_dist(latest, earlier) > eps_stable) return false;
    }
    return true;
}

namespace {

// Symmetric-crop ablation: scale the ROI by (1 - delta_in) about the
// prediction, then clamp each boundary into the image.
geom::Rect recenter_scaled(const geom::Rect& r, const geom::Point& p, double delta_in,
                           const geom::ImageBounds& bounds) {
    const double half_w = r.width() * (1.0 - delta_in) / 2.0;
    const double half_h = r.height() * (1.0 - delta_in) / 2.0;
    return {std::max(0.0, p.x - half_w), std::max(0.0, p.y - half_h),
            std::min(double(bounds.width), p.x + half_w),
            std::min(double(bounds.height), p.y + half_h)};
}

}  // namespace

ZoomTrace run_zoom(const GroundingContext& task, pred::Predictor& predictor,
                   const ZoomParams& params, ZoomMode mode) {
    params.validate();
    if (!task.bounds.valid()) throw ValidationError("run_zoom: image bounds must be positive");
    const bool wants_pixels = predictor.caps().needs_pixels;
    if (wants_pixels && task.image == nullptr)
        throw ValidationError("run_zoom: predictor needs pixels but task has no raster");

    ZoomTrace trace;
    geom::Rect roi = task.bounds.as_rect();

    while (geom::get_area(roi) > params.s_min &&
           !search_converged(trace.history, params.n_stable, params.eps_stable)) {
        if (int(trace.steps.size()) >= params.max_iters) {
            trace.termination = Termination::IterationCap;
            trace.final_roi = roi;
            return trace;
        }

        // The grid-snapped crop rect is the predictor's coordinate frame.
        const geom::Rect grid = geom::grid_crop_rect(roi, task.bounds);
        img::Raster crop_raster;
        pred::PredictQuery query;
        query.instruction = task.instruction;
        query.crop = grid;
        query.scale = 1.0;
        query.task_id = task.task_id;
        query.step = trace.predictor_calls;
        if (wants_pixels) {
            crop_raster = img::crop(*task.image, grid);
            query.pixels = &crop_raster;
        }

        geom::Point local;
        try {
            local = predictor.predict(query);
        } catch (const TransportError& e) {
            trace.failed = true;
            trace.failure = e.what();
            trace.termination = Termination::IterationCap;
            trace.final_roi = roi;
            return trace;
        }
        ++trace.predictor_calls;

        ZoomStep step;
        step.index = int(trace.steps.size());
        step.roi_before = roi;
        step.local = local;
        step.in_bounds = local.x >= 0.0 && local.x <= grid.width() && local.y >= 0.0 &&
                         local.y <= grid.height();

        if (step.in_bounds) {
            // Map to the global frame; outward grid snapping can land the
            // point a fraction of a pixel outside the real ROI, so clamp.
            const geom::Point global =
                geom::clamp_point({grid.x_min + local.x, grid.y_min + local.y}, roi);
            step.global = global;
            trace.history.push_back(global);
            step.event = ZoomEvent::ZoomIn;
            step.roi_after = mode == ZoomMode::SymmetricBaseline
                                 ? recenter_scaled(roi, global, params.delta_in, task.bounds)
                                 : geom::zoom_in_asymmetric(roi, global, params.delta_in);
        } else {
            ++trace.error_count;
            const bool forced =
                mode == ZoomMode::Unidirectional || trace.error_count >= params.e_max;
            if (forced) {
                step.event = ZoomEvent::ForcedZoomIn;
                step.roi_after = geom::zoom_in_symmetric(roi, params.delta_in);
            } else {
                step.event = ZoomEvent::ZoomOut;
                step.roi_after = geom::zoom_out(roi, params.delta_out, task.bounds);
            }
        }

        roi = step.roi_after;
        trace.steps.push_back(std::move(step));
    }

    trace.termination = geom::get_area(roi) <= params.s_min ? Termination::AreaThreshold
                                                            : Termination::Converged;
    trace.final_roi = roi;
    return trace;
}

geom::Rect finalize(const geom::Rect& last_roi, const std::vector<geom::Point>& history,
                    const ZoomParams& params, const geom::ImageBounds& bounds) {
    if (search_converged(history, params.n_stable, params.eps_stable)) {
        geom::Point mean{0.0, 0.0};
        for (std::size_t k = history.size() - params.n_stable; k < history.size(); ++k) {
            mean.x += history[k].x;
            mean.y += history[k].y;
        }
        mean.x /= params.n_stable;
        mean.y /= params.n_stable;
        return geom::center_square(mean, params.s_min, bounds);
    }
    return geom::center_square(last_roi.center(), params.s_min, bounds);
}

geom::Rect finalize(const ZoomTrace& trace, const ZoomParams& params,
                    const geom::ImageBounds& bounds) {
    return finalize(trace.final_roi, trace.history, params, bounds);
}

geom::Rect static_one_shot_roi(const GroundingContext& task, pred::Predictor& predictor,
                               double size) {
    if (!(size > 0.0)) throw ValidationError("static_one_shot_roi: size must be > 0");
    if (!task.bounds.valid())
        throw ValidationError("static_one_shot_roi: image bounds must be positive");
    const bool wants_pixels = predictor.caps().needs_pixels;
    if (wants_pixels && task.image == nullptr)
        throw ValidationError("static_one_shot_roi: predictor needs pixels");

    const geom::Rect full = task.bounds.as_rect();
    pred::PredictQuery query;
    query.instruction = task.instruction;
    query.crop = full;
    query.scale = 1.0;
    query.task_id = task.task_id;
    query.step = 0;
    if (wants_pixels) query.pixels = task.image;

    const geom::Point local = predictor.predict(query);
    const geom::Point global = geom::clamp_point(local, full);
    return geom::center_square(global, size, task.bounds);
}

int max_step_bound(double initial_area, const ZoomParams& params) {
    const double grown = initial_area * std::pow(1.0 + params.delta_out, params.e_max - 1);
    int shrink_steps = 0;
    if (grown > params.s_min) {
        shrink_steps =
            int(std::ceil(std::log(params.s_min / grown) / std::log(1.0 - params.delta_in)));
    }
    return (params.e_max - 1) + std::max(0, shrink_steps);
}

}  // namespace groundkit::zoom
