#pragma once

#include <optional>
#include <string>
#include <vector>

#include "groundkit/geometry.hpp"
#include "groundkit/imaging.hpp"
#include "groundkit/predictor.hpp"

namespace groundkit::zoom {

struct ZoomParams {
    double delta_in = 0.10;   // per-step ROI reduction (pruning rate)
    double delta_out = 0.05;  // per-step ROI expansion on recovery
    int e_max = 5;            // cumulative error budget
    double s_min = 1000.0;    // stop once max(width, height) <= s_min
    int n_stable = 3;         // convergence window
    double eps_stable = 50.0;
    int max_iters = 100;      // hard safety cap, never binding in practice

    void validate() const;  // throws ValidationError
};

enum class ZoomMode { Bidirectional, Unidirectional, SymmetricBaseline };
enum class ZoomEvent { ZoomIn, ZoomOut, ForcedZoomIn };
enum class Termination { AreaThreshold, Converged, IterationCap };

const char* zoom_mode_name(ZoomMode m);
ZoomMode zoom_mode_from_name(const std::string& name);  // throws ValidationError
const char* zoom_event_name(ZoomEvent e);
const char* termination_name(Termination t);

struct ZoomStep {
    int index = 0;
    geom::Rect roi_before;
    geom::Point local;  // raw crop-local prediction, kept verbatim for replay
    bool in_bounds = false;
    std::optional<geom::Point> global;  // mapped prediction; present iff in_bounds
    ZoomEvent event = ZoomEvent::ZoomIn;
    geom::Rect roi_after;
};

struct ZoomTrace {
    std::vector<ZoomStep> steps;
    std::vector<geom::Point> history;  // in-bounds global predictions (H)
    int error_count = 0;               // cumulative out-of-bounds counter (E)
    Termination termination = Termination::AreaThreshold;
    geom::Rect final_roi;
    int predictor_calls = 0;
    bool failed = false;  // predictor transport failure aborted the run
    std::string failure;
};

// True once the window is full and the most recent point lies within
// eps_stable of each of the previous n_stable-1 points.
bool search_converged(const std::vector<geom::Point>& history, int n_stable, double eps_stable);

// Everything run_zoom needs to know about one task. `image` may stay null
// unless the predictor declares needs_pixels.
struct GroundingContext {
    std::string task_id;
    std::string instruction;
    geom::ImageBounds bounds;
    const img::Raster* image = nullptr;
};

// The closed-loop ROI search. Starts from the full image; shrinks toward
// in-bounds predictions, and on out-of-bounds predictions either expands
// (bounded by e_max) or force-shrinks, depending on the mode.
ZoomTrace run_zoom(const GroundingContext& task, pred::Predictor& predictor,
                   const ZoomParams& params, ZoomMode mode);

// Fixed-size output crop: centered on the mean of the stable points when the
// history converged, else on the last ROI's center.
geom::Rect finalize(const geom::Rect& last_roi, const std::vector<geom::Point>& history,
                    const ZoomParams& params, const geom::ImageBounds& bounds);
geom::Rect finalize(const ZoomTrace& trace, const ZoomParams& params,
                    const geom::ImageBounds& bounds);

// Non-iterative baseline: one full-image prediction, clamped into the image,
// expanded to a size x size square.
geom::Rect static_one_shot_roi(const GroundingContext& task, pred::Predictor& predictor,
                               double size);

// Worst-case step count: at most e_max-1 expansions of (1+delta_out) each,
// and every other step shrinks get_area by at least (1-delta_in).
int max_step_bound(double initial_area, const ZoomParams& params);

}  // namespace groundkit::zoom
