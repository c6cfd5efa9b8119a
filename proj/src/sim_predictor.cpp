#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "groundkit/errors.hpp"
#include "groundkit/predictor.hpp"
#include "groundkit/rng.hpp"

namespace groundkit::pred {

namespace {

// Stream domains; fixed constants keep generated sequences stable even if
// predictor kinds are added later.
enum : std::uint64_t {
    kDomChoice = 1,  // branch probabilities (fixation / oob)
    kDomNoise = 2,   // gaussian offsets
    kDomOob = 3,     // synthetic out-of-bounds points
    kDomDrift = 4,   // per-task drift direction
};

geom::Point to_local(const geom::Point& global, const geom::Rect& crop, double scale) {
    return {(global.x - crop.x_min) * scale, (global.y - crop.y_min) * scale};
}

}  // namespace

void SimPredictorSpec::validate() const {
    if (sigma < 0.0) throw ValidationError("sim predictor: sigma must be >= 0");
    if (fixation_probability < 0.0 || fixation_probability > 1.0)
        throw ValidationError("sim predictor: fixation_probability outside [0,1]");
    if (oob_probability < 0.0 || oob_probability > 1.0)
        throw ValidationError("sim predictor: oob_probability outside [0,1]");
}

const char* sim_kind_name(SimKind kind) {
    switch (kind) {
        case SimKind::Oracle: return "oracle";
        case SimKind::Noisy: return "noisy";
        case SimKind::Fixating: return "fixating";
        case SimKind::OobEmitter: return "oob_emitter";
        case SimKind::Drifting: return "drifting";
    }
    return "oracle";
}

SimKind sim_kind_from_name(const std::string& name) {
    for (SimKind k : {SimKind::Oracle, SimKind::Noisy, SimKind::Fixating, SimKind::OobEmitter,
                      SimKind::Drifting}) {
        if (name == sim_kind_name(k)) return k;
    }
    throw ValidationError("unknown simulated predictor kind: " + name);
}

SimPredictor::SimPredictor(SimPredictorSpec spec, SimulatedWorld world)
    : spec_(spec), world_(std::move(world)) {
    spec_.validate();
    if (!world_.bounds.valid()) throw ValidationError("sim predictor: empty world bounds");
}

PredictorCaps SimPredictor::caps() const {
    return {std::string("sim:") + sim_kind_name(spec_.kind), true, false};
}

geom::Point SimPredictor::predict(const PredictQuery& q) {
    const geom::Point target = world_.target.center();

    switch (spec_.kind) {
        case SimKind::Oracle:
            return to_local(target, q.crop, q.scale);

        case SimKind::Noisy: {
            auto noise = rng::Stream::keyed(spec_.seed, q.task_id, kDomNoise, q.step);
            const auto [dx, dy] = noise.gaussian_pair();
            const geom::Point g{target.x + dx * spec_.sigma, target.y + dy * spec_.sigma};
            return to_local(g, q.crop, q.scale);
        }

        case SimKind::Fixating: {
            auto choice = rng::Stream::keyed(spec_.seed, q.task_id, kDomChoice, q.step);
            geom::Point aim = target;
            if (!world_.distractors.empty() && choice.uniform() < spec_.fixation_probability) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& d : world_.distractors) {
                    const double dist = geom::euclidean_dist(d, target);
                    if (dist < best) {
                        best = dist;
                        aim = d;
                    }
                }
            }
            if (spec_.sigma > 0.0) {
                auto noise = rng::Stream::keyed(spec_.seed, q.task_id, kDomNoise, q.step);
                const auto [dx, dy] = noise.gaussian_pair();
                aim = {aim.x + dx * spec_.sigma, aim.y + dy * spec_.sigma};
            }
            return to_local(aim, q.crop, q.scale);
        }

        case SimKind::OobEmitter: {
            auto choice = rng::Stream::keyed(spec_.seed, q.task_id, kDomChoice, q.step);
            if (choice.uniform() < spec_.oob_probability) {
                // Fabricate a point strictly outside the crop extent, the way
                // a confabulating model emits coordinates past the image edge.
                const double w = q.crop.width() * q.scale;
                const double h = q.crop.height() * q.scale;
                auto oob = rng::Stream::keyed(spec_.seed, q.task_id, kDomOob, q.step);
                const std::uint64_t side = oob.below(4);
                const double along = oob.uniform();
                const double past = 1.0 + oob.uniform(0.05, 0.45);
                switch (side) {
                    case 0: return {-past * (w + 1.0), along * h};
                    case 1: return {w + past * (w + 1.0), along * h};
                    case 2: return {along * w, -past * (h + 1.0)};
                    default: return {along * w, h + past * (h + 1.0)};
                }
            }
            return to_local(target, q.crop, q.scale);
        }

        case SimKind::Drifting: {
            // Bias grows linearly with each call; the direction is fixed per
            // task so the model walks away from the target instead of
            // oscillating around it.
            auto dir = rng::Stream::keyed(spec_.seed, q.task_id, kDomDrift, 0);
            const double angle = dir.uniform(0.0, 2.0 * std::numbers::pi);
            const double mag = spec_.sigma * double(q.step + 1);
            const geom::Point g{target.x + std::cos(angle) * mag,
                                target.y + std::sin(angle) * mag};
            return to_local(g, q.crop, q.scale);
        }
    }
    return to_local(target, q.crop, q.scale);
}

ReplayPredictor::ReplayPredictor(std::vector<geom::Point> recorded_locals)
    : recorded_(std::move(recorded_locals)) {}

PredictorCaps ReplayPredictor::caps() const { return {"replay", true, false}; }

geom::Point ReplayPredictor::predict(const PredictQuery& q) {
    if (q.step < 0 || std::size_t(q.step) >= recorded_.size()) {
        throw ReplayExhausted("replay step " + std::to_string(q.step) + " past recorded trace of " +
                              std::to_string(recorded_.size()) + " steps");
    }
    return recorded_[std::size_t(q.step)];
}

}  // namespace groundkit::pred
