#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "groundkit/geometry.hpp"
#include "groundkit/imaging.hpp"

namespace groundkit::pred {

struct PredictorCaps {
    std::string name;
    bool supports_concurrency = true;
    // Backends that work on geometry alone (simulated, replay) leave this
    // false so batch drivers can skip rasterizing crops entirely.
    bool needs_pixels = false;
};

// One prediction request. `crop` is the grid-snapped crop rect in the global
// frame; the predictor answers in crop-local pixels of the (possibly
// upscaled) crop raster, i.e. inside [0, crop.width()*scale] x
// [0, crop.height()*scale] when it believes the target is visible.
struct PredictQuery {
    std::string instruction;
    geom::Rect crop;
    double scale = 1.0;
    const img::Raster* pixels = nullptr;  // set only for needs_pixels backends
    std::string task_id;
    int step = 0;  // predictor-call ordinal within the task
};

class Predictor {
public:
    virtual ~Predictor() = default;
    virtual PredictorCaps caps() const = 0;
    virtual geom::Point predict(const PredictQuery& q) = 0;
};

// Extracts a coordinate from model reply text. Accepted forms, first match
// wins: a fenced or bare JSON object with numeric "x" and "y"; a
// parenthesized "(x, y)" pair; a bare "x, y" pair. Throws ParseError (with
// the raw reply attached) when nothing matches.
geom::Point parse_point_from_text(const std::string& reply);

// Desk-scale stand-in for a benchmark screenshot: a target region plus the
// distractor points a fixating model might latch onto.
struct SimulatedWorld {
    geom::ImageBounds bounds;
    img::TargetRegion target;
    std::vector<geom::Point> distractors;
};

enum class SimKind { Oracle, Noisy, Fixating, OobEmitter, Drifting };

struct SimPredictorSpec {
    SimKind kind = SimKind::Oracle;
    double sigma = 0.0;              // global-frame noise; drift step for Drifting
    double fixation_probability = 0.0;
    double oob_probability = 0.0;
    std::uint64_t seed = 0;

    void validate() const;  // throws ValidationError
};

const char* sim_kind_name(SimKind kind);
SimKind sim_kind_from_name(const std::string& name);  // throws ValidationError

// Stateless given the query: every random draw comes from a stream keyed by
// (seed, task id, step), so calls are reproducible and order-independent.
class SimPredictor : public Predictor {
public:
    SimPredictor(SimPredictorSpec spec, SimulatedWorld world);

    PredictorCaps caps() const override;
    geom::Point predict(const PredictQuery& q) override;

private:
    SimPredictorSpec spec_;
    SimulatedWorld world_;
};

// Feeds back the crop-local predictions of a recorded trace, verbatim, using
// the query's step ordinal as the index. Throws ReplayExhausted past the end.
class ReplayPredictor : public Predictor {
public:
    explicit ReplayPredictor(std::vector<geom::Point> recorded_locals);

    PredictorCaps caps() const override;
    geom::Point predict(const PredictQuery& q) override;

private:
    std::vector<geom::Point> recorded_;
};

// Remote chat-completions backend; wire details live in llm_client.hpp.
struct HttpEndpoint;
std::unique_ptr<Predictor> make_http_predictor(const HttpEndpoint& endpoint);

}  // namespace groundkit::pred
