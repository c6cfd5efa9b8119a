#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "groundkit/geometry.hpp"
#include "groundkit/imaging.hpp"
#include "groundkit/predictor.hpp"

namespace groundkit::gbt {

struct GroundingTask {
    std::string id;
    std::string image_path;  // empty: procedural raster synthesized on demand
    std::string instruction;
    std::optional<img::TargetRegion> target;
    bool feasible = true;
    // metadata
    std::string application;
    geom::ImageBounds resolution;
    std::string group;
};

// Parses one task per line. Malformed records raise ValidationError naming
// the line and offending field; ids must be unique.
std::vector<GroundingTask> load_dataset(const std::string& path);

std::string task_to_json_line(const GroundingTask& task);
GroundingTask task_from_json_line(const std::string& line, int line_no);

// Deterministic desk-scale dataset: feasible click tasks over a mix of real
// screen resolutions, with target boxes placed away from the borders.
// infeasible_fraction > 0 interleaves target-less tasks for refusal runs.
std::vector<GroundingTask> make_synthetic_dataset(int count, std::uint64_t seed,
                                                  double infeasible_fraction = 0.0);

// The simulated predictors' view of a task: target plus a handful of
// seed-derived distractor points.
pred::SimulatedWorld build_world(const GroundingTask& task, std::uint64_t seed);

// Lazy raster access so geometry-only runs never touch pixels. Synthetic
// tasks draw a flat background, a filled target box, and distractor dots.
class TaskImage {
public:
    TaskImage(const GroundingTask& task, std::uint64_t seed);

    geom::ImageBounds bounds() const { return bounds_; }
    const img::Raster& raster();

private:
    const GroundingTask& task_;
    std::uint64_t seed_;
    geom::ImageBounds bounds_;
    img::Raster cache_;
    bool loaded_ = false;
};

}  // namespace groundkit::gbt
