#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "groundkit/dataset.hpp"
#include "groundkit/errors.hpp"
#include "groundkit/rng.hpp"

namespace groundkit::gbt {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(int line_no, const std::string& field, const std::string& why) {
    throw ValidationError("dataset line " + std::to_string(line_no) + ": field '" + field + "' " +
                          why);
}

geom::Rect rect_from_json(const json& arr, int line_no, const std::string& field) {
    if (!arr.is_array() || arr.size() != 4 || !std::all_of(arr.begin(), arr.end(), [](const json& v) {
            return v.is_number();
        }))
        bad_field(line_no, field, "must be [x_min, y_min, x_max, y_max]");
    geom::Rect r{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
                 arr[3].get<double>()};
    if (!r.valid()) bad_field(line_no, field, "is not a valid rectangle");
    return r;
}

// Resolutions sampled by the synthetic generator; spans laptop panels up to
// 6016x3384 so size-dependent behavior gets exercised.
constexpr std::pair<int, int> kScreenSizes[] = {
    {1920, 1080}, {2160, 1440}, {2560, 1440}, {2560, 1600}, {2560, 1664},
    {2880, 1800}, {2992, 1870}, {3456, 2160}, {3456, 2234}, {3840, 1080},
    {5120, 1440}, {3840, 2160}, {5120, 2880}, {6016, 3384},
};

constexpr const char* kApplications[] = {"editor", "browser", "ide", "cad", "terminal"};

enum : std::uint64_t { kDomWorld = 101, kDomTask = 102 };

}  // namespace

GroundingTask task_from_json_line(const std::string& line, int line_no) {
    const json obj = json::parse(line, nullptr, false);
    if (!obj.is_object()) bad_field(line_no, "(record)", "is not a JSON object");

    GroundingTask task;
    if (!obj.contains("id") || !obj["id"].is_string() || obj["id"].get<std::string>().empty())
        bad_field(line_no, "id", "must be a non-empty string");
    task.id = obj["id"].get<std::string>();

    if (obj.contains("image_path")) {
        if (!obj["image_path"].is_string()) bad_field(line_no, "image_path", "must be a string");
        task.image_path = obj["image_path"].get<std::string>();
    }

    if (!obj.contains("instruction") || !obj["instruction"].is_string())
        bad_field(line_no, "instruction", "must be a string");
    task.instruction = obj["instruction"].get<std::string>();

    if (obj.contains("feasible")) {
        if (!obj["feasible"].is_boolean()) bad_field(line_no, "feasible", "must be a boolean");
        task.feasible = obj["feasible"].get<bool>();
    }

    if (obj.contains("target") && !obj["target"].is_null()) {
        const json& t = obj["target"];
        if (!t.is_object()) bad_field(line_no, "target", "must be an object");
        if (t.contains("bbox")) {
            task.target = img::TargetRegion::from_bbox(rect_from_json(t["bbox"], line_no, "target.bbox"));
        } else if (t.contains("polygon")) {
            const json& poly = t["polygon"];
            if (!poly.is_array() || poly.size() < 3)
                bad_field(line_no, "target.polygon", "needs at least 3 vertices");
            std::vector<geom::Point> pts;
            for (const json& v : poly) {
                if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                    bad_field(line_no, "target.polygon", "vertices must be [x, y] pairs");
                pts.push_back({v[0].get<double>(), v[1].get<double>()});
            }
            task.target = img::TargetRegion::from_polygon(std::move(pts));
        } else {
            bad_field(line_no, "target", "needs either bbox or polygon");
        }
    }
    if (task.feasible && !task.target)
        bad_field(line_no, "target", "is required when feasible=true");

    if (!obj.contains("metadata") || !obj["metadata"].is_object())
        bad_field(line_no, "metadata", "must be an object");
    const json& meta = obj["metadata"];
    if (meta.contains("application")) {
        if (!meta["application"].is_string())
            bad_field(line_no, "metadata.application", "must be a string");
        task.application = meta["application"].get<std::string>();
    }
    if (!meta.contains("resolution") || !meta["resolution"].is_array() ||
        meta["resolution"].size() != 2 || !meta["resolution"][0].is_number_integer() ||
        !meta["resolution"][1].is_number_integer())
        bad_field(line_no, "metadata.resolution", "must be [width, height]");
    task.resolution = {meta["resolution"][0].get<int>(), meta["resolution"][1].get<int>()};
    if (!task.resolution.valid())
        bad_field(line_no, "metadata.resolution", "must be positive");
    if (meta.contains("group")) {
        if (!meta["group"].is_string()) bad_field(line_no, "metadata.group", "must be a string");
        task.group = meta["group"].get<std::string>();
    }

    if (task.target) {
        const geom::Rect extent = task.target->bounding_rect();
        if (extent.x_min < 0 || extent.y_min < 0 || extent.x_max > task.resolution.width ||
            extent.y_max > task.resolution.height)
            bad_field(line_no, "target", "extends past metadata.resolution");
    }
    return task;
}

std::string task_to_json_line(const GroundingTask& task) {
    json obj;
    obj["id"] = task.id;
    if (!task.image_path.empty()) obj["image_path"] = task.image_path;
    obj["instruction"] = task.instruction;
    obj["feasible"] = task.feasible;
    if (task.target) {
        if (task.target->kind == img::TargetRegion::Kind::Bbox) {
            const auto& b = task.target->bbox;
            obj["target"] = {{"bbox", {b.x_min, b.y_min, b.x_max, b.y_max}}};
        } else {
            json poly = json::array();
            for (const auto& p : task.target->polygon) poly.push_back({p.x, p.y});
            obj["target"] = {{"polygon", poly}};
        }
    }
    obj["metadata"] = {{"application", task.application},
                       {"resolution", {task.resolution.width, task.resolution.height}},
                       {"group", task.group}};
    return obj.dump();
}

std::vector<GroundingTask> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset: " + path);

    std::vector<GroundingTask> tasks;
    std::unordered_set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        GroundingTask task = task_from_json_line(line, line_no);
        if (!seen.insert(task.id).second)
            bad_field(line_no, "id", "duplicates '" + task.id + "'");
        tasks.push_back(std::move(task));
    }
    return tasks;
}

std::vector<GroundingTask> make_synthetic_dataset(int count, std::uint64_t seed,
                                                  double infeasible_fraction) {
    if (count <= 0) throw ValidationError("synthetic dataset: count must be positive");
    if (infeasible_fraction < 0.0 || infeasible_fraction > 1.0)
        throw ValidationError("synthetic dataset: infeasible_fraction outside [0,1]");

    std::vector<GroundingTask> tasks;
    tasks.reserve(count);
    for (int i = 0; i < count; ++i) {
        GroundingTask task;
        task.id = "syn-" + std::to_string(i);
        auto st = rng::Stream::keyed(seed, task.id, kDomTask, 0);

        const auto [w, h] = kScreenSizes[st.below(std::size(kScreenSizes))];
        task.resolution = {w, h};
        task.application = kApplications[st.below(std::size(kApplications))];
        task.group = task.application;
        task.feasible = st.uniform() >= infeasible_fraction;
        task.instruction = task.feasible ? "click the highlighted control in " + task.application
                                         : "click the control that does not exist";

        if (task.feasible) {
            // Keep the box fully on screen with a margin so noisy predictors
            // still have in-bounds mass around the center.
            const double bw = st.uniform(30.0, 120.0);
            const double bh = st.uniform(20.0, 90.0);
            const double x = st.uniform(bw, w - 2.0 * bw);
            const double y = st.uniform(bh, h - 2.0 * bh);
            task.target = img::TargetRegion::from_bbox({x, y, x + bw, y + bh});
        }
        tasks.push_back(std::move(task));
    }
    return tasks;
}

pred::SimulatedWorld build_world(const GroundingTask& task, std::uint64_t seed) {
    pred::SimulatedWorld world;
    world.bounds = task.resolution;
    if (task.target) {
        world.target = *task.target;
    } else {
        // Infeasible tasks have nothing to aim at; park the dummy target at
        // the screen center so simulated predictors stay well defined.
        const geom::Point c = task.resolution.as_rect().center();
        world.target = img::TargetRegion::from_bbox({c.x - 5, c.y - 5, c.x + 5, c.y + 5});
    }

    auto st = rng::Stream::keyed(seed, task.id, kDomWorld, 0);
    const int n_distractors = 5;
    for (int i = 0; i < n_distractors; ++i) {
        world.distractors.push_back({st.uniform(0.0, double(world.bounds.width)),
                                     st.uniform(0.0, double(world.bounds.height))});
    }
    return world;
}

TaskImage::TaskImage(const GroundingTask& task, std::uint64_t seed)
    : task_(task), seed_(seed), bounds_(task.resolution) {}

const img::Raster& TaskImage::raster() {
    if (loaded_) return cache_;
    if (!task_.image_path.empty()) {
        cache_ = img::load_png(task_.image_path);
        bounds_ = cache_.bounds();
    } else {
        cache_ = img::Raster::filled(bounds_.width, bounds_.height, 235, 238, 241);
        const pred::SimulatedWorld world = build_world(task_, seed_);
        auto fill_box = [&](const geom::Rect& r, std::uint8_t cr, std::uint8_t cg,
                            std::uint8_t cb) {
            const int x0 = std::max(0, int(std::floor(r.x_min)));
            const int y0 = std::max(0, int(std::floor(r.y_min)));
            const int x1 = std::min(bounds_.width, int(std::ceil(r.x_max)));
            const int y1 = std::min(bounds_.height, int(std::ceil(r.y_max)));
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    std::uint8_t* px = cache_.at(x, y);
                    px[0] = cr;
                    px[1] = cg;
                    px[2] = cb;
                }
            }
        };
        for (const auto& d : world.distractors)
            fill_box({d.x - 8, d.y - 8, d.x + 8, d.y + 8}, 120, 128, 136);
        if (task_.target) fill_box(task_.target->bounding_rect(), 30, 110, 210);
    }
    loaded_ = true;
    return cache_;
}

}  // namespace groundkit::gbt
