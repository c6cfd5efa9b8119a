#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "groundkit/cli.hpp"
#include "groundkit/errors.hpp"
#include "groundkit/parallel.hpp"
#include "groundkit/serde.hpp"
#include "groundkit/store.hpp"

namespace groundkit::cli {

namespace {

using nlohmann::json;

void emit_error(std::ostream& err, const std::string& kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

// Uniform error-to-exit-code mapping for every subcommand body.
template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        emit_error(err, "validation", e.what());
        return 1;
    } catch (const IntegrityError& e) {
        emit_error(err, "integrity", e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error(err, "runtime", e.what());
        return 3;
    }
}

json load_config_json(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config: " + path);
    json cfg = json::parse(in, nullptr, false);
    if (cfg.is_discarded()) throw ValidationError("config is not valid JSON: " + path);
    return cfg;
}

agents::PipelineConfig pipeline_config(const Options& opts, const json& cfg_json) {
    agents::PipelineConfig cfg = serde::pipeline_config_from_json(cfg_json);
    if (opts.seed_set) {
        cfg.seed = opts.seed;
        cfg.stage1.sim.seed = opts.seed;
        cfg.stage2.sim.seed = opts.seed;
    }
    if (!opts.mode.empty()) cfg.mode = zoom::zoom_mode_from_name(opts.mode);
    if (opts.pruning > 0.0) cfg.zoom.delta_in = opts.pruning;
    if (opts.scale > 0) cfg.scale_factor = opts.scale;
    if (!opts.roi_sizes.empty()) cfg.zoom.s_min = std::stod(opts.roi_sizes);
    cfg.validate();
    return cfg;
}

struct DatasetHandle {
    std::vector<gbt::GroundingTask> tasks;
    std::string path;    // as recorded in the manifest
    std::string digest;
    bool synthetic = false;
};

DatasetHandle resolve_dataset(const Options& opts, std::uint64_t seed) {
    DatasetHandle handle;
    if (!opts.dataset_path.empty()) {
        handle.tasks = gbt::load_dataset(opts.dataset_path);
        handle.path = opts.dataset_path;
        handle.digest = store::fnv_digest_of_file(opts.dataset_path);
        return handle;
    }
    const int count = opts.synthetic_count > 0 ? opts.synthetic_count : 100;
    handle.tasks = gbt::make_synthetic_dataset(count, seed, opts.infeasible_fraction);
    handle.synthetic = true;
    handle.path = "dataset.jsonl";
    return handle;
}

// Synthetic datasets are persisted inside the store so a run directory is
// self-contained; the digest is taken over the written file.
void persist_dataset(DatasetHandle& handle, store::ResultStore& rs) {
    if (!handle.synthetic) return;
    std::string bytes;
    for (const auto& task : handle.tasks) bytes += gbt::task_to_json_line(task) + "\n";
    rs.write_text("dataset.jsonl", bytes);
    handle.digest = store::fnv_digest_of_bytes(bytes);
}

store::RunManifest make_manifest(const std::string& command, std::uint64_t seed, json config,
                                 const DatasetHandle& dataset) {
    store::RunManifest m;
    m.command = command;
    m.timestamp_utc = store::utc_now_iso8601();
    m.seed = seed;
    m.config = std::move(config);
    m.dataset_path = dataset.path;
    m.dataset_digest = dataset.digest;
    m.dataset_count = int(dataset.tasks.size());
    m.run_id = store::derive_run_id(m);
    return m;
}

std::string require_out_dir(const Options& opts) {
    if (opts.out_dir.empty()) throw ValidationError("--out directory is required");
    return opts.out_dir;
}

// Stage-1 traces exist only for tasks that reached the zoom loop; refused
// and stage-0/1-failed tasks leave the default (invalid) rect behind.
bool has_trace(const agents::PipelineResult& r) { return r.trace.final_roi.valid(); }

std::vector<agents::PipelineResult> run_all(const std::vector<gbt::GroundingTask>& tasks,
                                            const agents::PipelineConfig& cfg, int workers) {
    std::vector<agents::PipelineResult> results(tasks.size());
    const auto errors = run_batch(int(tasks.size()), workers, [&](int i) {
        results[std::size_t(i)] = agents::run_pipeline(tasks[std::size_t(i)], cfg);
    });
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty() && !results[i].failed) {
            results[i].task_id = tasks[i].id;
            results[i].failed = true;
            results[i].failure = errors[i];
        }
    }
    return results;
}

void write_bench_artifacts(store::ResultStore& rs, const std::vector<gbt::GroundingTask>& tasks,
                           const std::vector<agents::PipelineResult>& results,
                           const agents::PipelineConfig& cfg) {
    std::vector<json> result_lines, trace_lines;
    for (std::size_t i = 0; i < results.size(); ++i) {
        result_lines.push_back(serde::result_to_json(results[i]));
        if (has_trace(results[i])) {
            trace_lines.push_back(serde::trace_to_json(results[i].trace, results[i].task_id,
                                                       cfg.mode, tasks[i].resolution, cfg.zoom,
                                                       results[i].finalized_roi));
        }
    }
    rs.write_jsonl("results.jsonl", result_lines);
    rs.write_jsonl("traces.jsonl", trace_lines);
    rs.write_text("metrics.csv", store::metrics_csv(gbt::compute_metrics(results, tasks)));
}

std::vector<double> parse_size_list(const std::string& text) {
    std::vector<double> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) sizes.push_back(std::stod(item));
    }
    return sizes;
}

}  // namespace

int run_bench(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const json cfg_json = load_config_json(opts.config_path);
        const agents::PipelineConfig cfg = pipeline_config(opts, cfg_json);
        DatasetHandle dataset = resolve_dataset(opts, cfg.seed);

        store::ResultStore rs(require_out_dir(opts));
        persist_dataset(dataset, rs);
        json snapshot = serde::pipeline_config_to_json(cfg);
        snapshot["workers"] = opts.workers;
        const auto manifest = make_manifest("bench", cfg.seed, snapshot, dataset);
        rs.write_manifest(manifest);

        const auto results = run_all(dataset.tasks, cfg, opts.workers);
        write_bench_artifacts(rs, dataset.tasks, results, cfg);

        out << store::format_report(gbt::compute_metrics(results, dataset.tasks));
        out << "store: " << rs.dir() << "\n";
        return 0;
    });
}

int run_ground(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const json cfg_json = load_config_json(opts.config_path);
        const agents::PipelineConfig cfg = pipeline_config(opts, cfg_json);

        DatasetHandle dataset;
        if (!opts.image_path.empty()) {
            if (opts.instruction.empty())
                throw ValidationError("--instruction is required with --image");
            gbt::GroundingTask task;
            task.id = "cli";
            task.image_path = opts.image_path;
            task.instruction = opts.instruction;
            const img::Raster raster = img::load_png(opts.image_path);  // also validates the path
            task.resolution = raster.bounds();
            task.application = "cli";
            task.group = "cli";
            if (!opts.target_bbox.empty()) {
                const auto nums = parse_size_list(opts.target_bbox);
                if (nums.size() != 4)
                    throw ValidationError("--target must be x_min,y_min,x_max,y_max");
                task.target =
                    img::TargetRegion::from_bbox({nums[0], nums[1], nums[2], nums[3]});
            } else {
                task.feasible = false;
            }
            dataset.tasks.push_back(std::move(task));
        } else {
            dataset = resolve_dataset(opts, cfg.seed);
            if (opts.task_index < 0 || std::size_t(opts.task_index) >= dataset.tasks.size())
                throw ValidationError("--index is out of range");
            dataset.tasks = {dataset.tasks[std::size_t(opts.task_index)]};
        }

        store::ResultStore rs(opts.out_dir.empty() ? std::string("ground_run") : opts.out_dir);
        // The selected task is persisted on its own so the store stays
        // self-contained and report can re-verify it.
        const std::string task_bytes = gbt::task_to_json_line(dataset.tasks[0]) + "\n";
        rs.write_text("dataset.jsonl", task_bytes);
        dataset.path = "dataset.jsonl";
        dataset.digest = store::fnv_digest_of_bytes(task_bytes);
        dataset.synthetic = false;
        json snapshot = serde::pipeline_config_to_json(cfg);
        snapshot["workers"] = 1;
        const auto manifest = make_manifest("ground", cfg.seed, snapshot, dataset);
        rs.write_manifest(manifest);

        const auto results = run_all(dataset.tasks, cfg, 1);
        write_bench_artifacts(rs, dataset.tasks, results, cfg);

        const auto& r = results[0];
        if (r.failed) {
            emit_error(err, "stage", r.failure);
            out << "trace: " << rs.path("traces.jsonl") << "\n";
            return 3;
        }
        if (r.refused) {
            out << "refused: " << (r.refusal_rationale.empty() ? "(no rationale)"
                                                               : r.refusal_rationale)
                << "\n";
        } else if (r.final_point) {
            out << "point: (" << r.final_point->x << ", " << r.final_point->y << ")\n";
            out << "termination: " << zoom::termination_name(r.trace.termination) << "\n";
            if (r.correct) out << "correct: " << (*r.correct ? "true" : "false") << "\n";
        }
        out << "trace: " << rs.path("traces.jsonl") << "\n";
        return 0;
    });
}

int run_sweep(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const json cfg_json = load_config_json(opts.config_path);

        gbt::SweepConfig sweep;
        if (cfg_json.contains("sweep")) {
            const json& s = cfg_json["sweep"];
            if (s.contains("roi_sizes")) sweep.roi_sizes = s["roi_sizes"].get<std::vector<double>>();
            if (s.contains("use_zoom")) sweep.use_zoom = s["use_zoom"].get<bool>();
        }
        if (cfg_json.contains("stage1"))
            sweep.predictor = serde::predictor_spec_from_json(cfg_json["stage1"]);
        if (cfg_json.contains("zoom")) sweep.zoom = serde::params_from_json(cfg_json["zoom"]);
        if (cfg_json.contains("mode"))
            sweep.mode = zoom::zoom_mode_from_name(cfg_json["mode"].get<std::string>());
        if (cfg_json.contains("seed")) sweep.seed = cfg_json["seed"].get<std::uint64_t>();
        if (opts.seed_set) {
            sweep.seed = opts.seed;
            sweep.predictor.sim.seed = opts.seed;
        }
        if (!opts.mode.empty()) sweep.mode = zoom::zoom_mode_from_name(opts.mode);
        if (!opts.roi_sizes.empty()) sweep.roi_sizes = parse_size_list(opts.roi_sizes);
        if (opts.sweep_zoom) sweep.use_zoom = true;
        sweep.workers = opts.workers;
        sweep.validate();

        DatasetHandle dataset = resolve_dataset(opts, sweep.seed);
        store::ResultStore rs(require_out_dir(opts));
        persist_dataset(dataset, rs);

        json snapshot = {{"roi_sizes", sweep.roi_sizes},
                         {"use_zoom", sweep.use_zoom},
                         {"mode", zoom::zoom_mode_name(sweep.mode)},
                         {"zoom", serde::params_to_json(sweep.zoom)},
                         {"predictor", serde::predictor_spec_to_json(sweep.predictor)},
                         {"workers", sweep.workers}};
        const auto manifest = make_manifest("sweep", sweep.seed, snapshot, dataset);
        rs.write_manifest(manifest);

        const gbt::SweepResult result = gbt::run_sweep(sweep, dataset.tasks);

        std::vector<json> sample_lines;
        for (const auto& s : result.samples) sample_lines.push_back(serde::sweep_sample_to_json(s));
        rs.write_jsonl("samples.jsonl", sample_lines);
        rs.write_text("metrics.csv", store::sweep_csv(result.rows));
        rs.write_text("plot.json", store::sweep_plot_json(result.rows).dump(2) + "\n");

        out << store::sweep_csv(result.rows);
        out << "store: " << rs.dir() << "\n";
        return 0;
    });
}

int run_ablate(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const json cfg_json = load_config_json(opts.config_path);
        const agents::PipelineConfig cfg = pipeline_config(opts, cfg_json);
        const gbt::AblationKind kind = gbt::ablation_kind_from_name(opts.ablation);
        DatasetHandle dataset = resolve_dataset(opts, cfg.seed);

        store::ResultStore rs(require_out_dir(opts));
        persist_dataset(dataset, rs);
        json snapshot = serde::pipeline_config_to_json(cfg);
        snapshot["kind"] = gbt::ablation_kind_name(kind);
        snapshot["workers"] = opts.workers;
        const auto manifest = make_manifest("ablate", cfg.seed, snapshot, dataset);
        rs.write_manifest(manifest);

        const gbt::AblationTable table =
            gbt::run_ablation(kind, cfg, opts.workers, dataset.tasks);

        std::vector<json> result_lines;
        for (const auto& arm : table.arms) {
            for (const auto& r : arm.results) {
                json line = serde::result_to_json(r);
                line["arm"] = arm.name;
                result_lines.push_back(std::move(line));
            }
        }
        rs.write_jsonl("results.jsonl", result_lines);
        rs.write_text("metrics.csv", store::ablation_csv(table));
        rs.write_text("plot.json", store::ablation_plot_json(table).dump(2) + "\n");

        out << store::ablation_csv(table);
        out << "store: " << rs.dir() << "\n";
        return 0;
    });
}

namespace {

std::vector<gbt::GroundingTask> reload_dataset(const store::RunManifest& manifest,
                                               const std::string& store_dir) {
    namespace fs = std::filesystem;
    fs::path path(manifest.dataset_path);
    if (path.is_relative() && fs::exists(fs::path(store_dir) / path))
        path = fs::path(store_dir) / path;
    if (!fs::exists(path)) throw IntegrityError("dataset missing: " + path.string());
    if (store::fnv_digest_of_file(path.string()) != manifest.dataset_digest)
        throw IntegrityError("dataset digest mismatch for " + path.string());
    auto tasks = gbt::load_dataset(path.string());
    if (int(tasks.size()) != manifest.dataset_count)
        throw IntegrityError("dataset count changed since the run");
    return tasks;
}

void verify_bytes(const std::string& name, const std::string& stored,
                  const std::string& recomputed) {
    if (stored != recomputed)
        throw IntegrityError(name + " does not match recomputation; store is corrupt or edited");
}

std::vector<agents::PipelineResult> ordered_results(const std::vector<nlohmann::json>& lines,
                                                    const std::vector<gbt::GroundingTask>& tasks,
                                                    const std::string& arm) {
    std::vector<agents::PipelineResult> results;
    std::size_t cursor = 0;
    for (const auto& line : lines) {
        if (!arm.empty() && line.value("arm", "") != arm) continue;
        agents::PipelineResult r = serde::result_from_json(line);
        if (cursor >= tasks.size() || r.task_id != tasks[cursor].id)
            throw IntegrityError("results out of order or missing around task '" + r.task_id + "'");
        results.push_back(std::move(r));
        ++cursor;
    }
    if (cursor != tasks.size()) {
        throw IntegrityError("results incomplete: have " + std::to_string(cursor) + " of " +
                             std::to_string(tasks.size()) + " tasks" +
                             (arm.empty() ? "" : " in arm '" + arm + "'"));
    }
    return results;
}

}  // namespace

int run_report(const std::string& store_dir, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        namespace fs = std::filesystem;
        const std::string manifest_path = (fs::path(store_dir) / "manifest.json").string();
        const json manifest_json = json::parse(store::ResultStore::read_text(manifest_path),
                                               nullptr, false);
        if (manifest_json.is_discarded()) throw IntegrityError("manifest.json is not valid JSON");
        const store::RunManifest manifest = store::manifest_from_json(manifest_json);
        const auto tasks = reload_dataset(manifest, store_dir);

        const std::string metrics_path = (fs::path(store_dir) / "metrics.csv").string();
        const std::string stored_csv = store::ResultStore::read_text(metrics_path);

        if (manifest.command == "bench" || manifest.command == "ground") {
            const auto lines = store::ResultStore::read_jsonl(
                (fs::path(store_dir) / "results.jsonl").string());
            const auto results = ordered_results(lines, tasks, "");
            const auto report = gbt::compute_metrics(results, tasks);
            verify_bytes("metrics.csv", stored_csv, store::metrics_csv(report));
            out << "OK " << manifest.command << " run " << manifest.run_id << "\n";
            out << store::format_report(report);
            return 0;
        }

        if (manifest.command == "sweep") {
            const auto lines = store::ResultStore::read_jsonl(
                (fs::path(store_dir) / "samples.jsonl").string());
            std::vector<gbt::SweepSample> samples;
            for (const auto& line : lines) samples.push_back(serde::sweep_sample_from_json(line));
            const auto rows = gbt::sweep_rows_from_samples(samples);
            verify_bytes("metrics.csv", stored_csv, store::sweep_csv(rows));
            const std::string stored_plot =
                store::ResultStore::read_text((fs::path(store_dir) / "plot.json").string());
            verify_bytes("plot.json", stored_plot, store::sweep_plot_json(rows).dump(2) + "\n");
            out << "OK sweep run " << manifest.run_id << "\n" << store::sweep_csv(rows);
            return 0;
        }

        if (manifest.command == "ablate") {
            const auto lines = store::ResultStore::read_jsonl(
                (fs::path(store_dir) / "results.jsonl").string());
            std::vector<std::string> arm_order;
            for (const auto& line : lines) {
                const std::string arm = line.value("arm", "");
                if (std::find(arm_order.begin(), arm_order.end(), arm) == arm_order.end())
                    arm_order.push_back(arm);
            }
            gbt::AblationTable table;
            table.kind = gbt::ablation_kind_from_name(
                manifest.config.value("kind", std::string("pruning_rates")));
            for (const auto& arm_name : arm_order) {
                gbt::AblationArm arm;
                arm.name = arm_name;
                arm.results = ordered_results(lines, tasks, arm_name);
                arm.report = gbt::compute_metrics(arm.results, tasks);
                table.arms.push_back(std::move(arm));
            }
            verify_bytes("metrics.csv", stored_csv, store::ablation_csv(table));
            const std::string stored_plot =
                store::ResultStore::read_text((fs::path(store_dir) / "plot.json").string());
            verify_bytes("plot.json", stored_plot, store::ablation_plot_json(table).dump(2) + "\n");
            out << "OK ablate run " << manifest.run_id << "\n" << store::ablation_csv(table);
            return 0;
        }

        throw IntegrityError("manifest command '" + manifest.command + "' is not reportable");
    });
}

}  // namespace groundkit::cli
