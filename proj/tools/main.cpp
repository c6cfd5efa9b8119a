#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "groundkit/cli.hpp"

namespace {

using groundkit::cli::Options;

// Flags shared by every run-producing subcommand.
void add_common(CLI::App* cmd, Options& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--dataset", opts.dataset_path, "task JSONL file");
    cmd->add_option("--synthetic", opts.synthetic_count, "generate N synthetic tasks instead");
    cmd->add_option("--infeasible", opts.infeasible_fraction,
                    "fraction of synthetic tasks without a target");
    cmd->add_option("--out", opts.out_dir, "run directory to write");
    cmd->add_option("--seed", opts.seed, "override every seed in the config")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--workers", opts.workers, "parallel task workers");
    cmd->add_option("--mode", opts.mode,
                    "zoom mode: bidirectional | unidirectional | symmetric_baseline");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"groundkit: iterative region-of-interest grounding toolkit"};
    app.require_subcommand(1);

    Options opts;
    std::string report_dir;

    CLI::App* ground = app.add_subcommand("ground", "resolve one task to a click point");
    add_common(ground, opts);
    ground->add_option("--index", opts.task_index, "task index within the dataset");
    ground->add_option("--image", opts.image_path, "PNG to ground against");
    ground->add_option("--instruction", opts.instruction, "what to locate");
    ground->add_option("--target", opts.target_bbox, "ground-truth bbox x0,y0,x1,y1");

    CLI::App* bench = app.add_subcommand("bench", "run the pipeline over a dataset");
    add_common(bench, opts);
    bench->add_option("--roi-size", opts.roi_sizes, "final ROI side length override");
    bench->add_option("--pruning", opts.pruning, "zoom-in pruning rate override");
    bench->add_option("--scale", opts.scale, "stage-2 upscale factor override");

    CLI::App* sweep = app.add_subcommand("sweep", "containment vs final ROI size");
    add_common(sweep, opts);
    sweep->add_option("--roi-sizes", opts.roi_sizes, "comma-separated ROI side lengths");
    sweep->add_flag("--zoom", opts.sweep_zoom, "sweep the zoom policy instead of one-shot");

    CLI::App* ablate = app.add_subcommand("ablate", "matched-seed design comparisons");
    add_common(ablate, opts);
    ablate->add_option("--ablation", opts.ablation,
                       "bidirectional_vs_unidirectional | asymmetric_vs_symmetric | "
                       "pruning_rates | scaling_factors");

    CLI::App* report = app.add_subcommand("report", "verify and reprint a stored run");
    report->add_option("store", report_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (ground->parsed()) return groundkit::cli::run_ground(opts, std::cout, std::cerr);
    if (bench->parsed()) return groundkit::cli::run_bench(opts, std::cout, std::cerr);
    if (sweep->parsed()) return groundkit::cli::run_sweep(opts, std::cout, std::cerr);
    if (ablate->parsed()) return groundkit::cli::run_ablate(opts, std::cout, std::cerr);
    if (report->parsed()) return groundkit::cli::run_report(report_dir, std::cout, std::cerr);
    return 1;
}
