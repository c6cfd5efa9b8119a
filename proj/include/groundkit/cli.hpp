#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace groundkit::cli {

// Parsed command-line surface shared by the subcommands. The binary in
// tools/ fills this from flags; tests call the run_* functions directly.
struct Options {
    std::string config_path;
    std::string dataset_path;
    int synthetic_count = 0;          // dataset substitute when no path given
    double infeasible_fraction = 0.0;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 1;
    std::string mode;                 // zoom mode override
    std::string roi_sizes;            // bench: one size; sweep: comma list
    double pruning = 0.0;             // delta_in override
    int scale = 0;                    // stage-2 upscale override
    std::string ablation = "pruning_rates";
    bool sweep_zoom = false;          // sweep the zoom policy instead of static
    // ground-only inputs
    int task_index = 0;
    std::string image_path;
    std::string instruction;
    std::string target_bbox;          // "x0,y0,x1,y1" (optional ground truth)
};

// Each returns a process exit code: 0 success, 1 validation, 2 integrity,
// 3 runtime/transport. Machine-readable errors go to err as one JSON line.
int run_ground(const Options& opts, std::ostream& out, std::ostream& err);
int run_bench(const Options& opts, std::ostream& out, std::ostream& err);
int run_sweep(const Options& opts, std::ostream& out, std::ostream& err);
int run_ablate(const Options& opts, std::ostream& out, std::ostream& err);
int run_report(const std::string& store_dir, std::ostream& out, std::ostream& err);

}  // namespace groundkit::cli
