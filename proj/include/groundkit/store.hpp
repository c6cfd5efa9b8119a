#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "groundkit/metrics.hpp"

namespace groundkit::store {

inline constexpr int kSchemaVersion = 1;

struct RunManifest {
    int schema_version = kSchemaVersion;
    std::string run_id;  // derived from (command, config, dataset digest, seed)
    std::string command;
    std::string timestamp_utc;  // the only field allowed to differ on rerun
    std::uint64_t seed = 0;
    nlohmann::json config;
    std::string dataset_path;  // relative to the store directory when inside it
    std::string dataset_digest;
    int dataset_count = 0;
};

std::string utc_now_iso8601();
std::string fnv_digest_of_file(const std::string& path);   // "fnv1a64:<hex>"
std::string fnv_digest_of_bytes(const std::string& bytes);
std::string derive_run_id(const RunManifest& manifest);

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);  // throws IntegrityError on version skew

// Writes one run directory: manifest first, then per-task JSONL, then the
// derived CSV/plot artifacts. All serialization is fixed-format so reruns
// with identical inputs produce identical bytes; only the manifest timestamp
// and the per-stage timings inside result records vary between reruns.
class ResultStore {
public:
    explicit ResultStore(std::string dir);

    const std::string& dir() const { return dir_; }
    std::string path(const std::string& name) const;

    void write_manifest(const RunManifest& manifest);
    void write_jsonl(const std::string& name, const std::vector<nlohmann::json>& lines);
    void write_text(const std::string& name, const std::string& bytes);

    static std::string read_text(const std::string& path);
    static std::vector<nlohmann::json> read_jsonl(const std::string& path);

private:
    std::string dir_;
};

// Fixed-format artifacts ("%.6f" everywhere, stable row order).
std::string metrics_csv(const gbt::MetricsReport& report);
std::string sweep_csv(const std::vector<gbt::SweepRow>& rows);
std::string ablation_csv(const gbt::AblationTable& table);
nlohmann::json sweep_plot_json(const std::vector<gbt::SweepRow>& rows);
nlohmann::json ablation_plot_json(const gbt::AblationTable& table);

// Human-readable table for stdout.
std::string format_report(const gbt::MetricsReport& report);

}  // namespace groundkit::store
