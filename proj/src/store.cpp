#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "groundkit/errors.hpp"
#include "groundkit/rng.hpp"
#include "groundkit/store.hpp"

namespace groundkit::store {

using nlohmann::json;

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::string fnv_digest_of_bytes(const std::string& bytes) {
    return "fnv1a64:" + hex64(rng::fnv1a64(bytes));
}

std::string fnv_digest_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IntegrityError("cannot open for digest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv_digest_of_bytes(buf.str());
}

std::string derive_run_id(const RunManifest& manifest) {
    const std::string material = manifest.command + "|" + manifest.dataset_digest + "|" +
                                 std::to_string(manifest.seed) + "|" + manifest.config.dump();
    return hex64(rng::fnv1a64(material));
}

json manifest_to_json(const RunManifest& m) {
    return {{"schema_version", m.schema_version},
            {"run_id", m.run_id},
            {"command", m.command},
            {"timestamp_utc", m.timestamp_utc},
            {"seed", m.seed},
            {"config", m.config},
            {"dataset",
             {{"path", m.dataset_path}, {"digest", m.dataset_digest}, {"count", m.dataset_count}}}};
}

RunManifest manifest_from_json(const json& j) {
    if (!j.is_object() || !j.contains("schema_version"))
        throw IntegrityError("manifest: missing schema_version");
    const int version = j["schema_version"].get<int>();
    if (version != kSchemaVersion)
        throw IntegrityError("manifest: schema version " + std::to_string(version) +
                             " is not supported (expected " + std::to_string(kSchemaVersion) + ")");
    RunManifest m;
    m.schema_version = version;
    m.run_id = j.at("run_id").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.timestamp_utc = j.at("timestamp_utc").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = j.at("config");
    const json& d = j.at("dataset");
    m.dataset_path = d.at("path").get<std::string>();
    m.dataset_digest = d.at("digest").get<std::string>();
    m.dataset_count = d.at("count").get<int>();
    return m;
}

ResultStore::ResultStore(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string ResultStore::path(const std::string& name) const {
    return (std::filesystem::path(dir_) / name).string();
}

void ResultStore::write_manifest(const RunManifest& manifest) {
    write_text("manifest.json", manifest_to_json(manifest).dump(2) + "\n");
}

void ResultStore::write_jsonl(const std::string& name, const std::vector<json>& lines) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw IntegrityError("cannot write " + path(name));
    for (const auto& line : lines) out << line.dump() << "\n";
}

void ResultStore::write_text(const std::string& name, const std::string& bytes) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw IntegrityError("cannot write " + path(name));
    out << bytes;
}

std::string ResultStore::read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IntegrityError("missing store file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<json> ResultStore::read_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IntegrityError("missing store file: " + path);
    std::vector<json> lines;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded())
            throw IntegrityError(path + " line " + std::to_string(line_no) + ": invalid JSON");
        lines.push_back(std::move(obj));
    }
    return lines;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string metrics_csv(const gbt::MetricsReport& report) {
    std::string out = "scope,key,metric,value\n";
    auto row = [&out](const std::string& scope, const std::string& key, const std::string& metric,
                      const std::string& value) {
        out += scope + "," + key + "," + metric + "," + value + "\n";
    };

    row("overall", "", "task_count", std::to_string(report.task_count));
    row("overall", "", "failed_count", std::to_string(report.failed_count));
    row("overall", "", "refused_count", std::to_string(report.refused_count));
    row("overall", "", "containment_rate", fmt(report.containment_rate));
    if (report.conditional_accuracy)
        row("overall", "", "conditional_accuracy", fmt(*report.conditional_accuracy));
    if (report.composite_score) row("overall", "", "composite_score", fmt(*report.composite_score));
    row("overall", "", "top1_accuracy", fmt(report.top1_accuracy));
    row("overall", "", "avg_steps", fmt(report.avg_steps));
    row("overall", "", "pass_rate", fmt(report.pass_rate));
    if (report.refusal_accuracy) row("overall", "", "refusal_accuracy", fmt(*report.refusal_accuracy));
    if (report.false_positive_rate)
        row("overall", "", "false_positive_rate", fmt(*report.false_positive_rate));

    for (const auto& g : report.groups) {
        row("group", g.group, "count", std::to_string(g.count));
        row("group", g.group, "containment_rate", fmt(g.containment));
        if (g.conditional) row("group", g.group, "conditional_accuracy", fmt(*g.conditional));
        row("group", g.group, "top1_accuracy", fmt(g.top1));
    }
    for (const auto& c : report.clusters) {
        row("cluster", c.name, "count", std::to_string(c.count));
        row("cluster", c.name, "avg_steps", fmt(c.avg_steps));
        row("cluster", c.name, "pass_rate", fmt(c.pass_rate));
    }
    return out;
}

std::string sweep_csv(const std::vector<gbt::SweepRow>& rows) {
    std::string out = "roi_size,containment,conditional,composite,evaluated,failures\n";
    for (const auto& r : rows) {
        out += std::to_string(int(r.roi_size)) + "," + fmt(r.containment) + ",";
        out += (r.conditional ? fmt(*r.conditional) : "") + std::string(",");
        out += (r.composite ? fmt(*r.composite) : "") + std::string(",");
        out += std::to_string(r.evaluated) + "," + std::to_string(r.failures) + "\n";
    }
    return out;
}

std::string ablation_csv(const gbt::AblationTable& table) {
    std::string out =
        "arm,containment,conditional,composite,top1,avg_steps,pass_rate,"
        "delta_containment,delta_avg_steps\n";
    const gbt::MetricsReport* baseline = table.arms.empty() ? nullptr : &table.arms[0].report;
    for (const auto& arm : table.arms) {
        const auto& r = arm.report;
        out += arm.name + "," + fmt(r.containment_rate) + ",";
        out += (r.conditional_accuracy ? fmt(*r.conditional_accuracy) : "") + std::string(",");
        out += (r.composite_score ? fmt(*r.composite_score) : "") + std::string(",");
        out += fmt(r.top1_accuracy) + "," + fmt(r.avg_steps) + "," + fmt(r.pass_rate) + ",";
        out += fmt(r.containment_rate - baseline->containment_rate) + ",";
        out += fmt(r.avg_steps - baseline->avg_steps) + "\n";
    }
    return out;
}

json sweep_plot_json(const std::vector<gbt::SweepRow>& rows) {
    json containment = json::array();
    json composite = json::array();
    for (const auto& r : rows) {
        containment.push_back(json::array({r.roi_size, r.containment}));
        if (r.composite) composite.push_back(json::array({r.roi_size, *r.composite}));
    }
    return {{"kind", "sweep"},
            {"x_label", "roi_size_px"},
            {"series", json::array({json{{"name", "containment"}, {"points", containment}},
                                    json{{"name", "composite"}, {"points", composite}}})}};
}

json ablation_plot_json(const gbt::AblationTable& table) {
    json arms = json::array();
    for (const auto& arm : table.arms) {
        const auto& r = arm.report;
        json a = {{"name", arm.name},
                  {"containment", r.containment_rate},
                  {"top1", r.top1_accuracy},
                  {"avg_steps", r.avg_steps},
                  {"pass_rate", r.pass_rate}};
        if (r.conditional_accuracy) a["conditional"] = *r.conditional_accuracy;
        if (r.composite_score) a["composite"] = *r.composite_score;
        arms.push_back(std::move(a));
    }
    return {{"kind", "ablation"}, {"ablation", gbt::ablation_kind_name(table.kind)}, {"arms", arms}};
}

std::string format_report(const gbt::MetricsReport& report) {
    std::ostringstream out;
    out << "tasks: " << report.task_count << "  failed: " << report.failed_count
        << "  refused: " << report.refused_count << "\n";
    out << "containment_rate:   " << fmt(report.containment_rate) << "\n";
    if (report.conditional_accuracy)
        out << "conditional_acc:    " << fmt(*report.conditional_accuracy) << "\n";
    if (report.composite_score)
        out << "composite_score:    " << fmt(*report.composite_score) << "\n";
    out << "top1_accuracy:      " << fmt(report.top1_accuracy) << "\n";
    out << "avg_steps:          " << fmt(report.avg_steps) << "\n";
    out << "pass_rate:          " << fmt(report.pass_rate) << "\n";
    if (report.refusal_accuracy)
        out << "refusal_accuracy:   " << fmt(*report.refusal_accuracy) << "\n";
    if (report.false_positive_rate)
        out << "false_positive_rate: " << fmt(*report.false_positive_rate) << "\n";
    if (!report.clusters.empty()) {
        out << "resolution clusters:\n";
        for (const auto& c : report.clusters) {
            out << "  " << c.name << ": n=" << c.count << " avg_steps=" << fmt(c.avg_steps)
                << " pass_rate=" << fmt(c.pass_rate) << "\n";
        }
    }
    return out.str();
}

}  // namespace groundkit::store
