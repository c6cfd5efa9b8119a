#include <doctest.h>

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "groundkit/errors.hpp"
#include "groundkit/metrics.hpp"
#include "support/test_support.hpp"

using namespace groundkit;
using agents::PipelineResult;
using gbt::AblationKind;
using gbt::GroundingTask;
using gbt::MetricsReport;
using gbt::SweepConfig;
using gbt::SweepSample;

namespace {

GroundingTask make_task(const std::string& id, bool feasible = true,
                        const std::string& group = "editor",
                        geom::ImageBounds res = {2560, 1440}) {
    GroundingTask t;
    t.id = id;
    t.instruction = "click it";
    t.feasible = feasible;
    if (feasible) t.target = img::TargetRegion::from_bbox({100, 100, 160, 160});
    t.group = group;
    t.resolution = res;
    return t;
}

PipelineResult make_result(const std::string& id, bool contained, std::optional<bool> correct,
                           int steps = 3) {
    PipelineResult r;
    r.task_id = id;
    r.finalized_roi = {0, 0, 1000, 1000};
    r.roi_contains_target = contained;
    if (!contained || !correct.value_or(false)) r.final_point = geom::Point{5000, 5000};
    else r.final_point = geom::Point{130, 130};
    r.correct = correct;
    r.trace.predictor_calls = steps;
    r.predictor_calls = steps + 1;
    return r;
}

// Exact binomial two-sided sign test computed a second way: Pascal's
// triangle in doubles, no logs involved.
double sign_test_reference(int wins, int losses) {
    const int n = wins + losses;
    if (n == 0) return 1.0;
    std::vector<double> row{1.0};
    for (int i = 1; i <= n; ++i) {
        std::vector<double> next(i + 1, 1.0);
        for (int j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
        row = std::move(next);
    }
    double tail = 0.0;
    for (int k = 0; k <= std::min(wins, losses); ++k) tail += row[k];
    return std::min(1.0, 2.0 * tail * std::pow(0.5, n));
}

// Independent recount of every aggregate in MetricsReport, written loop-first
// so a disagreement localises the bug.
MetricsReport recount(const std::vector<PipelineResult>& results,
                      const std::vector<GroundingTask>& tasks) {
    MetricsReport rep;
    rep.task_count = int(tasks.size());

    int cont_den = 0, cont_num = 0, cond_den = 0, cond_num = 0;
    int top_den = 0, top_num = 0, steps_den = 0;
    int feas = 0, feas_ref = 0, infeas = 0, infeas_ref = 0;
    double steps_sum = 0.0;
    struct G {
        int cd = 0, cn = 0, qd = 0, qn = 0, td = 0, tn = 0;
    };
    struct C {
        int n = 0, pass = 0;
        double steps = 0.0;
    };
    std::map<std::string, G> groups;
    std::map<std::string, C> clusters;

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& t = tasks[i];
        const auto& r = results[i];
        if (r.failed) ++rep.failed_count;
        if (r.refused) ++rep.refused_count;
        (t.feasible ? feas : infeas) += 1;
        if (r.refused) (t.feasible ? feas_ref : infeas_ref) += 1;

        if (t.feasible && t.target) {
            ++top_den;
            ++groups[t.group].td;
            if (!r.refused && !r.failed && r.correct.value_or(false)) {
                ++top_num;
                ++groups[t.group].tn;
            }
        }
        if (r.refused || r.failed || !t.target) continue;

        const bool in = r.roi_contains_target;
        ++cont_den;
        ++groups[t.group].cd;
        auto& cl = clusters[gbt::resolution_cluster(t.resolution)];
        ++cl.n;
        cl.steps += r.trace.predictor_calls;
        if (in) {
            ++cont_num;
            ++cond_den;
            ++cl.pass;
            ++groups[t.group].cn;
            ++groups[t.group].qd;
            if (r.correct.value_or(false)) {
                ++cond_num;
                ++groups[t.group].qn;
            }
        }
        steps_sum += r.trace.predictor_calls;
        ++steps_den;
    }

    rep.containment_rate = cont_den ? double(cont_num) / cont_den : 0.0;
    if (cond_den > 0) {
        rep.conditional_accuracy = double(cond_num) / cond_den;
        rep.composite_score = rep.containment_rate * *rep.conditional_accuracy;
    }
    rep.top1_accuracy = top_den ? double(top_num) / top_den : 0.0;
    rep.avg_steps = steps_den ? steps_sum / steps_den : 0.0;
    rep.pass_rate = rep.containment_rate;
    if (infeas > 0) rep.refusal_accuracy = double(infeas_ref) / infeas;
    if (feas > 0) rep.false_positive_rate = double(feas_ref) / feas;

    for (const auto& [name, g] : groups) {
        gbt::GroupStats gs;
        gs.group = name;
        gs.count = g.cd;
        gs.containment = g.cd ? double(g.cn) / g.cd : 0.0;
        if (g.qd > 0) gs.conditional = double(g.qn) / g.qd;
        gs.top1 = g.td ? double(g.tn) / g.td : 0.0;
        rep.groups.push_back(gs);
    }
    for (const auto& [name, c] : clusters) {
        gbt::ClusterStats cs;
        cs.name = name;
        cs.count = c.n;
        cs.avg_steps = c.n ? c.steps / c.n : 0.0;
        cs.pass_rate = c.n ? double(c.pass) / c.n : 0.0;
        rep.clusters.push_back(cs);
    }
    return rep;
}

bool same_opt(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || std::fabs(*a - *b) < 1e-12;
}

}  // namespace

TEST_CASE("resolution clusters match the published banding") {
    struct Row {
        int w, h;
        const char* cluster;
    };
    // The fourteen panel sizes the synthetic dataset draws from, each with
    // the band it is reported under.
    const Row rows[] = {
        {1920, 1080, "Standard (HD/QHD)"}, {2160, 1440, "Standard (HD/QHD)"},
        {2560, 1440, "Standard (HD/QHD)"}, {2560, 1600, "Standard (HD/QHD)"},
        {2560, 1664, "Standard (HD/QHD)"}, {2880, 1800, "High-Res"},
        {2992, 1870, "High-Res"},          {3456, 2160, "High-Res"},
        {3456, 2234, "High-Res"},          {3840, 1080, "Ultra-wide"},
        {5120, 1440, "Ultra-wide"},        {3840, 2160, "Extreme (4K+)"},
        {5120, 2880, "Extreme (4K+)"},     {6016, 3384, "Extreme (4K+)"},
    };
    for (const auto& row : rows) {
        CAPTURE(row.w);
        CAPTURE(row.h);
        CHECK(gbt::resolution_cluster({row.w, row.h}) == row.cluster);
    }
}

TEST_CASE("resolution cluster boundaries") {
    // Aspect ratio exactly 3 counts as ultra-wide, and it wins over pixels.
    CHECK(gbt::resolution_cluster({3000, 1000}) == "Ultra-wide");
    CHECK(gbt::resolution_cluster({9000, 3000}) == "Ultra-wide");
    CHECK(gbt::resolution_cluster({2999, 1000}) == "Standard (HD/QHD)");
    // Megapixel edges: just below five, exactly five, just below/at eight.
    CHECK(gbt::resolution_cluster({2500, 1999}) == "Standard (HD/QHD)");
    CHECK(gbt::resolution_cluster({2500, 2000}) == "High-Res");
    CHECK(gbt::resolution_cluster({2500, 3199}) == "High-Res");
    CHECK(gbt::resolution_cluster({2500, 3200}) == "Extreme (4K+)");
}

TEST_CASE("composite score is the product of its factors") {
    CHECK(gbt::composite_score(0.897, 0.814) == doctest::Approx(0.7302).epsilon(1e-3));
    CHECK(gbt::composite_score(0.897, 0.814) == doctest::Approx(0.897 * 0.814));
    CHECK(gbt::composite_score(0.0, 1.0) == 0.0);
    CHECK(gbt::composite_score(1.0, 1.0) == 1.0);
    CHECK_THROWS_AS(gbt::composite_score(-0.1, 0.5), ValidationError);
    CHECK_THROWS_AS(gbt::composite_score(0.5, 1.2), ValidationError);
}

TEST_CASE("sign test matches hand-computed tails") {
    // 15 wins vs 2 losses: 2 * (C(17,0)+C(17,1)+C(17,2)) / 2^17 = 308/131072.
    CHECK(gbt::sign_test_p(15, 2) == doctest::Approx(0.002349853515625).epsilon(1e-9));
    CHECK(gbt::sign_test_p(2, 15) == doctest::Approx(0.002349853515625).epsilon(1e-9));
    CHECK(gbt::sign_test_p(0, 10) == doctest::Approx(2.0 / 1024.0).epsilon(1e-9));
    CHECK(gbt::sign_test_p(5, 5) == 1.0);
    CHECK(gbt::sign_test_p(0, 0) == 1.0);
    CHECK(gbt::sign_test_p(1, 0) == 1.0);
    CHECK_THROWS_AS(gbt::sign_test_p(-1, 3), ValidationError);
}

TEST_CASE("sign test agrees with a Pascal-triangle recount") {
    for (int wins = 0; wins <= 40; ++wins) {
        for (int losses = 0; losses <= 40 - wins; ++losses) {
            CAPTURE(wins);
            CAPTURE(losses);
            const double got = gbt::sign_test_p(wins, losses);
            CHECK(got == doctest::Approx(sign_test_reference(wins, losses)).epsilon(1e-9));
            CHECK(got <= 1.0);
            CHECK(got > 0.0);
        }
    }
    // More lopsided splits at fixed n never raise the p-value.
    for (int n = 2; n <= 30; ++n) {
        for (int w = n / 2; w + 1 <= n; ++w) {
            CHECK(gbt::sign_test_p(w + 1, n - w - 1) <= gbt::sign_test_p(w, n - w) + 1e-12);
        }
    }
}

TEST_CASE("containment rate counts center hits over produced ROIs") {
    std::vector<GroundingTask> tasks;
    std::vector<PipelineResult> results;
    for (int i = 0; i < 4; ++i) {
        tasks.push_back(make_task("t" + std::to_string(i)));
        results.push_back(make_result("t" + std::to_string(i), i < 3, i < 3));
    }
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    CHECK(rep.containment_rate == doctest::Approx(0.75));
    CHECK(rep.pass_rate == doctest::Approx(0.75));
    CHECK(rep.task_count == 4);
}

TEST_CASE("conditional accuracy only looks at contained tasks") {
    std::vector<GroundingTask> tasks;
    std::vector<PipelineResult> results;
    // Five contained (two of them correct), two not contained at all.
    for (int i = 0; i < 7; ++i) {
        tasks.push_back(make_task("t" + std::to_string(i)));
        const bool contained = i < 5;
        results.push_back(make_result("t" + std::to_string(i), contained, contained && i < 2));
    }
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    REQUIRE(rep.conditional_accuracy.has_value());
    CHECK(*rep.conditional_accuracy == doctest::Approx(0.4));
    REQUIRE(rep.composite_score.has_value());
    CHECK(*rep.composite_score == doctest::Approx(rep.containment_rate * 0.4));
}

TEST_CASE("conditional and composite are absent when nothing is contained") {
    std::vector<GroundingTask> tasks{make_task("a"), make_task("b")};
    std::vector<PipelineResult> results{make_result("a", false, false),
                                        make_result("b", false, false)};
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    CHECK(rep.containment_rate == 0.0);
    CHECK_FALSE(rep.conditional_accuracy.has_value());
    CHECK_FALSE(rep.composite_score.has_value());
}

TEST_CASE("a 37-of-54 conditional split reproduces the reference fraction") {
    std::vector<GroundingTask> tasks;
    std::vector<PipelineResult> results;
    for (int i = 0; i < 54; ++i) {
        tasks.push_back(make_task("t" + std::to_string(i)));
        results.push_back(make_result("t" + std::to_string(i), true, i < 37));
    }
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    REQUIRE(rep.conditional_accuracy.has_value());
    CHECK(*rep.conditional_accuracy == doctest::Approx(0.685).epsilon(1e-3));
    CHECK(*rep.conditional_accuracy == doctest::Approx(37.0 / 54.0));
}

TEST_CASE("refusals and failures leave stage rates but score zero on top-1") {
    std::vector<GroundingTask> tasks;
    std::vector<PipelineResult> results;
    for (int i = 0; i < 4; ++i) {
        tasks.push_back(make_task("t" + std::to_string(i)));
        results.push_back(make_result("t" + std::to_string(i), true, i < 2));
    }
    results[2].refused = true;
    results[3].failed = true;
    results[3].failure = "stage2: boom";
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    // Containment only sees the two clean runs, both contained.
    CHECK(rep.containment_rate == doctest::Approx(1.0));
    // Top-1 spans all four feasible tasks; the refusal and failure miss.
    CHECK(rep.top1_accuracy == doctest::Approx(0.5));
    CHECK(rep.failed_count == 1);
    CHECK(rep.refused_count == 1);
}

TEST_CASE("refusal accuracy and false positive rate use disjoint denominators") {
    std::vector<GroundingTask> tasks;
    std::vector<PipelineResult> results;
    for (int i = 0; i < 20; ++i) {
        tasks.push_back(make_task("f" + std::to_string(i), true));
        results.push_back(make_result("f" + std::to_string(i), true, true));
    }
    results[7].refused = true;  // one wrongly refused feasible task
    for (int i = 0; i < 4; ++i) {
        tasks.push_back(make_task("i" + std::to_string(i), false));
        PipelineResult r;
        r.task_id = "i" + std::to_string(i);
        r.refused = i < 3;  // three of four infeasible correctly refused
        results.push_back(r);
    }
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    REQUIRE(rep.false_positive_rate.has_value());
    CHECK(*rep.false_positive_rate == doctest::Approx(0.05));
    REQUIRE(rep.refusal_accuracy.has_value());
    CHECK(*rep.refusal_accuracy == doctest::Approx(0.75));
}

TEST_CASE("refusal accuracy is absent without infeasible tasks") {
    std::vector<GroundingTask> tasks{make_task("a")};
    std::vector<PipelineResult> results{make_result("a", true, true)};
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    CHECK_FALSE(rep.refusal_accuracy.has_value());
    REQUIRE(rep.false_positive_rate.has_value());
    CHECK(*rep.false_positive_rate == 0.0);
}

TEST_CASE("average steps come from the zoom trace of ROI-producing runs") {
    std::vector<GroundingTask> tasks;
    std::vector<PipelineResult> results;
    const int calls[] = {2, 3, 4};
    for (int i = 0; i < 3; ++i) {
        tasks.push_back(make_task("t" + std::to_string(i)));
        results.push_back(make_result("t" + std::to_string(i), true, true, calls[i]));
    }
    // A failed run must not drag the average down.
    tasks.push_back(make_task("t3"));
    results.push_back(make_result("t3", false, false, 99));
    results[3].failed = true;
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    CHECK(rep.avg_steps == doctest::Approx(3.0));
}

TEST_CASE("group table keys off the task group") {
    std::vector<GroundingTask> tasks;
    std::vector<PipelineResult> results;
    for (int i = 0; i < 4; ++i) {
        tasks.push_back(make_task("e" + std::to_string(i), true, "editor"));
        results.push_back(make_result("e" + std::to_string(i), i < 3, i < 2));
    }
    for (int i = 0; i < 2; ++i) {
        tasks.push_back(make_task("b" + std::to_string(i), true, "browser"));
        results.push_back(make_result("b" + std::to_string(i), true, true));
    }
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    REQUIRE(rep.groups.size() == 2);
    // std::map ordering: browser before editor.
    CHECK(rep.groups[0].group == "browser");
    CHECK(rep.groups[0].count == 2);
    CHECK(rep.groups[0].containment == doctest::Approx(1.0));
    CHECK(rep.groups[1].group == "editor");
    CHECK(rep.groups[1].count == 4);
    CHECK(rep.groups[1].containment == doctest::Approx(0.75));
    REQUIRE(rep.groups[1].conditional.has_value());
    CHECK(*rep.groups[1].conditional == doctest::Approx(2.0 / 3.0));
    CHECK(rep.groups[1].top1 == doctest::Approx(0.5));
}

TEST_CASE("cluster table only counts runs that produced a ROI") {
    std::vector<GroundingTask> tasks;
    std::vector<PipelineResult> results;
    tasks.push_back(make_task("a", true, "editor", {1920, 1080}));
    results.push_back(make_result("a", true, true, 5));
    tasks.push_back(make_task("b", true, "editor", {3840, 1080}));
    results.push_back(make_result("b", false, false, 9));
    tasks.push_back(make_task("c", true, "editor", {5120, 1440}));
    results.push_back(make_result("c", true, true, 11));
    // Refused: its 4K panel must not show up at all.
    tasks.push_back(make_task("d", true, "editor", {3840, 2160}));
    results.push_back(make_result("d", true, true, 3));
    results[3].refused = true;
    const MetricsReport rep = gbt::compute_metrics(results, tasks);
    REQUIRE(rep.clusters.size() == 2);
    CHECK(rep.clusters[0].name == "Standard (HD/QHD)");
    CHECK(rep.clusters[0].count == 1);
    CHECK(rep.clusters[0].avg_steps == doctest::Approx(5.0));
    CHECK(rep.clusters[1].name == "Ultra-wide");
    CHECK(rep.clusters[1].count == 2);
    CHECK(rep.clusters[1].avg_steps == doctest::Approx(10.0));
    CHECK(rep.clusters[1].pass_rate == doctest::Approx(0.5));
}

TEST_CASE("misaligned inputs are rejected") {
    std::vector<GroundingTask> tasks{make_task("a")};
    std::vector<PipelineResult> results;
    CHECK_THROWS_AS(gbt::compute_metrics(results, tasks), ValidationError);
}

TEST_CASE("empty inputs produce an all-absent report") {
    const MetricsReport rep = gbt::compute_metrics({}, {});
    CHECK(rep.task_count == 0);
    CHECK(rep.containment_rate == 0.0);
    CHECK_FALSE(rep.conditional_accuracy.has_value());
    CHECK_FALSE(rep.composite_score.has_value());
    CHECK(rep.avg_steps == 0.0);
    CHECK_FALSE(rep.refusal_accuracy.has_value());
    CHECK_FALSE(rep.false_positive_rate.has_value());
    CHECK(rep.groups.empty());
    CHECK(rep.clusters.empty());
}

TEST_CASE("any_overlap widens containment to region intersection") {
    std::vector<GroundingTask> tasks{make_task("a")};
    // Target box [100,160]^2; a ROI that clips the box corner but misses the
    // center counts only under overlap semantics.
    tasks[0].target = img::TargetRegion::from_bbox({100, 100, 160, 160});
    std::vector<PipelineResult> results{make_result("a", false, false)};
    results[0].finalized_roi = {150, 150, 400, 400};
    const MetricsReport strict = gbt::compute_metrics(results, tasks, false);
    const MetricsReport loose = gbt::compute_metrics(results, tasks, true);
    CHECK(strict.containment_rate == 0.0);
    CHECK(loose.containment_rate == doctest::Approx(1.0));
}

TEST_CASE("report agrees with an independent recount on random inputs") {
    std::mt19937_64 rng(20260814);
    const char* groups[] = {"editor", "browser", "ide", "cad", "terminal"};
    const geom::ImageBounds panels[] = {
        {1920, 1080}, {2560, 1440}, {2880, 1800}, {3840, 1080}, {3840, 2160}, {6016, 3384}};
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + int(testsupport::uniform_int(rng, 0, 39));
        std::vector<GroundingTask> tasks;
        std::vector<PipelineResult> results;
        for (int i = 0; i < n; ++i) {
            const bool feasible = testsupport::uniform(rng, 0, 1) < 0.8;
            GroundingTask t = make_task("t" + std::to_string(i), feasible,
                                        groups[testsupport::uniform_int(rng, 0, 4)],
                                        panels[testsupport::uniform_int(rng, 0, 5)]);
            // Occasionally a feasible task without ground truth.
            if (feasible && testsupport::uniform(rng, 0, 1) < 0.1) t.target.reset();
            tasks.push_back(t);

            PipelineResult r = make_result(
                "t" + std::to_string(i), testsupport::uniform(rng, 0, 1) < 0.6,
                testsupport::uniform(rng, 0, 1) < 0.5,
                int(testsupport::uniform_int(rng, 1, 20)));
            if (testsupport::uniform(rng, 0, 1) < 0.15) r.refused = true;
            if (testsupport::uniform(rng, 0, 1) < 0.1) {
                r.failed = true;
                r.failure = "stage1: injected";
            }
            if (testsupport::uniform(rng, 0, 1) < 0.1) r.correct.reset();
            results.push_back(r);
        }
        const MetricsReport got = gbt::compute_metrics(results, tasks);
        const MetricsReport want = recount(results, tasks);

        CAPTURE(trial);
        REQUIRE(got.task_count == want.task_count);
        REQUIRE(got.failed_count == want.failed_count);
        REQUIRE(got.refused_count == want.refused_count);
        REQUIRE(got.containment_rate == doctest::Approx(want.containment_rate));
        REQUIRE(same_opt(got.conditional_accuracy, want.conditional_accuracy));
        REQUIRE(same_opt(got.composite_score, want.composite_score));
        REQUIRE(got.top1_accuracy == doctest::Approx(want.top1_accuracy));
        REQUIRE(got.avg_steps == doctest::Approx(want.avg_steps));
        REQUIRE(got.pass_rate == got.containment_rate);
        REQUIRE(same_opt(got.refusal_accuracy, want.refusal_accuracy));
        REQUIRE(same_opt(got.false_positive_rate, want.false_positive_rate));
        if (got.composite_score) {
            REQUIRE(*got.composite_score ==
                    doctest::Approx(got.containment_rate * *got.conditional_accuracy));
        }

        REQUIRE(got.groups.size() == want.groups.size());
        for (std::size_t g = 0; g < got.groups.size(); ++g) {
            REQUIRE(got.groups[g].group == want.groups[g].group);
            REQUIRE(got.groups[g].count == want.groups[g].count);
            REQUIRE(got.groups[g].containment == doctest::Approx(want.groups[g].containment));
            REQUIRE(same_opt(got.groups[g].conditional, want.groups[g].conditional));
            REQUIRE(got.groups[g].top1 == doctest::Approx(want.groups[g].top1));
        }
        REQUIRE(got.clusters.size() == want.clusters.size());
        for (std::size_t c = 0; c < got.clusters.size(); ++c) {
            REQUIRE(got.clusters[c].name == want.clusters[c].name);
            REQUIRE(got.clusters[c].count == want.clusters[c].count);
            REQUIRE(got.clusters[c].avg_steps == doctest::Approx(want.clusters[c].avg_steps));
            REQUIRE(got.clusters[c].pass_rate == doctest::Approx(want.clusters[c].pass_rate));
        }
    }
}

TEST_CASE("sweep config validation") {
    SweepConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.roi_sizes = {};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.roi_sizes = {400, 400};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.roi_sizes = {600, 400};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.roi_sizes = {-1, 400};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("sweep rows aggregate samples per size in first-seen order") {
    std::vector<SweepSample> samples;
    auto add = [&](double size, bool failed, bool has_target, bool contained, bool correct) {
        SweepSample s;
        s.roi_size = size;
        s.task_id = "t" + std::to_string(samples.size());
        s.failed = failed;
        s.has_target = has_target;
        s.contained = contained;
        s.correct = correct;
        samples.push_back(s);
    };
    // Size 800: 3 evaluated, 2 contained, 1 correct, 1 failure.
    add(800, false, true, true, true);
    add(800, false, true, true, false);
    add(800, false, true, false, false);
    add(800, true, true, false, false);
    // Size 400 appears later in the stream but keeps its position.
    add(400, false, true, false, false);
    add(400, false, false, false, false);  // no target: not evaluated

    const auto rows = gbt::sweep_rows_from_samples(samples);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].roi_size == 800);
    CHECK(rows[0].evaluated == 3);
    CHECK(rows[0].failures == 1);
    CHECK(rows[0].containment == doctest::Approx(2.0 / 3.0));
    REQUIRE(rows[0].conditional.has_value());
    CHECK(*rows[0].conditional == doctest::Approx(0.5));
    REQUIRE(rows[0].composite.has_value());
    CHECK(*rows[0].composite == doctest::Approx((2.0 / 3.0) * 0.5));
    CHECK(rows[1].roi_size == 400);
    CHECK(rows[1].evaluated == 1);
    CHECK(rows[1].containment == 0.0);
    CHECK_FALSE(rows[1].conditional.has_value());
    CHECK_FALSE(rows[1].composite.has_value());
}

TEST_CASE("an oracle sweep is perfect at every size") {
    SweepConfig cfg;
    cfg.roi_sizes = {400, 1000, 1800};
    cfg.predictor.sim.kind = pred::SimKind::Oracle;
    cfg.seed = 11;
    const auto tasks = gbt::make_synthetic_dataset(30, 5);
    const auto result = gbt::run_sweep(cfg, tasks);
    REQUIRE(result.rows.size() == 3);
    for (const auto& row : result.rows) {
        CAPTURE(row.roi_size);
        CHECK(row.evaluated == 30);
        CHECK(row.failures == 0);
        CHECK(row.containment == doctest::Approx(1.0));
        REQUIRE(row.conditional.has_value());
        CHECK(*row.conditional == doctest::Approx(1.0));
    }
    REQUIRE(result.samples.size() == 90);
    // Samples stream in size-major, task-minor order.
    CHECK(result.samples.front().roi_size == 400);
    CHECK(result.samples.front().task_id == tasks.front().id);
    CHECK(result.samples.back().roi_size == 1800);
    CHECK(result.samples.back().task_id == tasks.back().id);
}

TEST_CASE("sweeps with the same seed are bit-identical") {
    SweepConfig cfg;
    cfg.roi_sizes = {400, 800};
    cfg.use_zoom = true;
    cfg.predictor.sim.kind = pred::SimKind::Noisy;
    cfg.predictor.sim.sigma = 250.0;
    cfg.seed = 99;
    const auto tasks = gbt::make_synthetic_dataset(25, 42);
    const auto a = gbt::run_sweep(cfg, tasks);
    const auto b = gbt::run_sweep(cfg, tasks);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].task_id == b.samples[i].task_id);
        CHECK(a.samples[i].failed == b.samples[i].failed);
        CHECK(a.samples[i].contained == b.samples[i].contained);
        CHECK(a.samples[i].correct == b.samples[i].correct);
    }
    // Rows are a pure function of samples.
    const auto rows = gbt::sweep_rows_from_samples(a.samples);
    REQUIRE(rows.size() == a.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].containment == a.rows[i].containment);
        CHECK(rows[i].evaluated == a.rows[i].evaluated);
    }
}

TEST_CASE("zoomed sweeps track the configured mode") {
    SweepConfig cfg;
    cfg.roi_sizes = {1000};
    cfg.use_zoom = true;
    cfg.predictor.sim.kind = pred::SimKind::Oracle;
    const auto tasks = gbt::make_synthetic_dataset(10, 3);
    const auto result = gbt::run_sweep(cfg, tasks);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].containment == doctest::Approx(1.0));
    // Zoom runs take more than the static baseline's two calls.
    CHECK(result.samples.size() == 10);
}

TEST_CASE("sweep rejects an empty dataset") {
    SweepConfig cfg;
    CHECK_THROWS_AS(gbt::run_sweep(cfg, {}), ValidationError);
}

TEST_CASE("ablation kind names round-trip") {
    for (AblationKind k :
         {AblationKind::BidirectionalVsUnidirectional, AblationKind::AsymmetricVsSymmetric,
          AblationKind::PruningRates, AblationKind::ScalingFactors}) {
        CHECK(gbt::ablation_kind_from_name(gbt::ablation_kind_name(k)) == k);
    }
    CHECK_THROWS_AS(gbt::ablation_kind_from_name("bogus"), ValidationError);
}

TEST_CASE("ablation arms carry the expected names and shapes") {
    agents::PipelineConfig base;
    base.stage1.sim.kind = pred::SimKind::Oracle;
    base.stage2.sim.kind = pred::SimKind::Oracle;
    base.scale_factor = 1;
    const auto tasks = gbt::make_synthetic_dataset(6, 17);

    SUBCASE("pruning rates") {
        const auto table = gbt::run_ablation(AblationKind::PruningRates, base, 1, tasks);
        REQUIRE(table.arms.size() == 3);
        CHECK(table.arms[0].name == "delta_in_0.10");
        CHECK(table.arms[1].name == "delta_in_0.20");
        CHECK(table.arms[2].name == "delta_in_0.30");
        for (const auto& arm : table.arms) {
            CHECK(arm.results.size() == tasks.size());
            CHECK(arm.report.task_count == int(tasks.size()));
            CHECK(arm.report.containment_rate == doctest::Approx(1.0));
        }
        // Harder pruning converges in fewer calls on the oracle.
        CHECK(table.arms[2].report.avg_steps <= table.arms[0].report.avg_steps);
    }
    SUBCASE("direction modes") {
        const auto table =
            gbt::run_ablation(AblationKind::BidirectionalVsUnidirectional, base, 1, tasks);
        REQUIRE(table.arms.size() == 2);
        CHECK(table.arms[0].name == "bidirectional");
        CHECK(table.arms[1].name == "unidirectional");
    }
    SUBCASE("shrink geometry") {
        const auto table = gbt::run_ablation(AblationKind::AsymmetricVsSymmetric, base, 1, tasks);
        REQUIRE(table.arms.size() == 2);
        CHECK(table.arms[0].name == "asymmetric");
        CHECK(table.arms[1].name == "symmetric");
    }
    SUBCASE("scaling factors") {
        const auto table = gbt::run_ablation(AblationKind::ScalingFactors, base, 1, tasks);
        REQUIRE(table.arms.size() == 4);
        CHECK(table.arms[0].name == "scale_1");
        CHECK(table.arms[1].name == "scale_2");
        CHECK(table.arms[2].name == "scale_3");
        CHECK(table.arms[3].name == "scale_4");
    }
}

TEST_CASE("ablation rejects an empty dataset") {
    agents::PipelineConfig base;
    base.stage1.sim.kind = pred::SimKind::Oracle;
    base.stage2.sim.kind = pred::SimKind::Oracle;
    CHECK_THROWS_AS(gbt::run_ablation(AblationKind::PruningRates, base, 1, {}), ValidationError);
}

TEST_CASE("top-1 hits imply the final point sits inside the finalized crop") {
    agents::PipelineConfig cfg;
    cfg.stage1.sim.kind = pred::SimKind::Noisy;
    cfg.stage1.sim.sigma = 200.0;
    cfg.stage2.sim.kind = pred::SimKind::Noisy;
    cfg.stage2.sim.sigma = 200.0;
    cfg.scale_factor = 1;
    cfg.seed = 31;
    const auto tasks = gbt::make_synthetic_dataset(40, 8);
    for (const auto& task : tasks) {
        const auto r = agents::run_pipeline(task, cfg);
        if (r.refused || r.failed || !r.final_point) continue;
        // Stage 2 clamps into the crop, so the answer can never escape it.
        const geom::Rect grid = geom::grid_crop_rect(r.finalized_roi, task.resolution);
        CHECK(geom::is_inside(*r.final_point, grid));
    }
}
