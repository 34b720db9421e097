#include <forksim/scenario/builtins.hpp>
#include <forksim/scenario/json_io.hpp>
#include <forksim/scenario/runner.hpp>
#include <forksim/scenario/sweep.hpp>

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace forksim;
using namespace forksim::scenario;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return "";
}

std::string mutated(const std::function<void(nlohmann::json&)>& f) {
    auto j = nlohmann::json::parse(dump(builtin_fig4()));
    f(j);
    return j.dump();
}

} // namespace

TEST_CASE("every built-in survives a JSON round trip") {
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        const auto s = *builtin(name);
        CHECK_NOTHROW(validate(s));
        const auto back = parse(dump(s));
        CHECK(back == s);
        CHECK(dump(back) == dump(s));
    }
    CHECK_FALSE(builtin("nope").has_value());
    CHECK(builtin("doublespend-nowindow").has_value());
}

TEST_CASE("shipped scenario files equal the built-in definitions") {
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        const auto path = std::string(FORKSIM_SOURCE_DIR) + "/scenarios/" + name + ".json";
        CHECK(read_file(path) == dump(*builtin(name)));
        CHECK(load_file(path) == *builtin(name));
    }
}

TEST_CASE("script hash covers the canonical text") {
    auto s = builtin_fig4();
    const auto h = script_sha256(s);
    CHECK(h.size() == 64);
    s.k = 12;
    CHECK(script_sha256(s) != h);
}

TEST_CASE("validation errors name the offending path") {
    CHECK(error_of("{") .rfind("<input>: invalid JSON", 0) == 0);
    CHECK(error_of(mutated([](auto& j) { j["bogus"] = 1; })) == "bogus: unknown key");
    CHECK(error_of(mutated([](auto& j) { j["steps"][0]["action"]["node"] = "p9"; })) ==
          "steps[0].action.node: unknown node 'p9'");
    CHECK(error_of(mutated([](auto& j) { j["nodes"][1]["id"] = "p1"; })) ==
          "nodes[1].id: duplicate node 'p1'");
    CHECK(error_of(mutated([](auto& j) { j["transactions"][0]["amount"] = 0; })) ==
          "transactions[0].amount: must be positive");
    CHECK(error_of(mutated([](auto& j) { j["nodes"][1]["mining"] = true; })) ==
          "nodes[1].mining: a node with zero hash power cannot mine");
    CHECK(error_of(mutated([](auto& j) { j["difficulty"] = "0xzz"; })).rfind("difficulty:", 0) == 0);
    CHECK(error_of(mutated([](auto& j) { j["nodes"][0].erase("id"); })).rfind("nodes[0]", 0) == 0);
}

TEST_CASE("validate rejects a partition with overlapping groups") {
    auto s = builtin_fig4();
    for (auto& st : s.steps)
        if (st.action.type == ActionType::Partition) st.action.groups = {{"p1", "p2"}, {"p2", "p3"}};
    CHECK_THROWS_AS(validate(s), ScenarioError);
    CHECK_THROWS_AS(run(s, 1), ScenarioError);
}

TEST_CASE("default topology is a full mesh") {
    const auto s = builtin_fig4();
    CHECK(s.resolved_links().size() == 6);
    CHECK(s.resolved_observer() == "p2");
    const auto pairs = s.conditional_pairs();
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == std::pair<TxId, TxId>{"t1", "t2"});
}

TEST_CASE("runs are deterministic in the seed") {
    const auto a = run(builtin_fig4_racy(40), 9);
    const auto b = run(builtin_fig4_racy(40), 9);
    CHECK(a.trace.log == b.trace.log);
    const auto c = run(builtin_fig4_racy(40), 10);
    CHECK(a.trace.log != c.trace.log);
}

TEST_CASE("serial and parallel batches agree") {
    const auto jobs = sweep_jobs(builtin_fig4_racy(40), {0x2000, 0x4000, 0x8000}, 4, 100);
    REQUIRE(jobs.size() == 12);
    const auto serial = run_batch_serial(jobs);
    const auto parallel = run_batch_parallel(jobs);
    CHECK(serial == parallel);
    for (std::size_t i = 0; i < jobs.size(); ++i) CHECK(serial[i].run_id == i);
}

TEST_CASE("sweeps reuse seeds at every difficulty") {
    const auto jobs = sweep_jobs(builtin_fig4_racy(40), {0x2000, 0x4000}, 3, 50);
    REQUIRE(jobs.size() == 6);
    CHECK(jobs[0].seed == 50);
    CHECK(jobs[3].seed == 50);
    CHECK(jobs[0].script->difficulty == 0x2000);
    CHECK(jobs[3].script->difficulty == 0x4000);
}

TEST_CASE("aggregate folds summaries per difficulty") {
    std::vector<RunSummary> runs(4);
    runs[0].difficulty = runs[1].difficulty = 0x2000;
    runs[2].difficulty = runs[3].difficulty = 0x4000;
    runs[0].metrics.swap = true;
    runs[0].metrics.termination_time_s = 10;
    runs[1].metrics.termination_time_s = 20;
    runs[2].metrics.termination_time_s = 30;
    runs[3].metrics.termination_time_s = 50;
    runs[2].metrics.swap = runs[3].metrics.swap = true;
    for (auto& r : runs) r.metrics.dissemination_time_s = 0.05;
    const auto agg = aggregate(runs);
    REQUIRE(agg.per_difficulty.size() == 2);
    CHECK(agg.per_difficulty[0].swap_frequency == doctest::Approx(0.5));
    CHECK(agg.per_difficulty[1].swap_frequency == doctest::Approx(1.0));
    CHECK(*agg.per_difficulty[0].mean_termination_s == doctest::Approx(15));
    CHECK(*agg.per_difficulty[1].mean_termination_s == doctest::Approx(40));
    CHECK(agg.overall_swap_frequency == doctest::Approx(0.75));
    CHECK(agg.termination_r2 == doctest::Approx(1.0));
    CHECK(agg.dissemination_ratio == doctest::Approx(1.0));
    CHECK(agg.swap_spearman == doctest::Approx(1.0));
}
