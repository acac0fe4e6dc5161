#include <doctest.h>

#include <random>

#include "cortexc/graph.hpp"
#include "cortexc/json_io.hpp"
#include "cortexc/status.hpp"
#include "test_support.hpp"

using namespace cortexc;

namespace {

Task running_task(int attempts, int max_attempts) {
    Task t = make_task("t", TaskKind::implement, "x", {}, max_attempts);
    t.status = TaskStatus::running;
    t.attempts = attempts;
    return t;
}

} // namespace

TEST_CASE("transition follows the status machine") {
    Task t = make_task("t1", TaskKind::implement, "x");
    CHECK(t.status == TaskStatus::pending);

    t = transition(t, TaskEvent::deps_met);
    CHECK(t.status == TaskStatus::ready);

    t = transition(t, TaskEvent::dispatched);
    CHECK(t.status == TaskStatus::running);
    CHECK(t.attempts == 1);

    SUBCASE("completed ends in done") {
        t = transition(t, TaskEvent::completed);
        CHECK(t.status == TaskStatus::done);
    }
    SUBCASE("retry goes back to ready without touching attempts") {
        t = transition(t, TaskEvent::check_failed_retry);
        CHECK(t.status == TaskStatus::ready);
        CHECK(t.attempts == 1);
    }
    SUBCASE("exhausted ends in failed") {
        t = transition(t, TaskEvent::exhausted);
        CHECK(t.status == TaskStatus::failed);
    }
}

TEST_CASE("retry at the attempt bound is an illegal transition") {
    Task t = running_task(2, 3);
    CHECK_NOTHROW(transition(t, TaskEvent::check_failed_retry));

    t = running_task(3, 3);
    try {
        transition(t, TaskEvent::check_failed_retry);
        FAIL("expected illegal-transition");
    } catch (const Error& e) {
        CHECK(e.code() == "illegal-transition");
        CHECK(std::string(e.what()).find("running") != std::string::npos);
        CHECK(std::string(e.what()).find("check_failed_retry") != std::string::npos);
    }
    // the caller must use exhausted instead
    CHECK(transition(t, TaskEvent::exhausted).status == TaskStatus::failed);
}

TEST_CASE("illegal transitions name status and event") {
    Task t = make_task("t1", TaskKind::implement, "x");
    CHECK_THROWS_AS(transition(t, TaskEvent::completed), Error);
    CHECK_THROWS_AS(transition(t, TaskEvent::dispatched), Error);

    Task done = running_task(1, 3);
    done = transition(done, TaskEvent::completed);
    CHECK_THROWS_AS(transition(done, TaskEvent::deps_met), Error);
    CHECK_THROWS_AS(transition(done, TaskEvent::dispatched), Error);
}

TEST_CASE("property: attempts stay bounded and done/failed are terminal") {
    std::mt19937_64 rng(7);
    const TaskEvent all_events[] = {TaskEvent::deps_met, TaskEvent::dispatched,
                                    TaskEvent::completed, TaskEvent::check_failed_retry,
                                    TaskEvent::exhausted};
    std::uniform_int_distribution<int> pick(0, 4);
    for (int trial = 0; trial < 500; ++trial) {
        Task t = make_task("t", TaskKind::implement, "x", {}, 1 + trial % 4);
        for (int step = 0; step < 30; ++step) {
            TaskEvent e = all_events[pick(rng)];
            bool was_terminal = t.terminal();
            try {
                t = transition(t, e);
            } catch (const Error& err) {
                CHECK(err.code() == "illegal-transition");
                if (was_terminal) continue;
            }
            CHECK(t.attempts <= t.max_attempts);
            if (was_terminal) {
                // no event may have moved a terminal task
                CHECK(t.terminal());
            }
        }
    }
}

TEST_CASE("make_task rejects self-dependencies and empty ids") {
    CHECK_THROWS_AS(make_task("", TaskKind::plan, "x"), Error);
    CHECK_THROWS_AS(make_task("a", TaskKind::plan, "x", {"a"}), Error);
}

TEST_CASE("task kinds map to their roles") {
    CHECK(role_for_kind(TaskKind::plan) == AgentRole::Prefrontal);
    CHECK(role_for_kind(TaskKind::data_structures) == AgentRole::Parietal);
    CHECK(role_for_kind(TaskKind::logic_review) == AgentRole::Temporal);
    CHECK(role_for_kind(TaskKind::implement) == AgentRole::Motor);
    CHECK(role_for_kind(TaskKind::integrate) == AgentRole::Orchestrator);
    CHECK(role_for_kind(TaskKind::monolith) == AgentRole::Monolith);
}

TEST_CASE("validate_graph accepts a chain") {
    TaskGraph g;
    g.add(make_task("A", TaskKind::implement, "a"));
    g.add(make_task("B", TaskKind::implement, "b", {"A"}));
    g.add(make_task("C", TaskKind::implement, "c", {"B"}));
    CHECK_NOTHROW(validate_graph(g));
}

TEST_CASE("validate_graph reports a self-loop as cycle [A]") {
    TaskGraph g;
    Task a = make_task("A", TaskKind::implement, "a");
    a.deps.insert("A"); // bypass make_task's guard to exercise validation
    g.add(a);
    try {
        validate_graph(g);
        FAIL("expected cycle");
    } catch (const Error& e) {
        CHECK(e.code() == "cycle");
        CHECK(std::string(e.what()).find("[A]") != std::string::npos);
    }
}

TEST_CASE("validate_graph reports dangling dependencies by id") {
    TaskGraph g;
    g.add(make_task("A", TaskKind::implement, "a", {"Z"}));
    try {
        validate_graph(g);
        FAIL("expected dangling-dependency");
    } catch (const Error& e) {
        CHECK(e.code() == "dangling-dependency");
        CHECK(std::string(e.what()).find("Z") != std::string::npos);
    }
}

TEST_CASE("validate_graph rejects role/kind mismatches") {
    TaskGraph g;
    Task t = make_task("A", TaskKind::implement, "a");
    t.role = AgentRole::Parietal;
    g.add(t);
    CHECK_THROWS_AS(validate_graph(g), Error);
}

namespace {

// Independent cycle oracle: boolean transitive closure over dependency edges.
bool has_cycle_bruteforce(const TaskGraph& g) {
    int n = static_cast<int>(g.size());
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        const Task& t = g.at(g.order()[i]);
        for (const auto& dep : t.deps) {
            reach[i][static_cast<int>(g.index_of(dep))] = true;
        }
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (reach[i][i]) return true;
    }
    return false;
}

TaskGraph random_digraph(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size_dist(1, 12);
    std::bernoulli_distribution edge(0.18);
    int n = size_dist(rng);
    TaskGraph g;
    // first insert nodes, then wire arbitrary (possibly cyclic) dependencies
    for (int i = 0; i < n; ++i) {
        g.add(make_task("n" + std::to_string(i), TaskKind::implement, "x"));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && edge(rng)) {
                g.at("n" + std::to_string(i)).deps.insert("n" + std::to_string(j));
            }
        }
    }
    return g;
}

} // namespace

TEST_CASE("validate_graph agrees with a brute-force cycle oracle on 1000 graphs") {
    std::mt19937_64 rng(20809);
    for (int i = 0; i < 1000; ++i) {
        TaskGraph g = random_digraph(rng);
        bool expected = has_cycle_bruteforce(g);
        bool reported = false;
        try {
            validate_graph(g);
        } catch (const Error& e) {
            REQUIRE(e.code() == "cycle");
            reported = true;
        }
        CHECK(reported == expected);
    }
}

namespace {

PipelineRun random_run(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> small(0, 3);
    PipelineRun run;
    run.run_id = "run-" + std::to_string(rng());
    run.spec.spec_id = "spec-" + std::to_string(rng() % 100);
    run.spec.title = "Title";
    run.spec.description = "objective with unicode \xE2\x9C\x93 and {braces}";
    run.spec.target_language_tag = "python";
    run.spec.mode = rng() % 2 ? PipelineMode::modular : PipelineMode::monolithic;
    for (int i = 0; i < small(rng); ++i) {
        CheckSpec c;
        c.name = "check" + std::to_string(i);
        c.method = i % 2 ? CheckMethod::contains_text : CheckMethod::external_command;
        c.argument = "arg \"quoted\"";
        if (i % 2) c.applies_to = {ContentKind::code, ContentKind::integrated_code};
        run.spec.checks.push_back(c);
    }
    run.graph = cortexc::test::random_dag(rng, 6);
    for (int i = 0; i < small(rng); ++i) {
        Artifact a;
        a.artifact_id = "a" + std::to_string(i) + "#1";
        a.task_id = "t0";
        a.role = AgentRole::Motor;
        a.content = "line1\nline2 \xF0\x9F\x98\x80";
        a.content_kind = ContentKind::code;
        a.created_at_ms = static_cast<int64_t>(rng() % 100000);
        run.artifacts.push_back(a);

        ValidationReport r;
        r.artifact_id = a.artifact_id;
        r.results.push_back({"check0", i % 2 == 0, "detail"});
        run.reports.push_back(r);
    }
    run.started_at_ms = 1000;
    run.finished_at_ms = 1000 + static_cast<int64_t>(rng() % 500000);
    run.status = rng() % 2 ? RunStatus::succeeded : RunStatus::failed;
    run.seed = static_cast<int64_t>(rng());
    return run;
}

} // namespace

TEST_CASE("pipeline runs round-trip through JSON field-for-field") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        PipelineRun run = random_run(rng);
        PipelineRun back = run_from_json(to_json(run));
        CHECK(back == run);
    }
}

TEST_CASE("save_run writes runs/<run_id>.json and load_run reads it back") {
    std::mt19937_64 rng(5);
    PipelineRun run = random_run(rng);
    run.run_id = "roundtrip";
    std::string dir = cortexc::test::scratch_dir("core-save");
    std::string path = save_run(run, dir);
    CHECK(path.find("runs/roundtrip.json") != std::string::npos);
    CHECK(load_run(path) == run);
}

TEST_CASE("save_run refuses unfinished runs") {
    PipelineRun run;
    run.run_id = "r";
    run.spec.spec_id = "s";
    CHECK_THROWS_AS(save_run(run, cortexc::test::scratch_dir("core-unfin")), Error);
}

TEST_CASE("check applicability defaults to the final artifact") {
    CheckSpec c;
    c.name = "n";
    CHECK(c.applies(ContentKind::integrated_code));
    CHECK_FALSE(c.applies(ContentKind::plan));
    CHECK_FALSE(c.applies(ContentKind::code));

    c.applies_to = {ContentKind::code};
    CHECK(c.applies(ContentKind::code));
    CHECK_FALSE(c.applies(ContentKind::integrated_code));
}

TEST_CASE("task graph keeps insertion order and rejects duplicates") {
    TaskGraph g;
    g.add(make_task("b", TaskKind::implement, "x"));
    g.add(make_task("a", TaskKind::implement, "x"));
    CHECK(g.order() == std::vector<std::string>{"b", "a"});
    CHECK(g.index_of("a") == 1);
    CHECK_THROWS_AS(g.add(make_task("a", TaskKind::implement, "x")), Error);
}
