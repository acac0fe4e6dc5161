#include <doctest.h>

#include <chrono>

#include "cortexc/integration.hpp"
#include "cortexc/status.hpp"
#include "test_support.hpp"

using namespace cortexc;

namespace {

Artifact code_artifact(const std::string& task_id, const std::string& content) {
    Artifact a;
    a.artifact_id = task_id + "#1";
    a.task_id = task_id;
    a.role = AgentRole::Motor;
    a.content = content;
    a.content_kind = ContentKind::code;
    return a;
}

CheckSpec check(const std::string& name, CheckMethod method, const std::string& argument,
                std::vector<ContentKind> applies_to = {ContentKind::code}) {
    CheckSpec c;
    c.name = name;
    c.method = method;
    c.argument = argument;
    c.applies_to = std::move(applies_to);
    return c;
}

Task done_task(const std::string& id, TaskKind kind, std::set<std::string> deps = {}) {
    Task t = make_task(id, kind, "desc of " + id, std::move(deps));
    t.status = TaskStatus::done;
    t.attempts = 1;
    return t;
}

} // namespace

TEST_CASE("contains_text checks pass on substring hits") {
    Artifact a = code_artifact("m1", "def move():\n    pass\n");
    auto report = validate_artifact(a, {check("has-move", CheckMethod::contains_text,
                                              "def move")});
    REQUIRE(report.results.size() == 1);
    CHECK(report.results[0].passed);
    CHECK(report.all_passed());

    auto miss = validate_artifact(a, {check("has-jump", CheckMethod::contains_text,
                                            "def jump")});
    CHECK_FALSE(miss.results[0].passed);
    CHECK(miss.results[0].detail.find("def jump") != std::string::npos);
}

TEST_CASE("external_command false fails with an exit-status detail") {
    Artifact a = code_artifact("m1", "content");
    auto report = validate_artifact(a, {check("always-fails", CheckMethod::external_command,
                                              "false")});
    REQUIRE(report.results.size() == 1);
    CHECK_FALSE(report.results[0].passed);
    CHECK(report.results[0].detail.find("exit status 1") != std::string::npos);
}

TEST_CASE("external_command true passes") {
    Artifact a = code_artifact("m1", "content");
    auto report = validate_artifact(a, {check("always-ok", CheckMethod::external_command,
                                              "true")});
    CHECK(report.results[0].passed);
}

TEST_CASE("external_command receives the artifact on stdin") {
    Artifact a = code_artifact("m1", "hello stdin\n");
    auto report = validate_artifact(a, {check("greps", CheckMethod::external_command,
                                              "grep -q hello")});
    CHECK(report.results[0].passed);
}

TEST_CASE("external_command sees the task id as $1") {
    Artifact a = code_artifact("m1", "x");
    auto match = validate_artifact(a, {check("id-is-m1", CheckMethod::external_command,
                                             "test \"$1\" = m1")});
    CHECK(match.results[0].passed);
    auto mismatch = validate_artifact(a, {check("id-is-zz", CheckMethod::external_command,
                                                "test \"$1\" = zz")});
    CHECK_FALSE(mismatch.results[0].passed);
}

TEST_CASE("a command that cannot spawn marks the check failed, not the report") {
    Artifact a = code_artifact("m1", "x");
    auto report = validate_artifact(
        a, {check("gone", CheckMethod::external_command, "/no/such/binary"),
            check("fine", CheckMethod::external_command, "true")});
    REQUIRE(report.results.size() == 2);
    CHECK_FALSE(report.results[0].passed);
    CHECK(report.results[1].passed);
}

TEST_CASE("command timeouts are failures with a timeout detail") {
    auto start = std::chrono::steady_clock::now();
    auto [code, detail] = run_command_with_input("sleep 5", "", "t", 150);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    CHECK(code < 0);
    CHECK(detail.find("timeout") != std::string::npos);
    CHECK(elapsed < 3000);
}

TEST_CASE("large artifacts are fed to commands that never read them") {
    // a child exiting without reading stdin must not wedge or kill us
    std::string big(1 << 20, 'x');
    auto [code, detail] = run_command_with_input("true", big, "t", 5000);
    CHECK(code == 0);
}

TEST_CASE("checks are filtered by content kind applicability") {
    Artifact plan;
    plan.artifact_id = "plan#1";
    plan.task_id = "plan";
    plan.role = AgentRole::Prefrontal;
    plan.content = "the plan";
    plan.content_kind = ContentKind::plan;

    auto report = validate_artifact(
        plan, {check("code-only", CheckMethod::contains_text, "def", {ContentKind::code}),
               check("plan-only", CheckMethod::contains_text, "plan", {ContentKind::plan})});
    REQUIRE(report.results.size() == 1);
    CHECK(report.results[0].check_name == "plan-only");
}

TEST_CASE("an empty applicable-check list yields an empty report") {
    Artifact a = code_artifact("m1", "x");
    auto report = validate_artifact(a, {});
    CHECK(report.results.empty());
    CHECK(report.all_passed()); // vacuously
}

TEST_CASE("scripted checks resolve through the script table") {
    Artifact a = code_artifact("m1", "x");
    ScriptTable scripts;
    int calls = 0;
    scripts["flaky"] = [&calls](const Artifact&) {
        ++calls;
        return std::make_pair(calls > 1, std::string("call " + std::to_string(calls)));
    };
    auto first = validate_artifact(a, {check("flaky", CheckMethod::scripted, "")}, scripts);
    CHECK_FALSE(first.results[0].passed);
    auto second = validate_artifact(a, {check("flaky", CheckMethod::scripted, "")}, scripts);
    CHECK(second.results[0].passed);

    auto missing = validate_artifact(a, {check("ghost", CheckMethod::scripted, "")}, scripts);
    CHECK_FALSE(missing.results[0].passed);
    CHECK(missing.results[0].detail.find("no script") != std::string::npos);
}

TEST_CASE("integrate orders sections topologically with delimiters") {
    TaskGraph g;
    g.add(done_task("plan", TaskKind::plan));
    g.add(done_task("d1", TaskKind::data_structures, {"plan"}));
    g.add(done_task("m1", TaskKind::implement, {"d1"}));
    g.add(make_task("integrate", TaskKind::integrate, "merge", {"m1"}));

    Artifact plan_a;
    plan_a.artifact_id = "plan#1";
    plan_a.task_id = "plan";
    plan_a.role = AgentRole::Prefrontal;
    plan_a.content = "plan body\nsecond line";
    plan_a.content_kind = ContentKind::plan;

    Artifact d1_a;
    d1_a.artifact_id = "d1#1";
    d1_a.task_id = "d1";
    d1_a.role = AgentRole::Parietal;
    d1_a.content = "schema body";
    d1_a.content_kind = ContentKind::schema;

    Artifact m1_a = code_artifact("m1", "code body\n");

    // shuffled input order; topological order must win
    Artifact merged = integrate({m1_a, plan_a, d1_a}, g);
    CHECK(merged.content_kind == ContentKind::integrated_code);
    CHECK(merged.task_id == "integrate");

    auto plan_pos = merged.content.find("=== plan (Prefrontal) ===");
    auto d1_pos = merged.content.find("=== d1 (Parietal) ===");
    auto m1_pos = merged.content.find("=== m1 (Motor) ===");
    REQUIRE(plan_pos != std::string::npos);
    REQUIRE(d1_pos != std::string::npos);
    REQUIRE(m1_pos != std::string::npos);
    CHECK(plan_pos < d1_pos);
    CHECK(d1_pos < m1_pos);

    // plan content is comment-prefixed, code is verbatim
    CHECK(merged.content.find("# plan body") != std::string::npos);
    CHECK(merged.content.find("# second line") != std::string::npos);
    CHECK(merged.content.find("code body\n") != std::string::npos);
}

TEST_CASE("integrate reports the missing task of an absent artifact") {
    TaskGraph g;
    g.add(done_task("plan", TaskKind::plan));
    g.add(done_task("m1", TaskKind::implement, {"plan"}));
    g.add(make_task("integrate", TaskKind::integrate, "merge", {"m1"}));

    Artifact plan_a;
    plan_a.artifact_id = "plan#1";
    plan_a.task_id = "plan";
    plan_a.role = AgentRole::Prefrontal;
    plan_a.content = "p";
    plan_a.content_kind = ContentKind::plan;

    try {
        integrate({plan_a}, g);
        FAIL("expected missing-artifact");
    } catch (const Error& e) {
        CHECK(e.code() == "missing-artifact");
        CHECK(std::string(e.what()).find("m1") != std::string::npos);
    }
}

TEST_CASE("integrate is deterministic and uses the latest attempt per task") {
    TaskGraph g;
    g.add(done_task("m1", TaskKind::implement));
    Artifact first = code_artifact("m1", "old body");
    Artifact second = code_artifact("m1", "new body");
    second.artifact_id = "m1#2";

    Artifact a = integrate({first, second}, g);
    Artifact b = integrate({first, second}, g);
    CHECK(a.content == b.content);
    CHECK(a.content.find("new body") != std::string::npos);
    CHECK(a.content.find("old body") == std::string::npos);
}

TEST_CASE("non-done tasks are not integrated") {
    TaskGraph g;
    g.add(done_task("m1", TaskKind::implement));
    Task pending = make_task("m2", TaskKind::implement, "never ran");
    g.add(pending);
    Artifact merged = integrate({code_artifact("m1", "body")}, g);
    CHECK(merged.content.find("=== m1 ") != std::string::npos);
    CHECK(merged.content.find("m2") == std::string::npos);
}

TEST_CASE("build_feedback lists every failed check") {
    Task t = done_task("m1", TaskKind::implement);
    t.attempts = 2;
    ValidationReport report;
    report.artifact_id = "m1#2";
    report.results = {{"syntax", false, "exit status 1"},
                      {"has-move", false, "substring not found"},
                      {"has-doc", true, "ok"}};
    FailureSummary summary = build_feedback(t, report);
    CHECK(summary.task_id == "m1");
    CHECK(summary.attempt == 2);
    REQUIRE(summary.failed_checks.size() == 2);

    std::string text = format_failure_summary(summary);
    CHECK(text.find("syntax") != std::string::npos);
    CHECK(text.find("has-move") != std::string::npos);
    CHECK(text.find("has-doc") == std::string::npos);
}

TEST_CASE("build_feedback rejects all-passed reports") {
    Task t = done_task("m1", TaskKind::implement);
    ValidationReport report;
    report.artifact_id = "m1#1";
    report.results = {{"ok", true, ""}};
    try {
        build_feedback(t, report);
        FAIL("expected no-failures");
    } catch (const Error& e) {
        CHECK(e.code() == "no-failures");
    }
}

TEST_CASE("validation does not mutate the artifact") {
    Artifact a = code_artifact("m1", "immutable");
    Artifact copy = a;
    (void)validate_artifact(a, {check("c", CheckMethod::contains_text, "immutable")});
    CHECK(a == copy);
}
