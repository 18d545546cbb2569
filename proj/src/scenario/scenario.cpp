#include "appforge/scenario/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <sstream>

namespace appforge::scenario {

namespace fs = std::filesystem;

json Expectations::to_json() const {
    json out = json::object();
    if (outcome) out["outcome"] = *outcome;
    if (final_plan_version) out["final_plan_version"] = *final_plan_version;
    if (improvement_records) out["improvement_records"] = *improvement_records;
    if (defects_observed) out["defects_observed"] = *defects_observed;
    if (final_report_defects) out["final_report_defects"] = *final_report_defects;
    if (coverage) out["coverage"] = *coverage;
    if (audit_items) out["audit_items"] = *audit_items;
    if (!feedback_events.empty()) out["feedback_events"] = json(feedback_events);
    if (!compile_attempts.empty()) out["compile_attempts"] = json(compile_attempts);
    return out;
}

Expectations Expectations::from_json(const json& j) {
    expect_fields(j, "expectations", {},
                  {"outcome", "final_plan_version", "improvement_records", "defects_observed",
                   "final_report_defects", "coverage", "audit_items", "feedback_events",
                   "compile_attempts"});
    Expectations e;
    if (j.contains("outcome")) e.outcome = j.at("outcome").get<std::string>();
    if (j.contains("final_plan_version")) e.final_plan_version = j.at("final_plan_version").get<int>();
    if (j.contains("improvement_records")) e.improvement_records = j.at("improvement_records").get<int>();
    if (j.contains("defects_observed")) e.defects_observed = j.at("defects_observed").get<int>();
    if (j.contains("final_report_defects")) e.final_report_defects = j.at("final_report_defects").get<int>();
    if (j.contains("coverage")) e.coverage = j.at("coverage").get<double>();
    if (j.contains("audit_items")) e.audit_items = j.at("audit_items").get<int>();
    if (j.contains("feedback_events")) {
        for (auto it = j.at("feedback_events").begin(); it != j.at("feedback_events").end();
             ++it) {
            e.feedback_events[it.key()] = it.value().get<int>();
        }
    }
    if (j.contains("compile_attempts")) {
        for (auto it = j.at("compile_attempts").begin(); it != j.at("compile_attempts").end();
             ++it) {
            e.compile_attempts[it.key()] = it.value().get<int>();
        }
    }
    return e;
}

json Scenario::to_json() const {
    json out{{"srs", srs_path},
             {"add", add_path},
             {"knowledge_pack", knowledge_pack},
             {"fixtures", fixtures_dir},
             {"budgets", budgets.to_json()},
             {"expectations", expectations.to_json()}};
    if (fault_schedule_path) out["fault_schedule"] = *fault_schedule_path;
    if (fault_target) out["fault_target"] = *fault_target;
    return out;
}

Scenario Scenario::load(const std::string& file) {
    json j;
    try {
        j = load_json_file(file);
    } catch (const Error& e) {
        throw ScenarioSchemaError("cannot load scenario " + file + ": " + e.what());
    }
    try {
        expect_fields(j, "scenario", {"srs", "add", "knowledge_pack", "fixtures"},
                      {"fault_schedule", "fault_target", "budgets", "expectations"});
        Scenario s;
        fs::path base = fs::path(file).parent_path();
        auto resolve = [&](const std::string& rel) { return (base / rel).string(); };
        s.srs_path = resolve(require_string(j, "scenario", "srs"));
        s.add_path = resolve(require_string(j, "scenario", "add"));
        s.knowledge_pack = resolve(require_string(j, "scenario", "knowledge_pack"));
        s.fixtures_dir = resolve(require_string(j, "scenario", "fixtures"));
        if (j.contains("fault_schedule")) {
            s.fault_schedule_path = resolve(j.at("fault_schedule").get<std::string>());
        }
        if (j.contains("fault_target")) {
            s.fault_target = j.at("fault_target").get<std::string>();
        }
        if (j.contains("budgets")) {
            s.budgets = orchestrator::Budgets::from_json(j.at("budgets"));
        }
        if (j.contains("expectations")) {
            s.expectations = Expectations::from_json(j.at("expectations"));
        }
        return s;
    } catch (const SchemaError& e) {
        throw ScenarioSchemaError(std::string("scenario ") + file + ": " + e.what());
    }
}

namespace {

int distinct_defects(const workspace::Workspace& ws) {
    std::set<std::string> ids;
    for (int ordinal = 1; ordinal <= ws.latest_report_ordinal(); ++ordinal) {
        for (const auto& defect : ws.load_report(ordinal).defects) {
            ids.insert(defect.id);
        }
    }
    return static_cast<int>(ids.size());
}

Verdict check_expectations(const Expectations& expect, const orchestrator::RunOutcome& outcome,
                           const workspace::Workspace& ws) {
    Verdict verdict;
    auto mismatch = [&](const std::string& field, const std::string& expected,
                        const std::string& actual) {
        verdict.pass = false;
        verdict.mismatches.push_back(field + ": expected " + expected + ", got " + actual);
    };

    if (expect.outcome) {
        std::string actual = outcome.done ? "done" : "escalated";
        if (actual != *expect.outcome) {
            mismatch("outcome", *expect.outcome, actual);
        }
    }
    if (expect.final_plan_version && outcome.final_plan_version != *expect.final_plan_version) {
        mismatch("final_plan_version", std::to_string(*expect.final_plan_version),
                 std::to_string(outcome.final_plan_version));
    }
    if (expect.improvement_records) {
        int actual = static_cast<int>(ws.improvements().size());
        if (actual != *expect.improvement_records) {
            mismatch("improvement_records", std::to_string(*expect.improvement_records),
                     std::to_string(actual));
        }
    }
    if (expect.defects_observed) {
        int actual = distinct_defects(ws);
        if (actual != *expect.defects_observed) {
            mismatch("defects_observed", std::to_string(*expect.defects_observed),
                     std::to_string(actual));
        }
    }
    if (expect.final_report_defects || expect.coverage) {
        int ordinal = ws.latest_report_ordinal();
        if (ordinal == 0) {
            mismatch("final_report", "present", "absent");
        } else {
            model::TestReport report = ws.load_report(ordinal);
            if (expect.final_report_defects &&
                static_cast<int>(report.defects.size()) != *expect.final_report_defects) {
                mismatch("final_report_defects", std::to_string(*expect.final_report_defects),
                         std::to_string(report.defects.size()));
            }
            if (expect.coverage && report.coverage != *expect.coverage) {
                mismatch("coverage", std::to_string(*expect.coverage),
                         std::to_string(report.coverage));
            }
        }
    }
    if (expect.audit_items) {
        int actual = static_cast<int>(orchestrator::load_queue(ws).size());
        if (actual != *expect.audit_items) {
            mismatch("audit_items", std::to_string(*expect.audit_items),
                     std::to_string(actual));
        }
    }
    for (const auto& [origin, expected] : expect.feedback_events) {
        auto it = outcome.metrics.feedback_events.find(origin);
        int actual = it == outcome.metrics.feedback_events.end() ? 0 : it->second;
        if (actual != expected) {
            mismatch("feedback_events." + origin, std::to_string(expected),
                     std::to_string(actual));
        }
    }
    for (const auto& [module, expected] : expect.compile_attempts) {
        auto it = outcome.metrics.compile_attempts.find(module);
        int actual = it == outcome.metrics.compile_attempts.end() ? 0 : it->second;
        if (actual != expected) {
            mismatch("compile_attempts." + module, std::to_string(expected),
                     std::to_string(actual));
        }
    }
    return verdict;
}

json flat_metrics(const orchestrator::RunOutcome& outcome, const workspace::Workspace& ws) {
    json metrics = outcome.metrics.to_json();
    metrics["outcome"] = outcome.done ? "done" : "escalated";
    metrics["final_plan_version"] = outcome.final_plan_version;
    metrics["improvement_records"] = ws.improvements().size();
    metrics["defects_observed"] = distinct_defects(ws);
    metrics["audit_items"] = orchestrator::load_queue(ws).size();
    return metrics;
}

std::unique_ptr<backend::Backend> build_backend(const Scenario& s,
                                                const backend::FixtureSet& overrides) {
    backend::FixtureSet fixtures = backend::FixtureSet::load_dir(s.fixtures_dir);
    fixtures.merge(overrides);
    std::shared_ptr<backend::Backend> scripted =
        std::make_shared<backend::ScriptedBackend>(std::move(fixtures));
    if (s.fault_schedule_path) {
        backend::FaultSchedule schedule =
            backend::FaultSchedule::load_file(*s.fault_schedule_path);
        return std::make_unique<backend::FaultInjectingBackend>(scripted, std::move(schedule));
    }
    // Wrap-free path keeps ownership simple: hand the shared scripted
    // backend to a forwarding holder.
    struct Holder : backend::Backend {
        std::shared_ptr<backend::Backend> inner;
        explicit Holder(std::shared_ptr<backend::Backend> b) : inner(std::move(b)) {}
        backend::GenResponse generate(const backend::GenRequest& request) override {
            return inner->generate(request);
        }
    };
    return std::make_unique<Holder>(scripted);
}

ScenarioResult finish(const Scenario& s, const orchestrator::RunOutcome& outcome,
                      const workspace::Workspace& ws, const std::string& workspace_dir) {
    ScenarioResult result;
    result.outcome = outcome;
    result.verdict = check_expectations(s.expectations, outcome, ws);
    result.metrics = flat_metrics(outcome, ws);
    result.workspace_dir = workspace_dir;
    return result;
}

}  // namespace

ScenarioResult run_scenario(const std::string& scenario_file, const std::string& workspace_dir,
                            const std::optional<orchestrator::Budgets>& budgets_override) {
    Scenario s = Scenario::load(scenario_file);
    orchestrator::Budgets budgets = budgets_override.value_or(s.budgets);

    workspace::Workspace ws = workspace::Workspace::init(
        workspace_dir, read_text_file(s.srs_path), read_text_file(s.add_path));
    workspace::Lock lock(ws.root());

    kb::Store store = kb::Store::load_pack(s.knowledge_pack);
    auto backend = build_backend(s, {});
    toolchain::StubToolchain stub;
    orchestrator::Orchestrator engine(ws, store, *backend, stub, budgets);

    try {
        orchestrator::RunOutcome outcome = engine.run();
        return finish(s, outcome, ws, workspace_dir);
    } catch (const NoFixtureError& e) {
        throw FixtureGapError(e.what());
    }
}

backend::FixtureSet amendments_from_queue(const workspace::Workspace& ws) {
    backend::FixtureSet overrides;
    for (const auto& item : orchestrator::load_queue(ws)) {
        if (item.resolution.is_null() || !item.resolution.contains("action")) {
            continue;
        }
        if (item.resolution.at("action").get<std::string>() != "amend") {
            continue;
        }
        const json& content = item.resolution.value("content", json());
        if (content.is_array()) {
            for (const auto& f : content) {
                overrides.add(backend::Fixture::from_json(f));
            }
        } else if (content.is_object()) {
            overrides.add(backend::Fixture::from_json(content));
        }
    }
    return overrides;
}

ScenarioResult resume_scenario(const std::string& scenario_file,
                               const std::string& workspace_dir) {
    Scenario s = Scenario::load(scenario_file);
    workspace::Workspace ws = workspace::Workspace::open(workspace_dir);
    workspace::Lock lock(ws.root());

    kb::Store store = kb::Store::load_pack(s.knowledge_pack);
    auto backend = build_backend(s, amendments_from_queue(ws));
    toolchain::StubToolchain stub;
    orchestrator::Orchestrator engine(ws, store, *backend, stub, s.budgets);

    try {
        orchestrator::RunOutcome outcome = engine.resume();
        return finish(s, outcome, ws, workspace_dir);
    } catch (const NoFixtureError& e) {
        throw FixtureGapError(e.what());
    }
}

std::string sweep(const std::string& scenario_file, const SweepGrid& grid, std::uint64_t seed,
                  const std::string& work_root, const std::string& out_path) {
    if (grid.self_debug.empty() || grid.plan_revision.empty() || grid.rectification.empty() ||
        grid.fault_rates.empty()) {
        throw ScenarioSchemaError("sweep grid must not be empty");
    }
    Scenario base = Scenario::load(scenario_file);

    std::ostringstream table;
    table << "d\tp\tr\tfault_rate\toutcome\tplan_version\timprovements\titerations"
          << "\tevents_compiler\tevents_launch_check\tevents_test_report\tevents_quality_check"
          << "\treuse_ratio\tcompile_attempts_total\n";

    fs::create_directories(work_root);
    int row = 0;
    for (int d : grid.self_debug) {
        for (int p : grid.plan_revision) {
            for (int r : grid.rectification) {
                for (double rate : grid.fault_rates) {
                    orchestrator::Budgets budgets;
                    budgets.self_debug = d;
                    budgets.plan_revision = p;
                    budgets.rectification = r;

                    // Each grid point runs in its own workspace with a
                    // schedule derived from (seed, rate).
                    std::string point_dir =
                        (fs::path(work_root) / ("point-" + std::to_string(row))).string();
                    std::string scenario_path = scenario_file;
                    std::optional<std::string> schedule_file;
                    if (rate > 0.0) {
                        if (!base.fault_target) {
                            throw ScenarioSchemaError(
                                "scenario has no fault_target; cannot sweep fault rates");
                        }
                        backend::FaultSchedule schedule;
                        for (backend::RequestKind kind :
                             {backend::RequestKind::SourceUnit,
                              backend::RequestKind::FixSnippet}) {
                            backend::FaultRule rule;
                            rule.kind = kind;
                            rule.module = *base.fault_target;
                            rule.marker = {model::MarkerKind::Compile, kInjectedFaultDetail,
                                           std::nullopt};
                            rule.rate = rate;
                            rule.seed = seed;
                            schedule.rules.push_back(std::move(rule));
                        }
                        // Materialize a point-local scenario with the schedule.
                        fs::create_directories(point_dir);
                        schedule_file = (fs::path(point_dir) / "fault-schedule.json").string();
                        write_text_file(*schedule_file, canonical_dump(schedule.to_json()));
                        Scenario point = base;
                        point.fault_schedule_path = schedule_file;
                        json doc = point.to_json();
                        // Paths are already resolved; rewrite them absolute.
                        doc["srs"] = base.srs_path;
                        doc["add"] = base.add_path;
                        doc["knowledge_pack"] = base.knowledge_pack;
                        doc["fixtures"] = base.fixtures_dir;
                        doc["fault_schedule"] = *schedule_file;
                        scenario_path = (fs::path(point_dir) / "scenario.json").string();
                        write_text_file(scenario_path, canonical_dump(doc));
                    }

                    std::string ws_dir = (fs::path(point_dir) / "workspace").string();
                    ScenarioResult result = run_scenario(scenario_path, ws_dir, budgets);
                    const json& m = result.metrics;

                    int attempts_total = 0;
                    for (const auto& [module, count] :
                         result.outcome.metrics.compile_attempts) {
                        attempts_total += count;
                    }
                    auto events = [&](const char* origin) {
                        auto it = result.outcome.metrics.feedback_events.find(origin);
                        return it == result.outcome.metrics.feedback_events.end() ? 0
                                                                                  : it->second;
                    };
                    table << d << '\t' << p << '\t' << r << '\t' << json(rate).dump() << '\t'
                          << m.at("outcome").get<std::string>() << '\t'
                          << result.outcome.final_plan_version << '\t'
                          << m.at("improvement_records").get<int>() << '\t'
                          << result.outcome.metrics.iterations << '\t' << events("compiler")
                          << '\t' << events("launch_check") << '\t' << events("test_report")
                          << '\t' << events("quality_check") << '\t'
                          << json(result.outcome.metrics.reuse_ratio()).dump() << '\t'
                          << attempts_total << '\n';
                    ++row;
                }
            }
        }
    }

    std::string text = table.str();
    if (!out_path.empty()) {
        write_text_file(out_path, text);
    }
    return text;
}

std::map<std::string, std::string> tree_digest(const std::string& root) {
    std::map<std::string, std::string> digest;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        std::string rel = fs::relative(entry.path(), root).string();
        if (rel == ".appforge.lock") {
            continue;
        }
        digest[rel] = fnv1a_hex(read_text_file(entry.path().string()));
    }
    return digest;
}

}  // namespace appforge::scenario
