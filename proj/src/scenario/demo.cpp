#include "appforge/scenario/demo.hpp"

#include <algorithm>
#include <filesystem>

#include "appforge/agents/ca.hpp"
#include "appforge/agents/copa.hpp"
#include "appforge/agents/ta.hpp"
#include "appforge/scenario/scenario.hpp"

namespace appforge::scenario {

namespace fs = std::filesystem;

using model::ArchElement;
using model::MethodContract;
using model::ParamSpec;
using model::RequirementItem;

namespace {

MethodContract contract(const std::string& signature, std::vector<ParamSpec> params,
                        const std::string& returns,
                        std::vector<std::string> exception_conditions = {}) {
    MethodContract c;
    c.signature = signature;
    c.visibility = model::Visibility::Public;
    c.params = std::move(params);
    c.returns = returns;
    c.exception_conditions = std::move(exception_conditions);
    return c;
}

ParamSpec int_param(const std::string& name, std::optional<std::pair<double, double>> range,
                    std::vector<std::string> invalid_classes = {}) {
    ParamSpec p;
    p.name = name;
    p.semantic_type = "int";
    p.numeric_range = range;
    p.invalid_classes = std::move(invalid_classes);
    return p;
}

std::vector<RequirementItem> tank_srs() {
    auto req = [](const std::string& id, model::RequirementKind kind, const std::string& text,
                  std::vector<std::string> constraints, const std::string& source) {
        RequirementItem r;
        r.id = id;
        r.kind = kind;
        r.text = text;
        r.constraints = std::move(constraints);
        r.source_ref = source;
        return r;
    };
    using K = model::RequirementKind;
    return {
        req("REQ-001", K::Functional,
            "Players damage enemy tanks with shells; decreaseHealth applies damage to the "
            "stored tankHealth and clamps at zero.",
            {"damage is an integer between 0 and 100"}, "srs:3.1"),
        req("REQ-002", K::Functional,
            "Two tanks collide when their hulls overlap on both axes; checkCollision must "
            "flag diagonal contact as well as straight contact.",
            {}, "srs:3.2"),
        req("REQ-003", K::Functional,
            "Game state is initialized before the first round; initializeState seeds every "
            "tankPosition.",
            {}, "srs:3.3"),
        req("REQ-004", K::Functional,
            "The battlefield view renders every tank with its health bar.", {}, "srs:3.4"),
        req("REQ-005", K::Functional,
            "The HUD can query the current tank state by id (getTank).", {}, "srs:3.5"),
        req("REQ-US-1", K::UserStory,
            "As a player I steer my own vehicle and shoot enemies to win the round.", {},
            "srs:2.1"),
        req("REQ-AC-1", K::AcceptanceCriterion,
            "The game launches to the battle screen without errors.", {}, "srs:4.1"),
    };
}

std::vector<ArchElement> tank_add() {
    ArchElement model_element;
    model_element.module_id = "model";
    model_element.responsibilities =
        "Holds TankState records for every tank in play (REQ-005). Fields include tankHealth "
        "and tankPosition snapshots.";
    model_element.contracts = {contract(
        "getTank(int tankId)", {int_param("tankId", std::nullopt, {"unknown tank id"})},
        "TankState")};
    model_element.patterns = {"repository"};
    model_element.tech_constraints = {"Java 17"};

    ArchElement logic_element;
    logic_element.module_id = "logic";
    logic_element.responsibilities =
        "Core game rules for the tank battle: shell damage (REQ-001), collision detection "
        "(REQ-002), and state initialization before play (REQ-003). Implemented by "
        "GameStateData and CollisionChecker over TankState.";
    logic_element.contracts = {
        contract("decreaseHealth(int tankId, int damage)",
                 {int_param("tankId", std::nullopt, {"unknown tank id"}),
                  int_param("damage", std::make_pair(0.0, 100.0))},
                 "void", {"damage exceeding remaining health"}),
        contract("checkCollision(int dx, int dy)",
                 {int_param("dx", std::make_pair(-1.0, 1.0)),
                  int_param("dy", std::make_pair(-1.0, 1.0))},
                 "boolean"),
    };
    logic_element.patterns = {"strategy"};
    logic_element.tech_constraints = {"Java 17"};
    logic_element.depends_on = {"model"};

    ArchElement view_element;
    view_element.module_id = "view";
    view_element.responsibilities =
        "Draws the battlefield and health bars on the JavaFX scene graph (REQ-004).";
    view_element.contracts = {contract("render()", {}, "void")};
    view_element.patterns = {"observer"};
    view_element.tech_constraints = {"JavaFX 21"};
    view_element.depends_on = {"logic"};

    return {model_element, logic_element, view_element};
}

void write_kb_pack(const std::string& dir) {
    auto doc = [&](const std::string& id, const std::string& corpus, const std::string& pillar,
                   std::vector<std::string> keywords, const std::string& body) {
        kb::KnowledgeDoc d{id, corpus, pillar, std::move(keywords), body};
        write_text_file((fs::path(dir) / (id + ".json")).string(),
                        canonical_dump(kb::to_json(d)));
    };
    doc("add-layering", "srs-add", "ADDs", {"architecture", "modules", "layering", "java"},
        "Layered module decomposition with explicit dependency direction.");
    doc("ieee-830-template", "srs-add", "Standards", {"srs", "requirements", "template"},
        "Requirement statement template with identifiers and traceability.");
    doc("javafx-graphics", "coding", "API Library", {"javafx", "graphics", "scene", "render"},
        "JavaFX Graphics: Canvas and GraphicsContext usage patterns.");
    doc("java-style", "coding", "Coding Standards", {"java", "style", "naming"},
        "Java naming and visibility conventions.");
    doc("junit-5", "testing", "Testing Tools", {"java", "javafx", "junit", "unit"},
        "JUnit 5 test methods with guard assertions.");
    doc("boundary-analysis", "testing", "Testing Criteria",
        {"boundary", "equivalence", "partitioning"},
        "Equivalence classes and boundary pairs per numeric limit.");
}

json plan_proposal_payload(const std::vector<ArchElement>& add,
                           const std::string& logic_rationale,
                           const std::vector<MethodContract>& logic_contracts) {
    json steps = json::array();
    for (const auto& element : add) {
        json contracts = json::array();
        if (element.module_id == "logic") {
            for (const auto& c : logic_contracts) {
                contracts.push_back(model::to_json(c));
            }
        } else {
            for (const auto& c : element.contracts) {
                contracts.push_back(model::to_json(c));
            }
        }
        std::string rationale = element.module_id == "model"  ? "state records first"
                                : element.module_id == "view" ? "rendering last"
                                                              : logic_rationale;
        steps.push_back(json{{"module_id", element.module_id},
                             {"rationale", rationale},
                             {"contracts", contracts}});
    }
    json packages{{"name", "basicTankWarApp"},
                  {"children",
                   json::array({json{{"name", "logic"},
                                     {"children", json::array()},
                                     {"modules", json::array({"logic"})}},
                                json{{"name", "model"},
                                     {"children", json::array()},
                                     {"modules", json::array({"model"})}},
                                json{{"name", "view"},
                                     {"children", json::array()},
                                     {"modules", json::array({"view"})}}})},
                  {"modules", json::array()}};
    return json{{"steps", steps},
                {"dep_graph",
                 json{{"model", json::array()}, {"logic", json::array({"model"})},
                      {"view", json::array({"logic"})}}},
                {"packages", packages},
                {"arrangement_rules",
                 json{{"inheritance", json::array({json::array({"BattleView", "Canvas"})})},
                      {"visibility_rules", json::array({"view=public"})}}}};
}

json api_proposal_payload() {
    json entry1{{"library_name", "JavaFX Graphics"},
                {"version_constraint", "21"},
                {"elements_used", json::array({"Canvas"})},
                {"purpose", "battlefield rendering"}};
    json entry2 = entry1;
    entry2["elements_used"] = json::array({"GraphicsContext"});
    return json{{"entries", json::array({entry1, entry2})}};
}

json stub_body_payload(std::vector<std::string> declares, std::vector<std::string> references,
                       json markers = json::array()) {
    return json{{"declares", json(declares)},
                {"references", json(references)},
                {"defect_markers", markers}};
}

json tank_model_body() {
    return stub_body_payload({"TankState", "getTank", "tankRegistry"}, {});
}

json tank_view_body() {
    return stub_body_payload({"BattleView", "render"}, {"GameStateData", "tankHealth"});
}

struct ScenarioFiles {
    std::string dir;
    std::vector<RequirementItem> srs;
    std::vector<ArchElement> add;
    kb::Store store;

    explicit ScenarioFiles(const std::string& base_dir, std::vector<RequirementItem> reqs,
                           std::vector<ArchElement> elements)
        : dir(base_dir), srs(std::move(reqs)), add(std::move(elements)) {
        fs::create_directories(dir);
        write_text_file((fs::path(dir) / "srs.json").string(),
                        canonical_dump(model::srs_to_json(srs)));
        write_text_file((fs::path(dir) / "add.json").string(),
                        canonical_dump(model::add_to_json(add)));
        write_kb_pack((fs::path(dir) / "kb").string());
        store = kb::Store::load_pack((fs::path(dir) / "kb").string());
    }

    std::string finish(const backend::FixtureSet& fixtures, const json& scenario_extra,
                       const Expectations& expectations,
                       const orchestrator::Budgets& budgets) const {
        fixtures.write_dir((fs::path(dir) / "fixtures").string());
        json doc{{"srs", "srs.json"},
                 {"add", "add.json"},
                 {"knowledge_pack", "kb"},
                 {"fixtures", "fixtures"},
                 {"budgets", budgets.to_json()},
                 {"expectations", expectations.to_json()}};
        for (auto it = scenario_extra.begin(); it != scenario_extra.end(); ++it) {
            doc[it.key()] = it.value();
        }
        std::string file = (fs::path(dir) / "scenario.json").string();
        write_text_file(file, canonical_dump(doc));
        return file;
    }
};

model::SourceUnit unit_for(const model::CodePlan& plan, const model::ProjectStructure& structure,
                           const std::string& module, const json& body, int attempts) {
    model::SourceUnit unit;
    unit.path = ca::unit_path(structure, module);
    unit.module_id = module;
    unit.plan_version = plan.version;
    unit.body = model::stub_body_from_json(body);
    unit.status = model::UnitStatus::Generated;
    unit.debug_attempts = attempts;
    return unit;
}

model::CompilationLog launch_failure_log(const std::string& unit_path,
                                         const std::string& detail) {
    model::CompilationLog log;
    log.scope = unit_path;
    model::Diagnostic d;
    d.severity = model::DiagSeverity::Error;
    d.error_type = "launch-check";
    d.path = unit_path;
    d.line = 0;
    d.message = detail;
    log.diagnostics.push_back(std::move(d));
    log.outcome = model::BuildOutcome::Failure;
    return log;
}

model::FeedbackEvent event_for(model::FeedbackOrigin origin, const std::string& subject) {
    model::FeedbackEvent event;
    event.origin = origin;
    event.payload_ref = "";  // not part of any request context
    event.subject = subject;
    return event;
}

}  // namespace

DemoScenario write_tank_battle_scenario(const std::string& dir) {
    ScenarioFiles files(dir, tank_srs(), tank_add());
    backend::FixtureSet fixtures;

    // Planning.
    copa::AnalysisResult analysis = copa::analyze_documents(files.srs, files.add, files.store);
    auto logic_contracts_v1 = files.add[1].contracts;
    json proposal_v1 =
        plan_proposal_payload(files.add, "game rules after the model", logic_contracts_v1);
    backend::GenRequest plan_request = copa::build_plan_request(analysis, files.store);
    fixtures.add_response(plan_request, proposal_v1, "initial tank battle plan");
    model::CodePlan plan_v1 = copa::plan_from_proposal(analysis, proposal_v1, files.add);
    model::ProjectStructure structure_v1 = copa::generate_structure(plan_v1);

    // API analysis.
    backend::GenRequest api_request = ca::build_api_request(plan_v1, files.store);
    fixtures.add_response(api_request, api_proposal_payload(), "JavaFX graphics entry");
    model::ApiManifest manifest = ca::manifest_from_proposal(api_proposal_payload());

    // Source units for plan v1. The logic body ships two seeded defects:
    // an uninitialized position that blocks the launch check and a
    // collision routine that misses diagonal contact at the boundary.
    json logic_body_v1 = stub_body_payload(
        {"GameStateData", "CollisionChecker", "decreaseHealth", "checkCollision", "tankHealth",
         "tankPosition"},
        {"TankState", "getTank"},
        json::array(
            {json{{"kind", "init"}, {"detail", "uninitialized tankPosition"}},
             json{{"kind", "logic"},
                  {"detail", "boundary coordinate calculation misses diagonal contact"},
                  {"target_signature", "checkCollision(int dx, int dy)"}}}));
    for (const auto& step : plan_v1.steps) {
        json body = step.module_id == "model"   ? tank_model_body()
                    : step.module_id == "logic" ? logic_body_v1
                                                : tank_view_body();
        fixtures.add_response(ca::build_unit_request(step, plan_v1, structure_v1, manifest),
                              body, step.module_id + " unit, plan v1");
    }

    // Three launch-driven self-debug rounds that fail to clear the defect.
    std::string logic_path = ca::unit_path(structure_v1, "logic");
    model::CompilationLog launch_log =
        launch_failure_log(logic_path, "uninitialized tankPosition");
    for (int attempt = 1; attempt <= 3; ++attempt) {
        model::SourceUnit unit = unit_for(plan_v1, structure_v1, "logic", logic_body_v1,
                                          attempt - 1);
        fixtures.add_response(ca::build_fix_request(unit, launch_log, plan_v1, attempt),
                              logic_body_v1, "ineffective launch fix, attempt " +
                                                 std::to_string(attempt));
    }

    // Plan revision: the logic contract set gains an initialization step.
    auto logic_contracts_v2 = logic_contracts_v1;
    logic_contracts_v2.push_back(contract("initializeState()", {}, "void"));
    json proposal_v2 = plan_proposal_payload(
        files.add, "game rules after the model; initialize state before play",
        logic_contracts_v2);
    model::FeedbackEvent launch_event = event_for(model::FeedbackOrigin::LaunchCheck, "logic");
    backend::GenRequest revision_request = copa::build_revision_request(
        plan_v1, launch_event, launch_log,
        copa::traced_requirements(plan_v1, files.add, files.srs, "logic"),
        copa::traced_elements(files.add, "logic"), files.store);
    fixtures.add_response(revision_request, proposal_v2, "plan revision adding initialization");
    model::CodePlan plan_v2 = copa::plan_from_revision(plan_v1, proposal_v2, files.add);
    model::ProjectStructure structure_v2 = copa::generate_structure(plan_v2);

    // Regenerated units under plan v2: the initialization defect is gone,
    // the collision defect survives until testing.
    json logic_body_v2 = stub_body_payload(
        {"GameStateData", "CollisionChecker", "decreaseHealth", "checkCollision",
         "initializeState", "tankHealth", "tankPosition"},
        {"TankState", "getTank"},
        json::array({json{{"kind", "logic"},
                          {"detail",
                           "boundary coordinate calculation misses diagonal contact"},
                          {"target_signature", "checkCollision(int dx, int dy)"}}}));
    for (const auto& step : plan_v2.steps) {
        if (step.module_id == "model") {
            continue;  // reused, never re-requested
        }
        json body = step.module_id == "logic" ? logic_body_v2 : tank_view_body();
        fixtures.add_response(ca::build_unit_request(step, plan_v2, structure_v2, manifest),
                              body, step.module_id + " unit, plan v2");
    }

    // Rectification of the boundary defects found by the testing agent.
    ta::TestPlan test_plan =
        ta::generate_test_plan(files.srs, files.add, plan_v2, {}, files.store, false);
    std::vector<model::TestCase> cases = ta::derive_all_cases(test_plan, plan_v2);
    std::vector<model::DefectEntry> defects;
    for (const auto& test_case : cases) {
        if (test_case.category == model::CaseCategory::Boundary &&
            model::method_name(test_case.trace.method_signature) == "checkCollision") {
            model::DefectEntry defect;
            defect.id = ta::defect_id_for(test_case.id);
            defect.severity = model::DefectSeverity::Blocker;
            defect.trace = test_case.trace;
            defects.push_back(std::move(defect));
        }
    }
    std::sort(defects.begin(), defects.end(),
              [](const model::DefectEntry& a, const model::DefectEntry& b) {
                  return a.id < b.id;
              });
    json fixed_logic_body = stub_body_payload(
        {"GameStateData", "CollisionChecker", "decreaseHealth", "checkCollision",
         "initializeState", "tankHealth", "tankPosition"},
        {"TankState", "getTank"});
    json rectification{{"unit_bodies", json{{"logic", fixed_logic_body}}}};
    fixtures.add_response(
        ca::build_rectification_request(defects, plan_v2, manifest, {"logic"}, 1),
        rectification, "diagonal collision fix");

    Expectations expect;
    expect.outcome = "done";
    expect.final_plan_version = 2;
    expect.improvement_records = 2;
    expect.defects_observed = 8;
    expect.final_report_defects = 0;
    expect.coverage = 1.0;
    expect.audit_items = 0;
    expect.feedback_events = {{"compiler", 0}, {"launch_check", 4}, {"test_report", 8},
                              {"quality_check", 0}};
    expect.compile_attempts = {{"model", 1}, {"logic", 6}, {"view", 2}};

    DemoScenario out;
    out.scenario_file = files.finish(fixtures, json::object(), expect, orchestrator::Budgets{});
    return out;
}

DemoScenario write_all_clean_scenario(const std::string& dir) {
    RequirementItem req;
    req.id = "REQ-001";
    req.kind = model::RequirementKind::Functional;
    req.text = "The application starts and run() executes the main loop once.";
    req.source_ref = "srs:1.1";

    ArchElement app;
    app.module_id = "app";
    app.responsibilities = "Main loop and startup (REQ-001).";
    app.contracts = {contract("run()", {}, "void")};
    app.tech_constraints = {"Java 17"};

    ScenarioFiles files(dir, {req}, {app});
    backend::FixtureSet fixtures;

    copa::AnalysisResult analysis = copa::analyze_documents(files.srs, files.add, files.store);
    json proposal{{"steps", json::array({json{{"module_id", "app"},
                                              {"rationale", "single module"},
                                              {"contracts", json::array({model::to_json(
                                                  app.contracts.front())})}}})},
                  {"dep_graph", json{{"app", json::array()}}},
                  {"packages",
                   json{{"name", "app"}, {"children", json::array()},
                        {"modules", json::array({"app"})}}},
                  {"arrangement_rules",
                   json{{"inheritance", json::array()}, {"visibility_rules", json::array()}}}};
    fixtures.add_response(copa::build_plan_request(analysis, files.store), proposal,
                          "single-module plan");
    model::CodePlan plan = copa::plan_from_proposal(analysis, proposal, files.add);
    model::ProjectStructure structure = copa::generate_structure(plan);

    fixtures.add_response(ca::build_api_request(plan, files.store),
                          json{{"entries", json::array()}}, "no third-party libraries");
    model::ApiManifest manifest;

    fixtures.add_response(
        ca::build_unit_request(plan.steps.front(), plan, structure, manifest),
        stub_body_payload({"App", "run"}, {}), "clean app unit");

    Expectations expect;
    expect.outcome = "done";
    expect.final_plan_version = 1;
    expect.improvement_records = 0;
    expect.defects_observed = 0;
    expect.final_report_defects = 0;
    expect.coverage = 1.0;
    expect.audit_items = 0;
    expect.feedback_events = {{"compiler", 0}, {"launch_check", 0}, {"test_report", 0},
                              {"quality_check", 0}};
    expect.compile_attempts = {{"app", 1}};

    DemoScenario out;
    out.scenario_file = files.finish(fixtures, json::object(), expect, orchestrator::Budgets{});
    return out;
}

namespace {

/// Shared replay for the stuck-unit and fault-lab scenarios. The logic
/// module keeps failing to compile: in the stuck variant the defect
/// marker is baked into the fixture payloads, in the fault-lab variant
/// payloads are clean and a fault schedule injects the same marker.
DemoScenario write_failing_logic_scenario(const std::string& dir, int max_debug,
                                          int max_revisions, bool seeded) {
    ScenarioFiles files(dir, tank_srs(), tank_add());
    backend::FixtureSet fixtures;

    json marker = json{{"kind", "compile"}, {"detail", kInjectedFaultDetail}};
    auto logic_declares = [](int version) {
        std::vector<std::string> declares{"GameStateData", "CollisionChecker",
                                          "decreaseHealth", "checkCollision", "tankHealth",
                                          "tankPosition"};
        for (int v = 1; v < version; ++v) {
            declares.push_back("reinitialize" + std::to_string(v));
        }
        return declares;
    };
    auto logic_clean_body = [&](int version) {
        return stub_body_payload(logic_declares(version), {"TankState", "getTank"});
    };
    auto logic_broken_body = [&](int version) {
        return stub_body_payload(logic_declares(version), {"TankState", "getTank"},
                                 json::array({marker}));
    };

    copa::AnalysisResult analysis = copa::analyze_documents(files.srs, files.add, files.store);
    auto logic_contracts = files.add[1].contracts;
    json proposal =
        plan_proposal_payload(files.add, "game rules after the model", logic_contracts);
    fixtures.add_response(copa::build_plan_request(analysis, files.store), proposal,
                          "initial plan");
    model::CodePlan plan = copa::plan_from_proposal(analysis, proposal, files.add);
    model::ProjectStructure structure = copa::generate_structure(plan);

    fixtures.add_response(ca::build_api_request(plan, files.store), api_proposal_payload(),
                          "JavaFX graphics entry");
    model::ApiManifest manifest = ca::manifest_from_proposal(api_proposal_payload());

    model::SourceUnit model_unit;
    std::string amendment_file;
    toolchain::StubToolchain stub;

    for (int version = 1; version <= max_revisions + 1; ++version) {
        // Unit fixtures for this plan version.
        for (const auto& step : plan.steps) {
            json body = step.module_id == "model" ? tank_model_body()
                        : step.module_id == "view"
                            ? tank_view_body()
                            : (seeded ? logic_broken_body(version) : logic_clean_body(version));
            fixtures.add_response(ca::build_unit_request(step, plan, structure, manifest), body,
                                  step.module_id + " unit, plan v" + std::to_string(version));
            if (step.module_id == "model" && version == 1) {
                model_unit = unit_for(plan, structure, "model", tank_model_body(), 0);
                model_unit.status = model::UnitStatus::Compiled;
            }
        }

        // The compile failure the run will observe at this version: the
        // injected marker on an otherwise resolvable body.
        model::SourceUnit broken =
            unit_for(plan, structure, "logic", logic_broken_body(version), 0);
        model::CompilationLog failure_log = stub.compile_unit(broken, {model_unit}, 0);

        // Fix snippets for every attempt (all still defective).
        for (int attempt = 1; attempt <= max_debug; ++attempt) {
            broken.debug_attempts = attempt - 1;
            backend::GenRequest fix_request =
                ca::build_fix_request(broken, failure_log, plan, attempt);
            json fix_body = seeded ? logic_broken_body(version) : logic_clean_body(version);
            fixtures.add_response(fix_request, fix_body,
                                  "fix attempt " + std::to_string(attempt) + ", plan v" +
                                      std::to_string(version));
            if (version == max_revisions + 1 && attempt == 1) {
                // A clean override a reviewer can apply via audit resolve.
                backend::Fixture amend;
                amend.kind = backend::to_token(fix_request.kind);
                amend.schema_id = fix_request.schema_id;
                amend.fingerprint = fix_request.fingerprint;
                amend.payload = logic_clean_body(version);
                amend.note = "amended fix clearing the injected defect";
                amendment_file = (fs::path(dir) / "amendment.json").string();
                write_text_file(amendment_file, canonical_dump(amend.to_json()));
            }
        }

        if (version > max_revisions) {
            break;
        }

        // Plan revision keeps the pipeline going: each one adds another
        // initialization contract to the logic step.
        auto revised_contracts = logic_contracts;
        for (int v = 1; v <= version; ++v) {
            revised_contracts.push_back(
                contract("reinitialize" + std::to_string(v) + "()", {}, "void"));
        }
        json revised_proposal = plan_proposal_payload(
            files.add, "game rules after the model; rework initialization r" +
                           std::to_string(version),
            revised_contracts);
        model::FeedbackEvent event = event_for(model::FeedbackOrigin::Compiler, "logic");
        backend::GenRequest revision_request = copa::build_revision_request(
            plan, event, failure_log,
            copa::traced_requirements(plan, files.add, files.srs, "logic"),
            copa::traced_elements(files.add, "logic"), files.store);
        fixtures.add_response(revision_request, revised_proposal,
                              "revision " + std::to_string(version));
        plan = copa::plan_from_revision(plan, revised_proposal, files.add);
        structure = copa::generate_structure(plan);
    }

    Expectations expect;
    json extra = json::object();
    orchestrator::Budgets budgets;
    budgets.self_debug = max_debug;
    budgets.plan_revision = max_revisions;
    if (seeded) {
        expect.outcome = "escalated";
        expect.audit_items = 1;
        expect.final_plan_version = max_revisions + 1;
        expect.compile_attempts = {{"logic", (max_revisions + 1) * (1 + max_debug)},
                                   {"model", 1}};
        expect.feedback_events = {{"compiler", (max_revisions + 1) * (1 + max_debug)},
                                  {"launch_check", 0}};
    } else {
        extra["fault_target"] = "logic";
        expect.outcome = "done";
        expect.final_plan_version = 1;
        expect.improvement_records = 0;
        expect.final_report_defects = 0;
        expect.audit_items = 0;
    }

    DemoScenario out;
    out.scenario_file = files.finish(fixtures, extra, expect, budgets);
    out.amendment_file = amendment_file;
    return out;
}

}  // namespace

DemoScenario write_stuck_unit_scenario(const std::string& dir, int max_debug,
                                       int max_revisions) {
    return write_failing_logic_scenario(dir, max_debug, max_revisions, true);
}

DemoScenario write_fault_lab_scenario(const std::string& dir, int max_debug,
                                      int max_revisions) {
    return write_failing_logic_scenario(dir, max_debug, max_revisions, false);
}

}  // namespace appforge::scenario
