#include "appforge/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <cstdio>
#include <future>

namespace appforge::orchestrator {

using model::CompilationLog;
using model::FeedbackEvent;
using model::FeedbackOrigin;

// --- budgets ---

json Budgets::to_json() const {
    return json{{"self_debug", self_debug},
                {"plan_revision", plan_revision},
                {"rectification", rectification}};
}

Budgets Budgets::from_json(const json& j) {
    expect_fields(j, "budgets", {}, {"self_debug", "plan_revision", "rectification"});
    Budgets b;
    if (j.contains("self_debug")) b.self_debug = j.at("self_debug").get<int>();
    if (j.contains("plan_revision")) b.plan_revision = j.at("plan_revision").get<int>();
    if (j.contains("rectification")) b.rectification = j.at("rectification").get<int>();
    if (b.self_debug < 0 || b.plan_revision < 0 || b.rectification < 0) {
        throw SchemaError("budgets must be >= 0");
    }
    return b;
}

Budgets Budgets::parse(const std::string& spec) {
    Budgets b;
    if (std::sscanf(spec.c_str(), "%d,%d,%d", &b.self_debug, &b.plan_revision,
                    &b.rectification) != 3 ||
        b.self_debug < 0 || b.plan_revision < 0 || b.rectification < 0) {
        throw SchemaError("budgets must be 'D,P,R' with non-negative integers: " + spec);
    }
    return b;
}

// --- routing policy ---

std::string to_token(Decision decision) {
    switch (decision) {
        case Decision::SelfDebug: return "self-debug";
        case Decision::PlanRevision: return "plan-revision";
        case Decision::Rectify: return "rectify";
        case Decision::Escalate: return "escalate";
    }
    return {};
}

Decision route_feedback(const FeedbackEvent& event, const Budgets& budgets) {
    switch (event.origin) {
        case FeedbackOrigin::Compiler:
        case FeedbackOrigin::LaunchCheck:
            if (event.counters.self_debug < budgets.self_debug) {
                return Decision::SelfDebug;
            }
            if (event.counters.plan_revisions < budgets.plan_revision) {
                return Decision::PlanRevision;
            }
            return Decision::Escalate;
        case FeedbackOrigin::TestReport:
        case FeedbackOrigin::QualityCheck:
            if (event.counters.rectifications < budgets.rectification) {
                return Decision::Rectify;
            }
            return Decision::Escalate;
    }
    return Decision::Escalate;
}

// --- incremental rebuild ---

RebuildSets incremental_rebuild_set(const model::CodePlan& old_plan,
                                    const model::CodePlan& new_plan, const ca::UnitMap& units) {
    model::PlanDiff diff = model::plan_diff(old_plan, new_plan);
    std::set<std::string> conflicts = model::conflict_set(diff, new_plan.dep_graph);

    std::set<std::string> planned;
    for (const auto& step : new_plan.steps) {
        planned.insert(step.module_id);
    }

    RebuildSets sets;
    for (const auto& module : conflicts) {
        if (planned.count(module) > 0) {
            sets.regenerate.insert(module);
        }
    }
    for (const auto& [module, unit] : units) {
        if (planned.count(module) > 0 && sets.regenerate.count(module) == 0) {
            sets.reuse.insert(module);
        }
    }
    return sets;
}

// --- audit queue ---

json AuditItem::to_json() const {
    json out{{"id", id},
             {"event", model::to_json(event)},
             {"evidence", evidence},
             {"resume_state", resume_state},
             {"subject_kind", subject_kind},
             {"status", status}};
    if (!resolution.is_null()) {
        out["resolution"] = resolution;
    }
    return out;
}

AuditItem AuditItem::from_json(const json& j) {
    expect_fields(j, "audit item",
                  {"id", "event", "evidence", "resume_state", "subject_kind", "status"},
                  {"resolution"});
    AuditItem item;
    item.id = require_string(j, "audit item", "id");
    item.event = model::feedback_event_from_json(j.at("event"));
    item.evidence = j.at("evidence");
    item.resume_state = require_string(j, "audit item", "resume_state");
    item.subject_kind = require_string(j, "audit item", "subject_kind");
    item.status = require_string(j, "audit item", "status");
    if (j.contains("resolution")) {
        item.resolution = j.at("resolution");
    }
    return item;
}

std::vector<AuditItem> load_queue(const workspace::Workspace& ws) {
    if (!ws.exists("audit/queue.json")) {
        return {};
    }
    std::vector<AuditItem> queue;
    for (const auto& item : ws.read_json("audit/queue.json")) {
        queue.push_back(AuditItem::from_json(item));
    }
    return queue;
}

void save_queue(const workspace::Workspace& ws, const std::vector<AuditItem>& queue) {
    json out = json::array();
    for (const auto& item : queue) {
        out.push_back(item.to_json());
    }
    ws.write_json("audit/queue.json", out);
}

// --- metrics ---

double RunMetrics::reuse_ratio() const {
    int decided = reused + regenerated;
    if (decided == 0) {
        return 1.0;
    }
    return static_cast<double>(reused) / static_cast<double>(decided);
}

json RunMetrics::to_json() const {
    return json{{"iterations", iterations},
                {"feedback_events", json(feedback_events)},
                {"compile_attempts", json(compile_attempts)},
                {"reused", reused},
                {"regenerated", regenerated},
                {"rectify_rounds", rectify_rounds},
                {"reuse_ratio", reuse_ratio()}};
}

RunMetrics RunMetrics::from_json(const json& j) {
    RunMetrics m;
    m.iterations = j.value("iterations", 0);
    if (j.contains("feedback_events")) {
        for (auto it = j.at("feedback_events").begin(); it != j.at("feedback_events").end();
             ++it) {
            m.feedback_events[it.key()] = it.value().get<int>();
        }
    }
    if (j.contains("compile_attempts")) {
        for (auto it = j.at("compile_attempts").begin(); it != j.at("compile_attempts").end();
             ++it) {
            m.compile_attempts[it.key()] = it.value().get<int>();
        }
    }
    m.reused = j.value("reused", 0);
    m.regenerated = j.value("regenerated", 0);
    m.rectify_rounds = j.value("rectify_rounds", 0);
    return m;
}

// --- state machine edges ---

namespace {

std::string state_kind(const std::string& state) {
    auto paren = state.find('(');
    return paren == std::string::npos ? state : state.substr(0, paren);
}

}  // namespace

bool allowed_transition(const std::string& from, const std::string& to) {
    static const std::map<std::string, std::set<std::string>> edges{
        {"Planning", {"Structuring"}},
        {"Structuring", {"ApiAnalysis"}},
        {"ApiAnalysis", {"Generating", "IntegrationCheck"}},
        {"Generating", {"Compiling"}},
        {"Compiling",
         {"Generating", "Compiling", "SelfDebugging", "Revising", "IntegrationCheck",
          "Escalated"}},
        {"SelfDebugging", {"Compiling"}},
        {"Revising", {"Rebuilding"}},
        {"Rebuilding", {"Generating", "Compiling", "IntegrationCheck"}},
        {"IntegrationCheck",
         {"Testing", "SelfDebugging", "Revising", "Rectifying", "Escalated"}},
        {"Testing", {"Done", "Rectifying", "Escalated"}},
        {"Rectifying", {"Compiling", "Generating", "IntegrationCheck", "Escalated"}},
        {"Escalated", {"Generating", "Compiling", "IntegrationCheck", "Testing", "Escalated"}},
        {"Done", {}},
    };
    auto it = edges.find(state_kind(from));
    return it != edges.end() && it->second.count(state_kind(to)) > 0;
}

// --- orchestrator ---

Orchestrator::Orchestrator(workspace::Workspace& ws, const kb::Store& store,
                           backend::Backend& backend, toolchain::Toolchain& toolchain,
                           Budgets budgets, Options options)
    : ws_(ws),
      kb_(store),
      backend_(backend),
      toolchain_(toolchain),
      budgets_(budgets),
      options_(options) {}

void Orchestrator::enter_state(const std::string& state) {
    if (!trace_.empty() && !allowed_transition(trace_.back(), state)) {
        throw Error("state-machine", "illegal transition " + trace_.back() + " -> " + state);
    }
    trace_.push_back(state);
}

FeedbackEvent Orchestrator::make_event(FeedbackOrigin origin, const std::string& payload_ref,
                                       const std::string& subject) {
    FeedbackEvent event;
    event.origin = origin;
    event.payload_ref = payload_ref;
    event.subject = subject;
    auto unit = units_.find(subject);
    event.counters.self_debug = unit == units_.end() ? 0 : unit->second.debug_attempts;
    event.counters.plan_revisions = plan_.version - 1;
    auto rounds = defect_rounds_.find(subject);
    event.counters.rectifications = rounds == defect_rounds_.end() ? 0 : rounds->second;
    return event;
}

std::string Orchestrator::persist_new_event(const FeedbackEvent& event) {
    std::string token = model::to_token(event.origin);
    ++metrics_.feedback_events[token];
    return ws_.persist_event(event, next_event_ordinal_++);
}

json Orchestrator::evidence_for_unit(const std::string& module_id) const {
    auto unit = units_.find(module_id);
    std::string path = unit == units_.end() ? "" : unit->second.path;
    std::vector<int> log_ordinals;
    for (const auto& log : ws_.load_compile_logs()) {
        if (log.scope == path) {
            log_ordinals.push_back(log.ordinal);
        }
    }
    std::vector<int> plan_versions;
    for (int v = 1; v <= ws_.latest_plan_version(); ++v) {
        plan_versions.push_back(v);
    }
    return json{{"unit", path},
                {"compile_logs", json(log_ordinals)},
                {"plan_versions", json(plan_versions)}};
}

json Orchestrator::evidence_for_defect(const std::string& defect_id) const {
    std::vector<int> reports;
    for (int ordinal = 1; ordinal <= ws_.latest_report_ordinal(); ++ordinal) {
        for (const auto& defect : ws_.load_report(ordinal).defects) {
            if (defect.id == defect_id) {
                reports.push_back(ordinal);
                break;
            }
        }
    }
    auto rounds = defect_rounds_.find(defect_id);
    return json{{"defect", defect_id},
                {"reports", json(reports)},
                {"rectify_rounds", rounds == defect_rounds_.end() ? 0 : rounds->second}};
}

void Orchestrator::escalate(const FeedbackEvent& event, const std::string& subject_kind,
                            const std::string& resume_state, RunOutcome& outcome) {
    auto queue = load_queue(ws_);
    AuditItem item;
    item.id = "AUD-" + std::to_string(queue.size() + 1);
    item.event = event;
    item.evidence = subject_kind == "defect" ? evidence_for_defect(event.subject)
                                             : evidence_for_unit(event.subject);
    item.resume_state = resume_state;
    item.subject_kind = subject_kind;
    item.status = "open";
    queue.push_back(item);
    save_queue(ws_, queue);
    if (outcome.reason.empty()) {
        outcome.reason = "budget exhausted for " + event.subject;
    }
}

void Orchestrator::save_run_state(const std::string& run_outcome) const {
    json state{{"state", trace_.empty() ? "Planning" : trace_.back()},
               {"outcome", run_outcome},
               {"next_log_ordinal", next_log_ordinal_},
               {"next_event_ordinal", next_event_ordinal_},
               {"next_report_ordinal", next_report_ordinal_},
               {"defect_rounds", json(defect_rounds_)},
               {"open_defects", json(std::vector<std::string>(open_defects_.begin(),
                                                              open_defects_.end()))},
               {"accepted_defects", json(std::vector<std::string>(accepted_defects_.begin(),
                                                                  accepted_defects_.end()))},
               {"budgets", budgets_.to_json()},
               {"metrics", metrics_.to_json()}};
    ws_.write_json("artifacts/run-state.json", state);
}

void Orchestrator::load_run_state() {
    if (!ws_.exists("artifacts/run-state.json")) {
        throw UnknownRunError("no recorded run in workspace " + ws_.root());
    }
    json state = ws_.read_json("artifacts/run-state.json");
    next_log_ordinal_ = state.at("next_log_ordinal").get<int>();
    next_event_ordinal_ = state.at("next_event_ordinal").get<int>();
    next_report_ordinal_ = state.at("next_report_ordinal").get<int>();
    defect_rounds_.clear();
    for (auto it = state.at("defect_rounds").begin(); it != state.at("defect_rounds").end();
         ++it) {
        defect_rounds_[it.key()] = it.value().get<int>();
    }
    open_defects_.clear();
    for (const auto& d : state.at("open_defects")) {
        open_defects_.insert(d.get<std::string>());
    }
    accepted_defects_.clear();
    for (const auto& d : state.at("accepted_defects")) {
        accepted_defects_.insert(d.get<std::string>());
    }
    budgets_ = Budgets::from_json(state.at("budgets"));
    metrics_ = RunMetrics::from_json(state.at("metrics"));

    srs_ = ws_.srs();
    add_ = ws_.add();
    int version = ws_.latest_plan_version();
    if (version == 0) {
        throw UnknownRunError("workspace has no plan; cannot resume");
    }
    plan_ = ws_.load_plan(version);
    auto structure = ws_.load_structure();
    if (!structure) {
        throw UnknownRunError("workspace has no structure; cannot resume");
    }
    structure_ = *structure;
    manifest_ = ws_.load_manifest().value_or(model::ApiManifest{});
    units_.clear();
    for (auto& unit : ws_.load_units()) {
        units_[unit.module_id] = unit;
    }
    trace_ = ws_.state_trace();
    cases_ = ws_.load_all_cases();
    cases_ready_ = !cases_.empty();
    if (ws_.exists("artifacts/test-plan.json")) {
        test_plan_ = ta::test_plan_from_json(ws_.read_json("artifacts/test-plan.json"));
    }
}

void Orchestrator::finalize(RunOutcome& outcome, bool done, const std::string& reason) {
    if (done) {
        enter_state("Done");
    } else {
        enter_state("Escalated(" + reason + ")");
    }
    outcome.done = done;
    if (!done && outcome.reason.empty()) {
        outcome.reason = reason;
    }
    outcome.final_plan_version = plan_.version;
    outcome.final_report_ordinal = ws_.latest_report_ordinal();
    outcome.accepted_defects.assign(accepted_defects_.begin(), accepted_defects_.end());
    outcome.metrics = metrics_;
    ws_.persist_state_trace(trace_);
    save_run_state(done ? "done" : "escalated");
}

RunOutcome Orchestrator::run() {
    srs_ = ws_.srs();
    add_ = ws_.add();

    RunOutcome outcome;
    enter_state("Planning");
    copa::AnalysisResult analysis = copa::analyze_documents(srs_, add_, kb_);
    plan_ = copa::generate_plan(analysis, kb_, backend_, add_);
    ws_.persist_plan(plan_);

    enter_state("Structuring");
    structure_ = copa::generate_structure(plan_);
    ws_.persist_structure(structure_);

    enter_state("ApiAnalysis");
    manifest_ = ca::analyze_apis(plan_, kb_, backend_);
    ws_.persist_manifest(manifest_);
    // The dependency-management block of the structure mirrors the manifest.
    for (const auto& entry : manifest_.entries) {
        structure_.dep_config[entry.library_name] = entry.version_constraint;
    }
    ws_.persist_structure(structure_);

    return run_phases(Phase::Generation);
}

RunOutcome Orchestrator::run_phases(Phase phase) {
    RunOutcome outcome;
    while (phase != Phase::Finished) {
        switch (phase) {
            case Phase::Generation:
                phase = generation_phase(outcome);
                break;
            case Phase::Integration:
                phase = integration_phase(outcome);
                break;
            case Phase::Testing:
                phase = testing_phase(outcome);
                break;
            case Phase::Finished:
                break;
        }
    }
    return outcome;
}

namespace {

std::vector<std::string> module_order(const model::CodePlan& plan) {
    model::DepGraph combined = plan.dep_graph;
    for (const auto& step : plan.steps) {
        combined.emplace(step.module_id, std::vector<std::string>{});
    }
    return model::topo_order(combined);
}

}  // namespace

void Orchestrator::compile_ready_units(const std::vector<std::string>& order) {
    // Optimistic parallel sweep: compile every generated unit whose
    // dependencies are all compiled against the compiled snapshot. Results
    // are committed in module-id order only when the whole batch succeeds,
    // which makes the artifacts identical to the sequential path; any
    // failure discards the batch and the sequential loop takes over.
    std::vector<std::string> batch;
    for (const auto& module : order) {
        auto it = units_.find(module);
        if (it == units_.end() || it->second.status != model::UnitStatus::Generated) {
            continue;
        }
        bool ready = true;
        auto deps = plan_.dep_graph.find(module);
        if (deps != plan_.dep_graph.end()) {
            for (const auto& dep : deps->second) {
                auto dep_unit = units_.find(dep);
                if (dep_unit == units_.end() ||
                    dep_unit->second.status != model::UnitStatus::Compiled) {
                    ready = false;
                    break;
                }
            }
        }
        if (ready) {
            batch.push_back(module);
        }
    }
    if (batch.size() < 2) {
        return;
    }

    std::vector<model::SourceUnit> snapshot;
    for (const auto& [module, unit] : units_) {
        if (unit.status == model::UnitStatus::Compiled) {
            snapshot.push_back(unit);
        }
    }
    std::vector<std::future<model::CompilationLog>> futures;
    for (const auto& module : batch) {
        const model::SourceUnit& unit = units_.at(module);
        futures.push_back(std::async(std::launch::async, [this, unit, snapshot]() {
            return toolchain_.compile_unit(unit, snapshot, 0);
        }));
    }
    std::vector<model::CompilationLog> logs;
    bool all_ok = true;
    for (auto& future : futures) {
        logs.push_back(future.get());
        if (logs.back().outcome != model::BuildOutcome::Success) {
            all_ok = false;
        }
    }
    if (!all_ok) {
        return;  // sequential loop redoes the level with full routing
    }
    std::sort(logs.begin(), logs.end(),
              [](const model::CompilationLog& a, const model::CompilationLog& b) {
                  return a.scope < b.scope;
              });
    for (auto& log : logs) {
        log.ordinal = next_log_ordinal_++;
        ws_.persist_compile_log(log);
        for (auto& [module, unit] : units_) {
            if (unit.path == log.scope) {
                enter_state("Compiling(" + module + ")");
                unit.status = model::UnitStatus::Compiled;
                ws_.persist_unit(unit);
                ++metrics_.compile_attempts[module];
            }
        }
    }
}

Orchestrator::Phase Orchestrator::generation_phase(RunOutcome& outcome) {
    bool restart = true;
    while (restart) {
        restart = false;
        std::vector<std::string> order;
        try {
            order = module_order(plan_);
        } catch (const CycleError& e) {
            throw PlanValidationError(e.what());
        }
        if (options_.parallel_compile) {
            compile_ready_units(order);
        }
        for (const auto& module : order) {
            const model::PlanStep* step = plan_.find_step(module);
            if (step == nullptr) {
                continue;
            }
            auto it = units_.find(module);
            if (it != units_.end() && it->second.status == model::UnitStatus::Compiled) {
                continue;
            }
            if (it == units_.end()) {
                enter_state("Generating(" + module + ")");
                model::SourceUnit unit =
                    ca::generate_unit(*step, plan_, structure_, manifest_, backend_, units_);
                ws_.persist_unit(unit);
                it = units_.emplace(module, std::move(unit)).first;
            }

            while (it->second.status != model::UnitStatus::Compiled) {
                if (it->second.status == model::UnitStatus::Failed) {
                    it->second.status = model::UnitStatus::Generated;
                }
                enter_state("Compiling(" + module + ")");
                model::CompilationLog log =
                    ca::compile_unit(it->second, units_, toolchain_, next_log_ordinal_++);
                std::string log_ref = ws_.persist_compile_log(log);
                ws_.persist_unit(it->second);
                ++metrics_.compile_attempts[module];
                if (log.outcome == model::BuildOutcome::Success) {
                    break;
                }
                FeedbackEvent event = make_event(FeedbackOrigin::Compiler, log_ref, module);
                std::string event_ref = persist_new_event(event);
                if (!handle_build_failure(event, event_ref, log, outcome)) {
                    return Phase::Finished;
                }
                if (trace_.back() == "Rebuilding") {
                    restart = true;
                    break;
                }
                it = units_.find(module);  // self-debug replaced the unit
            }
            if (restart) {
                break;
            }
        }
    }
    return Phase::Integration;
}

/// Routes a compiler/launch failure. Returns false when the run escalated;
/// leaves the trace in "Rebuilding" when a plan revision was applied.
bool Orchestrator::handle_build_failure(const FeedbackEvent& event, const std::string& event_ref,
                                        const CompilationLog& context_log,
                                        RunOutcome& outcome) {
    Decision decision = route_feedback(event, budgets_);
    switch (decision) {
        case Decision::SelfDebug: {
            enter_state("SelfDebugging(" + event.subject + ")");
            auto it = units_.find(event.subject);
            model::SourceUnit fixed = ca::self_debug(it->second, context_log, plan_, backend_,
                                                     budgets_.self_debug);
            it->second = std::move(fixed);
            ws_.persist_unit(it->second);
            ++metrics_.iterations;
            return true;
        }
        case Decision::PlanRevision: {
            enter_state("Revising");
            model::CodePlan revised =
                copa::revise_plan(plan_, event, context_log, srs_, add_, kb_, backend_);
            ws_.persist_plan(revised);
            apply_revision(revised, event_ref);
            return true;
        }
        case Decision::Escalate:
        default: {
            std::string resume_state = trace_.back();
            escalate(event, "unit", resume_state, outcome);
            finalize(outcome, false,
                     "repair budgets exhausted for unit " + event.subject);
            return false;
        }
    }
}

void Orchestrator::apply_revision(const model::CodePlan& revised,
                                  const std::string& trigger_ref) {
    enter_state("Rebuilding");
    RebuildSets sets = incremental_rebuild_set(plan_, revised, units_);

    model::ProjectStructure new_structure = copa::generate_structure(revised);
    new_structure.dep_config = structure_.dep_config;

    std::vector<std::string> changed_paths;
    for (const auto& module : sets.regenerate) {
        changed_paths.push_back(ca::unit_path(new_structure, module));
    }
    std::sort(changed_paths.begin(), changed_paths.end());

    // Regenerated and removed units are dropped; reused ones keep status,
    // body, and debug counters.
    std::set<std::string> planned;
    for (const auto& step : revised.steps) {
        planned.insert(step.module_id);
    }
    for (auto it = units_.begin(); it != units_.end();) {
        if (sets.regenerate.count(it->first) > 0 || planned.count(it->first) == 0) {
            ws_.remove(it->second.path);
            it = units_.erase(it);
        } else {
            ++it;
        }
    }

    if (!changed_paths.empty()) {
        model::ImprovementRecord record;
        record.trigger = trigger_ref;
        record.changed_units = changed_paths;
        record.plan_version_before = plan_.version;
        record.plan_version_after = revised.version;
        ws_.record_improvement(record);
    }

    metrics_.reused += static_cast<int>(sets.reuse.size());
    metrics_.regenerated += static_cast<int>(sets.regenerate.size());
    ++metrics_.iterations;

    int old_version = plan_.version;
    plan_ = revised;
    structure_ = std::move(new_structure);
    ws_.persist_structure(structure_);

    // Contracts changed by the revision invalidate their derived cases.
    if (cases_ready_) {
        model::PlanDiff diff = model::plan_diff(ws_.load_plan(old_version), plan_);
        std::set<std::string> changed_signatures;
        for (const auto& [module, signatures] : diff.changed_contracts) {
            changed_signatures.insert(signatures.begin(), signatures.end());
        }
        auto matrix = ws_.load_matrix();
        if (matrix && !changed_signatures.empty()) {
            auto affected = ta::regenerate_affected(*matrix, {}, changed_signatures);
            cases_ = ta::apply_regeneration(cases_, affected, test_plan_, plan_);
            ws_.persist_matrix(ta::build_matrix(cases_));
            persist_cases_by_module();
        }
    }
}

Orchestrator::Phase Orchestrator::integration_phase(RunOutcome& outcome) {
    enter_state("IntegrationCheck");
    ca::IntegrationOutcome io =
        ca::integration_build(units_, structure_, toolchain_, next_log_ordinal_++);
    std::string log_ref = ws_.persist_compile_log(io.log);

    if (io.log.outcome == model::BuildOutcome::Failure) {
        // Attribute the failure to the first diagnostic's unit.
        std::string subject;
        for (const auto& diag : io.log.diagnostics) {
            for (const auto& [module, unit] : units_) {
                if (unit.path == diag.path) {
                    subject = module;
                    break;
                }
            }
            if (!subject.empty()) {
                break;
            }
        }
        if (subject.empty() && !units_.empty()) {
            subject = units_.begin()->first;
        }
        if (!subject.empty()) {
            units_.at(subject).status = model::UnitStatus::Failed;
            ws_.persist_unit(units_.at(subject));
        }
        FeedbackEvent event = make_event(FeedbackOrigin::Compiler, log_ref, subject);
        std::string event_ref = persist_new_event(event);
        if (!handle_build_failure(event, event_ref, io.log, outcome)) {
            return Phase::Finished;
        }
        return Phase::Generation;
    }

    if (!io.launch.ok) {
        std::string subject;
        for (const auto& [module, unit] : units_) {
            if (unit.path == io.launch.unit_path) {
                subject = module;
                break;
            }
        }
        if (subject.empty() && !units_.empty()) {
            subject = units_.begin()->first;
        }
        // The launch finding drives the fix context; the persisted payload
        // stays the integration log the event points at.
        CompilationLog launch_log;
        launch_log.scope = io.launch.unit_path;
        model::Diagnostic diag;
        diag.severity = model::DiagSeverity::Error;
        diag.error_type = "launch-check";
        diag.path = io.launch.unit_path;
        diag.line = 0;
        diag.message = io.launch.detail;
        launch_log.diagnostics.push_back(std::move(diag));
        launch_log.outcome = model::BuildOutcome::Failure;

        if (!subject.empty()) {
            units_.at(subject).status = model::UnitStatus::Failed;
            ws_.persist_unit(units_.at(subject));
        }
        FeedbackEvent event = make_event(FeedbackOrigin::LaunchCheck, log_ref, subject);
        std::string event_ref = persist_new_event(event);
        if (!handle_build_failure(event, event_ref, launch_log, outcome)) {
            return Phase::Finished;
        }
        return Phase::Generation;
    }

    // Static quality pass: findings are routed like test defects under the
    // rectification budget.
    auto issues = ca::quality_check(units_, plan_);
    if (!issues.empty()) {
        int quality_ordinal = 1;
        while (ws_.exists("artifacts/quality-" + std::to_string(quality_ordinal) + ".json")) {
            ++quality_ordinal;
        }
        json issue_list = json::array();
        for (const auto& issue : issues) {
            issue_list.push_back(ca::to_json(issue));
        }
        std::string rel = "artifacts/quality-" + std::to_string(quality_ordinal) + ".json";
        ws_.write_json(rel, issue_list);

        std::vector<model::DefectEntry> defects;
        std::map<std::string, int> per_module;
        for (const auto& issue : issues) {
            const model::PlanStep* step = plan_.find_step(issue.module_id);
            if (step == nullptr || step->contracts.empty()) {
                continue;  // nothing mechanical to rectify against
            }
            model::DefectEntry defect;
            defect.id = "QC-" + issue.module_id + "-" +
                        std::to_string(++per_module[issue.module_id]);
            defect.severity = model::DefectSeverity::Minor;
            defect.description = issue.rule + ": " + issue.detail;
            defect.test_input = json::object();
            defect.expected = "quality rules hold";
            defect.actual = issue.detail;
            defect.trace = {"QUALITY", step->contracts.front().signature};
            defects.push_back(std::move(defect));
        }
        if (!defects.empty()) {
            int handled = handle_defects(defects, rel, FeedbackOrigin::QualityCheck,
                                         "IntegrationCheck", outcome);
            if (handled == 2) {
                return Phase::Finished;
            }
            if (handled == 1) {
                return Phase::Generation;
            }
        }
    }
    return Phase::Testing;
}

void Orchestrator::persist_cases_by_module() {
    model::TraceabilityMatrix matrix = ta::build_matrix(cases_);
    std::map<std::string, std::set<std::string>> ids_by_module;
    for (const auto& row : matrix.rows) {
        ids_by_module[row.module_id].insert(row.test_case_ids.begin(),
                                            row.test_case_ids.end());
    }
    for (const auto& [module, ids] : ids_by_module) {
        std::vector<model::TestCase> module_cases;
        for (const auto& test_case : cases_) {
            if (ids.count(test_case.id) > 0) {
                module_cases.push_back(test_case);
            }
        }
        ws_.persist_cases(module, module_cases);
    }
}

int Orchestrator::handle_defects(const std::vector<model::DefectEntry>& outstanding,
                                 const std::string& payload_ref, FeedbackOrigin origin,
                                 const std::string& resume_state, RunOutcome& outcome) {
    if (outstanding.empty()) {
        return 0;
    }
    bool exhausted = false;
    std::string first_event_ref;
    for (const auto& defect : outstanding) {
        FeedbackEvent event = make_event(origin, payload_ref, defect.id);
        std::string ref = persist_new_event(event);
        if (first_event_ref.empty()) {
            first_event_ref = ref;
        }
        if (route_feedback(event, budgets_) == Decision::Escalate) {
            escalate(event, "defect", resume_state, outcome);
            exhausted = true;
        }
    }
    if (exhausted) {
        finalize(outcome, false, "rectification budget exhausted");
        return 2;
    }

    enter_state("Rectifying");
    int round = 0;
    for (const auto& defect : outstanding) {
        round = std::max(round, defect_rounds_[defect.id]);
    }
    ++round;
    ca::RectifyOutcome rectified =
        ca::rectify(units_, outstanding, plan_, manifest_, backend_, round);
    for (const auto& defect : outstanding) {
        ++defect_rounds_[defect.id];
    }
    ++metrics_.rectify_rounds;
    ++metrics_.iterations;

    manifest_ = rectified.manifest;
    ws_.persist_manifest(manifest_);
    for (const auto& path : rectified.changed_unit_paths) {
        for (const auto& [module, unit] : units_) {
            if (unit.path == path) {
                ws_.persist_unit(unit);
            }
        }
    }
    if (!rectified.changed_unit_paths.empty()) {
        model::ImprovementRecord record;
        record.trigger = first_event_ref;
        record.changed_units = rectified.changed_unit_paths;
        record.plan_version_before = plan_.version;
        record.plan_version_after = plan_.version;
        ws_.record_improvement(record);
    }
    return 1;
}

Orchestrator::Phase Orchestrator::testing_phase(RunOutcome& outcome) {
    if (!cases_ready_) {
        std::vector<model::SourceUnit> unit_list;
        for (const auto& [module, unit] : units_) {
            unit_list.push_back(unit);
        }
        test_plan_ = ta::generate_test_plan(srs_, add_, plan_, unit_list, kb_, options_.strict);
        ws_.write_json("artifacts/test-plan.json", ta::to_json(test_plan_));
        cases_ = ta::derive_all_cases(test_plan_, plan_);
        ws_.persist_matrix(ta::build_matrix(cases_));
        persist_cases_by_module();
        cases_ready_ = true;
    }

    enter_state("Testing");
    std::vector<model::SourceUnit> unit_list;
    for (const auto& [module, unit] : units_) {
        unit_list.push_back(unit);
    }
    model::TestReport report = ta::execute_and_report(cases_, unit_list, plan_, toolchain_,
                                                      next_report_ordinal_++, open_defects_);
    std::string report_ref = ws_.persist_report(report);
    persist_cases_by_module();

    std::vector<model::DefectEntry> outstanding;
    for (const auto& defect : report.defects) {
        if (accepted_defects_.count(defect.id) == 0) {
            outstanding.push_back(defect);
        }
    }
    open_defects_.clear();
    for (const auto& defect : outstanding) {
        open_defects_.insert(defect.id);
    }

    if (outstanding.empty()) {
        finalize(outcome, true, "");
        return Phase::Finished;
    }
    int handled =
        handle_defects(outstanding, report_ref, FeedbackOrigin::TestReport, "Testing", outcome);
    if (handled == 2) {
        return Phase::Finished;
    }
    return Phase::Generation;
}

RunOutcome Orchestrator::resume() {
    load_run_state();

    auto queue = load_queue(ws_);
    std::vector<AuditItem*> open_items;
    for (auto& item : queue) {
        if (item.status == "open") {
            open_items.push_back(&item);
        }
    }
    if (open_items.empty()) {
        throw UnresolvedItemError("no open audit items in workspace " + ws_.root());
    }
    for (AuditItem* item : open_items) {
        if (item->resolution.is_null()) {
            throw UnresolvedItemError("audit item " + item->id + " has no recorded resolution");
        }
    }

    bool aborted = false;
    std::string resume_state;
    for (AuditItem* item : open_items) {
        std::string action = item->resolution.at("action").get<std::string>();
        if (action == "abort") {
            aborted = true;
        } else if (action == "skip") {
            if (item->subject_kind != "defect") {
                throw UnresolvedItemError("skip is only valid for defect items (" + item->id +
                                          ")");
            }
            accepted_defects_.insert(item->event.subject);
            defect_rounds_.erase(item->event.subject);
        } else if (action == "amend") {
            if (item->subject_kind == "unit") {
                auto unit = units_.find(item->event.subject);
                if (unit != units_.end()) {
                    unit->second.debug_attempts = 0;
                    if (unit->second.status == model::UnitStatus::Failed) {
                        unit->second.status = model::UnitStatus::Generated;
                    }
                    ws_.persist_unit(unit->second);
                }
            } else {
                defect_rounds_.erase(item->event.subject);
            }
        } else {
            throw UnresolvedItemError("unknown resolution action '" + action + "' on " +
                                      item->id);
        }
        item->status = "resolved";
        if (resume_state.empty()) {
            resume_state = item->resume_state;
        }
    }
    save_queue(ws_, queue);

    if (aborted) {
        // Terminal: the workspace stays as the escalation left it.
        RunOutcome outcome;
        outcome.done = false;
        outcome.reason = "aborted by audit resolution";
        outcome.final_plan_version = plan_.version;
        outcome.final_report_ordinal = ws_.latest_report_ordinal();
        outcome.metrics = metrics_;
        save_run_state("escalated");
        return outcome;
    }

    std::string kind = resume_state.substr(0, resume_state.find('('));
    Phase phase = Phase::Generation;
    if (kind == "IntegrationCheck") {
        phase = Phase::Integration;
    } else if (kind == "Testing" || kind == "Rectifying") {
        phase = Phase::Testing;
    }
    return run_phases(phase);
}

}  // namespace appforge::orchestrator
