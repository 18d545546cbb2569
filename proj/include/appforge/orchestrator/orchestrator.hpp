#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "appforge/agents/ca.hpp"
#include "appforge/agents/copa.hpp"
#include "appforge/agents/ta.hpp"
#include "appforge/backend/gen.hpp"
#include "appforge/kb/store.hpp"
#include "appforge/toolchain/toolchain.hpp"
#include "appforge/workspace/workspace.hpp"

namespace appforge::orchestrator {

/// Repair budgets: self-debug attempts per unit body, plan revisions per
/// run, rectification rounds per defect.
struct Budgets {
    int self_debug = 3;
    int plan_revision = 2;
    int rectification = 3;

    json to_json() const;
    static Budgets from_json(const json& j);
    /// Parses "D,P,R".
    static Budgets parse(const std::string& spec);
};

enum class Decision { SelfDebug, PlanRevision, Rectify, Escalate };

std::string to_token(Decision decision);

/// The routing policy, cheapest repair first:
///  - compiler / launch_check: self-debug while the unit has attempts
///    left, then plan revision while revisions remain, else escalate;
///  - test_report / quality_check: rectify while the defect has rounds
///    left, else escalate.
Decision route_feedback(const model::FeedbackEvent& event, const Budgets& budgets);

struct RebuildSets {
    std::set<std::string> reuse;
    std::set<std::string> regenerate;
};

/// Splits the planned modules into reusable and regenerated sets after a
/// plan revision: regenerate = conflict set of the diff, reuse = the rest.
/// Reused units keep status and body; regenerated ones start over with a
/// fresh self-debug budget.
RebuildSets incremental_rebuild_set(const model::CodePlan& old_plan,
                                    const model::CodePlan& new_plan, const ca::UnitMap& units);

struct AuditItem {
    std::string id;
    model::FeedbackEvent event;
    json evidence;
    std::string resume_state;
    std::string subject_kind;  // "unit" | "defect" | "run"
    std::string status;        // "open" | "resolved"
    json resolution;           // {action, content?} once resolved

    json to_json() const;
    static AuditItem from_json(const json& j);
};

std::vector<AuditItem> load_queue(const workspace::Workspace& ws);
void save_queue(const workspace::Workspace& ws, const std::vector<AuditItem>& queue);

/// Loop metrics for one run.
struct RunMetrics {
    int iterations = 0;  // repair actions taken (debugs + revisions + rectifies)
    std::map<std::string, int> feedback_events;   // origin token -> count
    std::map<std::string, int> compile_attempts;  // unit path -> count
    int reused = 0;
    int regenerated = 0;
    int rectify_rounds = 0;

    /// reused / (reused + regenerated); 1.0 by convention when no
    /// revision ever ran.
    double reuse_ratio() const;
    json to_json() const;
    static RunMetrics from_json(const json& j);
};

struct RunOutcome {
    bool done = false;
    std::string reason;  // escalation reason when not done
    int final_plan_version = 0;
    int final_report_ordinal = 0;
    std::vector<std::string> accepted_defects;
    RunMetrics metrics;
};

struct Options {
    bool strict = false;
    bool parallel_compile = false;
};

/// True when the state machine may move between the two state labels
/// (parenthesized qualifiers are ignored).
bool allowed_transition(const std::string& from, const std::string& to);

/// Drives the agents through the closed loop over one workspace:
/// Planning -> Structuring -> ApiAnalysis -> per-module Generate/Compile
/// (with self-debug and plan-revision repair) -> IntegrationCheck ->
/// Testing -> (Rectifying -> re-Compile -> re-Test)* until the report is
/// clean or a budget runs out and the issue lands in the audit queue.
class Orchestrator {
public:
    Orchestrator(workspace::Workspace& ws, const kb::Store& store, backend::Backend& backend,
                 toolchain::Toolchain& toolchain, Budgets budgets, Options options = {});

    /// Full pipeline from Planning. The workspace must be freshly
    /// initialized (no prior run).
    RunOutcome run();

    /// Continues an escalated run after every open audit item carries a
    /// resolution. Amendments must already be merged into the backend by
    /// the caller; this applies counter resets, skips, and aborts, then
    /// re-enters the pipeline at the recorded state.
    RunOutcome resume();

private:
    enum class Phase { Generation, Integration, Testing, Finished };

    void enter_state(const std::string& state);
    model::FeedbackEvent make_event(model::FeedbackOrigin origin,
                                    const std::string& payload_ref, const std::string& subject);
    std::string persist_new_event(const model::FeedbackEvent& event);

    RunOutcome run_phases(Phase phase);
    Phase generation_phase(RunOutcome& outcome);
    Phase integration_phase(RunOutcome& outcome);
    Phase testing_phase(RunOutcome& outcome);

    bool handle_build_failure(const model::FeedbackEvent& event, const std::string& event_ref,
                              const model::CompilationLog& context_log, RunOutcome& outcome);
    int handle_defects(const std::vector<model::DefectEntry>& outstanding,
                       const std::string& payload_ref, model::FeedbackOrigin origin,
                       const std::string& resume_state, RunOutcome& outcome);
    void persist_cases_by_module();
    void apply_revision(const model::CodePlan& revised, const std::string& trigger_ref);
    void escalate(const model::FeedbackEvent& event, const std::string& subject_kind,
                  const std::string& resume_state, RunOutcome& outcome);
    json evidence_for_unit(const std::string& module_id) const;
    json evidence_for_defect(const std::string& defect_id) const;

    void compile_ready_units(const std::vector<std::string>& order);
    void save_run_state(const std::string& outcome) const;
    void load_run_state();
    void finalize(RunOutcome& outcome, bool done, const std::string& reason);

    workspace::Workspace& ws_;
    const kb::Store& kb_;
    backend::Backend& backend_;
    toolchain::Toolchain& toolchain_;
    Budgets budgets_;
    Options options_;

    // Run context (rebuilt from the workspace on resume).
    std::vector<model::RequirementItem> srs_;
    std::vector<model::ArchElement> add_;
    model::CodePlan plan_;
    model::ProjectStructure structure_;
    model::ApiManifest manifest_;
    ca::UnitMap units_;
    std::vector<model::TestCase> cases_;
    ta::TestPlan test_plan_;
    bool cases_ready_ = false;

    std::vector<std::string> trace_;
    int next_log_ordinal_ = 1;
    int next_event_ordinal_ = 1;
    int next_report_ordinal_ = 1;
    std::map<std::string, int> defect_rounds_;
    std::set<std::string> open_defects_;
    std::set<std::string> accepted_defects_;
    RunMetrics metrics_;
};

}  // namespace appforge::orchestrator
