#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "appforge/backend/fault.hpp"
#include "appforge/backend/scripted.hpp"
#include "appforge/orchestrator/orchestrator.hpp"

namespace appforge::scenario {

/// Marker detail used by generated fault schedules; fixture authors key
/// their repair-path contexts to this exact text.
inline constexpr const char* kInjectedFaultDetail = "injected compile fault";

/// Structural expectations a scenario pins down. Absent fields are not
/// checked. Expectations compare counts, versions, and outcomes, never
/// payload text.
struct Expectations {
    std::optional<std::string> outcome;  // "done" | "escalated"
    std::optional<int> final_plan_version;
    std::optional<int> improvement_records;
    std::optional<int> defects_observed;      // distinct defect ids across reports
    std::optional<int> final_report_defects;
    std::optional<double> coverage;           // of the final report
    std::optional<int> audit_items;
    std::map<std::string, int> feedback_events;   // origin -> exact count
    std::map<std::string, int> compile_attempts;  // module -> exact count

    json to_json() const;
    static Expectations from_json(const json& j);
};

/// A scenario bundles inputs, scripted fixtures, optional fault schedule,
/// budgets, and the expected structural outcome. Paths are relative to
/// the scenario file.
struct Scenario {
    std::string srs_path;
    std::string add_path;
    std::string knowledge_pack;
    std::string fixtures_dir;
    std::optional<std::string> fault_schedule_path;
    std::optional<std::string> fault_target;  // module the sweep injects into
    orchestrator::Budgets budgets;
    Expectations expectations;

    static Scenario load(const std::string& file);
    json to_json() const;
};

struct Verdict {
    bool pass = true;
    std::vector<std::string> mismatches;
};

struct ScenarioResult {
    Verdict verdict;
    orchestrator::RunOutcome outcome;
    json metrics;  // loop metrics plus outcome counters, one flat object
    std::string workspace_dir;
};

/// Runs the pipeline described by a scenario file inside `workspace_dir`
/// (created fresh) and checks the expectations. A fingerprint the run
/// needs but the fixture set lacks raises FixtureGapError with the
/// request kind and context digest.
ScenarioResult run_scenario(const std::string& scenario_file, const std::string& workspace_dir,
                            const std::optional<orchestrator::Budgets>& budgets_override = {});

/// Fixture overrides recorded by audit resolutions (amend directives).
backend::FixtureSet amendments_from_queue(const workspace::Workspace& ws);

/// Continues an escalated scenario run in `workspace_dir` after audit
/// resolutions have been recorded on the queue.
ScenarioResult resume_scenario(const std::string& scenario_file,
                               const std::string& workspace_dir);

struct SweepGrid {
    std::vector<int> self_debug{3};
    std::vector<int> plan_revision{2};
    std::vector<int> rectification{3};
    std::vector<double> fault_rates{0.0};
};

/// One deterministic run per grid point; the seed fixes the generated
/// fault schedules. Returns the tab-separated metrics table and writes it
/// to `out_path` when non-empty.
std::string sweep(const std::string& scenario_file, const SweepGrid& grid, std::uint64_t seed,
                  const std::string& work_root, const std::string& out_path = "");

/// Content digest of every file under `root` (relative path -> hash),
/// excluding the workspace lock. Two deterministic runs must agree.
std::map<std::string, std::string> tree_digest(const std::string& root);

}  // namespace appforge::scenario
