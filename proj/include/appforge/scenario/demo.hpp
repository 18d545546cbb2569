#pragma once

#include <string>

namespace appforge::scenario {

struct DemoScenario {
    std::string scenario_file;
    /// Fixture override a reviewer can feed to `audit resolve --action
    /// amend`; only written by scenarios that are built to escalate.
    std::string amendment_file;
};

/// Bundled tank-battle demo: three modules (model, logic, view), one
/// launch-blocking initialization defect repaired through a plan revision
/// and one collision-logic defect repaired through rectification.
DemoScenario write_tank_battle_scenario(const std::string& dir);

/// Single-module scenario whose fixtures are defect-free; the pipeline
/// finishes without a single feedback event.
DemoScenario write_all_clean_scenario(const std::string& dir);

/// A unit whose generated body and every fix snippet carry a compile
/// defect, so the run exhausts its budgets and escalates. Fixtures cover
/// budgets up to (max_debug, max_revisions); an amendment file with a
/// clean fix is written alongside for resume flows.
DemoScenario write_stuck_unit_scenario(const std::string& dir, int max_debug = 3,
                                       int max_revisions = 2);

/// Like the stuck-unit scenario but with clean payloads and a declared
/// fault target, so sweeps can inject compile defects into the logic
/// module at configurable rates.
DemoScenario write_fault_lab_scenario(const std::string& dir, int max_debug = 3,
                                      int max_revisions = 2);

}  // namespace appforge::scenario
