#pragma once

#include <map>
#include <vector>

#include "appforge/backend/gen.hpp"
#include "appforge/kb/store.hpp"
#include "appforge/model/graph.hpp"
#include "appforge/toolchain/toolchain.hpp"

namespace appforge::ca {

using model::ApiManifest;
using model::CodePlan;
using model::CompilationLog;
using model::DefectEntry;
using model::PlanStep;
using model::ProjectStructure;
using model::SourceUnit;

using UnitMap = std::map<std::string, SourceUnit>;  // module id -> unit

backend::GenRequest build_api_request(const CodePlan& plan, const kb::Store& store);

/// Folds proposal entries into a manifest, merging duplicate libraries
/// (elements_used unioned, first version constraint and purpose kept).
ApiManifest manifest_from_proposal(const json& payload);

ApiManifest analyze_apis(const CodePlan& plan, const kb::Store& store,
                         backend::Backend& backend);

backend::GenRequest build_unit_request(const PlanStep& step, const CodePlan& plan,
                                       const ProjectStructure& structure,
                                       const ApiManifest& manifest);

/// Unit path inside the workspace: `<module source dir>/<module>.unit.json`.
std::string unit_path(const ProjectStructure& structure, const std::string& module_id);

/// Creates the source unit for a plan step. Every dependency module must
/// already be compiled or DependencyNotReadyError is raised.
SourceUnit generate_unit(const PlanStep& step, const CodePlan& plan,
                         const ProjectStructure& structure, const ApiManifest& manifest,
                         backend::Backend& backend, const UnitMap& units);

/// Compiles one unit against the already-compiled ones and updates its
/// status from the log outcome.
CompilationLog compile_unit(SourceUnit& unit, const UnitMap& units,
                            toolchain::Toolchain& toolchain, int ordinal);

backend::GenRequest build_fix_request(const SourceUnit& unit, const CompilationLog& log,
                                      const CodePlan& plan, int attempt);

/// Replaces the failed unit's body with a fix-snippet response, increments
/// debug_attempts, and resets status to generated. BudgetExhausted when
/// the unit already used up `budget` attempts.
SourceUnit self_debug(const SourceUnit& unit, const CompilationLog& log, const CodePlan& plan,
                      backend::Backend& backend, int budget);

struct IntegrationOutcome {
    CompilationLog log;
    toolchain::LaunchOutcome launch;
};

/// Whole-workspace compile followed by the launch check.
IntegrationOutcome integration_build(const UnitMap& units, const ProjectStructure& structure,
                                     toolchain::Toolchain& toolchain, int ordinal);

/// Static inspection finding, reported via quality_check feedback events.
struct QualityIssue {
    std::string module_id;
    std::string rule;  // "visibility" | "undeclared-dependency-use"
    std::string detail;
};

json to_json(const QualityIssue& issue);

/// Static pass over stub bodies: contract visibilities checked against the
/// plan's visibility rules, and references that resolve only through
/// modules the unit does not depend on.
std::vector<QualityIssue> quality_check(const UnitMap& units, const CodePlan& plan);

backend::GenRequest build_rectification_request(const std::vector<DefectEntry>& defects,
                                                const CodePlan& plan,
                                                const ApiManifest& manifest,
                                                const std::vector<std::string>& target_modules,
                                                int round);

struct RectifyOutcome {
    std::vector<std::string> changed_unit_paths;
    ApiManifest manifest;  // possibly updated by the fix
};

/// Applies a rectification response to the units traced from the defects'
/// method signatures. Bodies outside that closure are rejected. Changed
/// units reset to generated for recompilation.
RectifyOutcome rectify(UnitMap& units, const std::vector<DefectEntry>& defects,
                       const CodePlan& plan, const ApiManifest& manifest,
                       backend::Backend& backend, int round);

}  // namespace appforge::ca
