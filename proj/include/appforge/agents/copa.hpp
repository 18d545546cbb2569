#pragma once

#include <vector>

#include "appforge/backend/gen.hpp"
#include "appforge/kb/store.hpp"
#include "appforge/model/graph.hpp"
#include "appforge/model/trace.hpp"

namespace appforge::copa {

using model::ArchElement;
using model::CodePlan;
using model::CompilationLog;
using model::FeedbackEvent;
using model::ProjectStructure;
using model::RequirementItem;

/// Extraction of the input documents plus every cross-reference finding.
/// Requirements and elements are carried verbatim; ambiguities are
/// non-fatal and each cites a source locator.
struct AnalysisResult {
    std::vector<RequirementItem> requirements;
    std::vector<ArchElement> elements;
    std::vector<std::string> constraints;
    std::vector<std::string> ambiguities;
};

json to_json(const AnalysisResult& analysis);

/// Extracts requirements/elements and records cross-reference problems:
/// undeclared dependency targets, contracts naming unknown types, and
/// requirements that map to no module.
AnalysisResult analyze_documents(const std::vector<RequirementItem>& srs,
                                 const std::vector<ArchElement>& add, const kb::Store& store);

backend::GenRequest build_plan_request(const AnalysisResult& analysis, const kb::Store& store);

/// Normalizes a proposal payload into a version-1 plan: steps reordered to
/// the dependency order, ambiguities carried from analysis. Throws
/// PlanValidationError if the proposal violates any plan invariant.
CodePlan plan_from_proposal(const AnalysisResult& analysis, const json& proposal,
                            const std::vector<ArchElement>& add);

CodePlan generate_plan(const AnalysisResult& analysis, const kb::Store& store,
                       backend::Backend& backend, const std::vector<ArchElement>& add);

/// Deterministic mapping from the plan's package tree to directories:
/// one source directory per package node, a parallel tests directory per
/// module, a shared resources directory, and entry points for modules no
/// other module depends on. dep_config is filled later from the manifest.
ProjectStructure generate_structure(const CodePlan& plan);

/// Requirements traced to `subject` under the plan's contract universe.
std::vector<RequirementItem> traced_requirements(const CodePlan& plan,
                                                 const std::vector<ArchElement>& add,
                                                 const std::vector<RequirementItem>& srs,
                                                 const std::string& subject);

std::vector<ArchElement> traced_elements(const std::vector<ArchElement>& add,
                                         const std::string& subject);

backend::GenRequest build_revision_request(const CodePlan& plan, const FeedbackEvent& event,
                                           const CompilationLog& error_log,
                                           const std::vector<RequirementItem>& traced_requirements,
                                           const std::vector<ArchElement>& traced_elements,
                                           const kb::Store& store);

CodePlan plan_from_revision(const CodePlan& current, const json& proposal,
                            const std::vector<ArchElement>& add);

/// Root-cause revision: assembles the error log plus the requirements and
/// elements traced to the failing module, asks the backend for a new plan,
/// and validates it. A byte-identical proposal raises NoChangeError.
CodePlan revise_plan(const CodePlan& plan, const FeedbackEvent& event,
                     const CompilationLog& error_log,
                     const std::vector<RequirementItem>& srs,
                     const std::vector<ArchElement>& add, const kb::Store& store,
                     backend::Backend& backend);

}  // namespace appforge::copa
