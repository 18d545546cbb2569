#include "appforge/model/types.hpp"

#include <algorithm>

namespace appforge::model {

const PlanStep* CodePlan::find_step(const std::string& module_id) const {
    for (const auto& step : steps) {
        if (step.module_id == module_id) {
            return &step;
        }
    }
    return nullptr;
}

const MethodContract* CodePlan::find_contract(const std::string& signature) const {
    for (const auto& step : steps) {
        for (const auto& contract : step.contracts) {
            if (contract.signature == signature) {
                return &contract;
            }
        }
    }
    return nullptr;
}

std::string ProjectStructure::source_dir(const std::string& module_id) const {
    for (const auto& entry : directories) {
        if (entry.role == DirectoryRole::Source && entry.module == module_id) {
            return entry.path;
        }
    }
    throw NotFoundError("no source directory for module '" + module_id + "'");
}

bool CompilationLog::has_errors() const {
    return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
        return d.severity == DiagSeverity::Error;
    });
}

namespace {

[[noreturn]] void bad_token(const char* what, const std::string& token) {
    throw SchemaError(std::string("invalid ") + what + " value '" + token + "'");
}

}  // namespace

std::string to_token(RequirementKind k) {
    switch (k) {
        case RequirementKind::Functional: return "functional";
        case RequirementKind::UserStory: return "user-story";
        case RequirementKind::AcceptanceCriterion: return "acceptance-criterion";
    }
    return {};
}

RequirementKind requirement_kind_from(const std::string& token) {
    if (token == "functional") return RequirementKind::Functional;
    if (token == "user-story") return RequirementKind::UserStory;
    if (token == "acceptance-criterion") return RequirementKind::AcceptanceCriterion;
    bad_token("requirement kind", token);
}

std::string to_token(Visibility v) {
    switch (v) {
        case Visibility::Public: return "public";
        case Visibility::Protected: return "protected";
        case Visibility::Package: return "package";
        case Visibility::Private: return "private";
    }
    return {};
}

Visibility visibility_from(const std::string& token) {
    if (token == "public") return Visibility::Public;
    if (token == "protected") return Visibility::Protected;
    if (token == "package") return Visibility::Package;
    if (token == "private") return Visibility::Private;
    bad_token("visibility", token);
}

std::string to_token(DirectoryRole r) {
    switch (r) {
        case DirectoryRole::Source: return "source";
        case DirectoryRole::Tests: return "tests";
        case DirectoryRole::Resources: return "resources";
    }
    return {};
}

DirectoryRole directory_role_from(const std::string& token) {
    if (token == "source") return DirectoryRole::Source;
    if (token == "tests") return DirectoryRole::Tests;
    if (token == "resources") return DirectoryRole::Resources;
    bad_token("directory role", token);
}

std::string to_token(MarkerKind k) {
    switch (k) {
        case MarkerKind::Compile: return "compile";
        case MarkerKind::Init: return "init";
        case MarkerKind::Logic: return "logic";
    }
    return {};
}

MarkerKind marker_kind_from(const std::string& token) {
    if (token == "compile") return MarkerKind::Compile;
    if (token == "init") return MarkerKind::Init;
    if (token == "logic") return MarkerKind::Logic;
    bad_token("marker kind", token);
}

std::string to_token(UnitStatus s) {
    switch (s) {
        case UnitStatus::Generated: return "generated";
        case UnitStatus::Compiled: return "compiled";
        case UnitStatus::Failed: return "failed";
    }
    return {};
}

UnitStatus unit_status_from(const std::string& token) {
    if (token == "generated") return UnitStatus::Generated;
    if (token == "compiled") return UnitStatus::Compiled;
    if (token == "failed") return UnitStatus::Failed;
    bad_token("unit status", token);
}

std::string to_token(DiagSeverity s) {
    return s == DiagSeverity::Error ? "error" : "warning";
}

DiagSeverity diag_severity_from(const std::string& token) {
    if (token == "error") return DiagSeverity::Error;
    if (token == "warning") return DiagSeverity::Warning;
    bad_token("diagnostic severity", token);
}

std::string to_token(BuildOutcome o) {
    return o == BuildOutcome::Success ? "success" : "failure";
}

BuildOutcome build_outcome_from(const std::string& token) {
    if (token == "success") return BuildOutcome::Success;
    if (token == "failure") return BuildOutcome::Failure;
    bad_token("build outcome", token);
}

std::string to_token(CaseCategory c) {
    switch (c) {
        case CaseCategory::Positive: return "positive";
        case CaseCategory::Negative: return "negative";
        case CaseCategory::Boundary: return "boundary";
        case CaseCategory::Exception: return "exception";
        case CaseCategory::Property: return "property";
    }
    return {};
}

CaseCategory case_category_from(const std::string& token) {
    if (token == "positive") return CaseCategory::Positive;
    if (token == "negative") return CaseCategory::Negative;
    if (token == "boundary") return CaseCategory::Boundary;
    if (token == "exception") return CaseCategory::Exception;
    if (token == "property") return CaseCategory::Property;
    bad_token("case category", token);
}

std::string to_token(CaseStatus s) {
    switch (s) {
        case CaseStatus::Pending: return "pending";
        case CaseStatus::Passed: return "passed";
        case CaseStatus::Failed: return "failed";
        case CaseStatus::Regenerated: return "regenerated";
    }
    return {};
}

CaseStatus case_status_from(const std::string& token) {
    if (token == "pending") return CaseStatus::Pending;
    if (token == "passed") return CaseStatus::Passed;
    if (token == "failed") return CaseStatus::Failed;
    if (token == "regenerated") return CaseStatus::Regenerated;
    bad_token("case status", token);
}

std::string to_token(DefectSeverity s) {
    switch (s) {
        case DefectSeverity::Blocker: return "blocker";
        case DefectSeverity::Major: return "major";
        case DefectSeverity::Minor: return "minor";
    }
    return {};
}

DefectSeverity defect_severity_from(const std::string& token) {
    if (token == "blocker") return DefectSeverity::Blocker;
    if (token == "major") return DefectSeverity::Major;
    if (token == "minor") return DefectSeverity::Minor;
    bad_token("defect severity", token);
}

std::string to_token(FeedbackOrigin o) {
    switch (o) {
        case FeedbackOrigin::Compiler: return "compiler";
        case FeedbackOrigin::LaunchCheck: return "launch_check";
        case FeedbackOrigin::TestReport: return "test_report";
        case FeedbackOrigin::QualityCheck: return "quality_check";
    }
    return {};
}

FeedbackOrigin feedback_origin_from(const std::string& token) {
    if (token == "compiler") return FeedbackOrigin::Compiler;
    if (token == "launch_check") return FeedbackOrigin::LaunchCheck;
    if (token == "test_report") return FeedbackOrigin::TestReport;
    if (token == "quality_check") return FeedbackOrigin::QualityCheck;
    bad_token("feedback origin", token);
}

std::string method_name(const std::string& signature) {
    auto paren = signature.find('(');
    std::string head = paren == std::string::npos ? signature : signature.substr(0, paren);
    auto space = head.find_last_of(" \t");
    if (space != std::string::npos) {
        head = head.substr(space + 1);
    }
    return head;
}

}  // namespace appforge::model
