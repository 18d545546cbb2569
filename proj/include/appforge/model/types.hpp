#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "appforge/json_util.hpp"

namespace appforge::model {

// ---------------------------------------------------------------------------
// Requirements / architecture inputs
// ---------------------------------------------------------------------------

enum class RequirementKind { Functional, UserStory, AcceptanceCriterion };

/// One structured requirement from an SRS document.
struct RequirementItem {
    std::string id;
    RequirementKind kind = RequirementKind::Functional;
    std::string text;
    std::vector<std::string> constraints;
    std::string source_ref;
};

enum class Visibility { Public, Protected, Package, Private };

/// Parameter description inside a method contract. `numeric_range` is an
/// inclusive [lo, hi] pair; `invalid_classes` names the invalid-input
/// classes a negative test must cover.
struct ParamSpec {
    std::string name;
    std::string semantic_type;
    std::optional<std::pair<double, double>> numeric_range;
    std::vector<std::string> invalid_classes;
};

struct MethodContract {
    std::string signature;
    Visibility visibility = Visibility::Public;
    std::vector<ParamSpec> params;
    std::string returns;
    std::vector<std::string> exception_conditions;
    bool nondeterministic = false;
};

struct ArchElement {
    std::string module_id;
    std::string responsibilities;
    std::vector<MethodContract> contracts;
    std::vector<std::string> patterns;
    std::vector<std::string> tech_constraints;
    std::vector<std::string> depends_on;
};

// ---------------------------------------------------------------------------
// Code plan and project structure
// ---------------------------------------------------------------------------

/// Adjacency list keyed by module id; values are the modules the key
/// depends on (its prerequisites).
using DepGraph = std::map<std::string, std::vector<std::string>>;

struct PlanStep {
    std::string module_id;
    std::string rationale;
    std::vector<MethodContract> contracts;
};

/// Package hierarchy node. A module placed in a node lives in the source
/// directory derived from the node's path.
struct PackageNode {
    std::string name;
    std::vector<PackageNode> children;
    std::vector<std::string> modules;
};

struct ArrangementRules {
    /// (derived, base) inheritance edges.
    std::vector<std::pair<std::string, std::string>> inheritance;
    /// "module=visibility[,visibility...]" entries restricting the contract
    /// visibilities a module may use. Checked by the code quality pass.
    std::vector<std::string> visibility_rules;
};

struct CodePlan {
    int version = 1;
    std::vector<PlanStep> steps;
    DepGraph dep_graph;
    PackageNode packages;
    ArrangementRules arrangement_rules;
    std::vector<std::string> ambiguities;

    const PlanStep* find_step(const std::string& module_id) const;
    const MethodContract* find_contract(const std::string& signature) const;
};

enum class DirectoryRole { Source, Tests, Resources };

struct DirectoryEntry {
    std::string path;
    DirectoryRole role = DirectoryRole::Source;
    std::optional<std::string> module;  // module hosted here, if any
};

struct ProjectStructure {
    std::vector<DirectoryEntry> directories;
    std::map<std::string, std::string> entry_points;
    std::map<std::string, std::string> dep_config;

    /// Source directory for a module; throws NotFoundError if unmapped.
    std::string source_dir(const std::string& module_id) const;
};

struct ApiEntry {
    std::string library_name;
    std::string version_constraint;
    std::vector<std::string> elements_used;
    std::string purpose;
};

struct ApiManifest {
    std::vector<ApiEntry> entries;
};

// ---------------------------------------------------------------------------
// Source units and compilation diagnostics
// ---------------------------------------------------------------------------

enum class MarkerKind { Compile, Init, Logic };

/// Seeded defect inside a stub body. `detail` doubles as the diagnostic
/// error type for compile markers and names the failing test category for
/// logic markers.
struct DefectMarker {
    MarkerKind kind = MarkerKind::Compile;
    std::string detail;
    std::optional<std::string> target_signature;
};

/// Structured stand-in for generated code: symbols a unit declares and
/// references plus any seeded defect markers.
struct StubBody {
    std::vector<std::string> declares;
    std::vector<std::string> references;
    std::vector<DefectMarker> defect_markers;
};

enum class UnitStatus { Generated, Compiled, Failed };

struct SourceUnit {
    std::string path;
    std::string module_id;
    int plan_version = 1;
    StubBody body;
    UnitStatus status = UnitStatus::Generated;
    int debug_attempts = 0;
};

enum class DiagSeverity { Error, Warning };

struct Diagnostic {
    DiagSeverity severity = DiagSeverity::Error;
    std::string error_type;
    std::string path;
    int line = 0;
    std::string message;
    std::optional<std::string> suggested_fix;
};

enum class BuildOutcome { Success, Failure };

struct CompilationLog {
    std::string scope;  // unit path or "integration"
    std::vector<Diagnostic> diagnostics;
    BuildOutcome outcome = BuildOutcome::Success;
    int ordinal = 0;

    bool has_errors() const;
};

// ---------------------------------------------------------------------------
// Test cases, reports, traceability
// ---------------------------------------------------------------------------

enum class CaseCategory { Positive, Negative, Boundary, Exception, Property };
enum class CaseStatus { Pending, Passed, Failed, Regenerated };

struct TraceLink {
    std::string requirement_id;
    std::string method_signature;
};

/// Expected-outcome descriptor. `seed` is present only for property cases.
struct OracleSpec {
    std::string kind;
    std::string expectation;
    std::optional<std::uint32_t> seed;
};

struct TestCase {
    std::string id;
    CaseCategory category = CaseCategory::Positive;
    TraceLink trace;
    std::map<std::string, json> input_values;
    OracleSpec oracle;
    CaseStatus status = CaseStatus::Pending;
};

enum class DefectSeverity { Blocker, Major, Minor };

struct DefectEntry {
    std::string id;
    DefectSeverity severity = DefectSeverity::Major;
    std::string description;
    json test_input;
    json expected;
    json actual;
    TraceLink trace;
};

struct TestReport {
    double coverage = 0.0;
    std::map<std::string, std::string> case_results;  // case id -> passed|failed
    std::vector<DefectEntry> defects;
    int ordinal = 0;
};

enum class FeedbackOrigin { Compiler, LaunchCheck, TestReport, QualityCheck };

struct CountersSnapshot {
    int self_debug = 0;
    int plan_revisions = 0;
    int rectifications = 0;
};

struct FeedbackEvent {
    FeedbackOrigin origin = FeedbackOrigin::Compiler;
    std::string payload_ref;  // workspace-relative artifact path
    std::string subject;      // module id or defect id
    CountersSnapshot counters;
};

struct ImprovementRecord {
    int ordinal = 0;
    std::string trigger;  // artifact ref of the feedback event
    std::vector<std::string> changed_units;
    int plan_version_before = 0;
    int plan_version_after = 0;
};

struct TraceRow {
    std::string requirement_id;
    std::string module_id;
    std::string method_signature;
    std::vector<std::string> test_case_ids;
};

struct TraceabilityMatrix {
    std::vector<TraceRow> rows;
};

// ---------------------------------------------------------------------------
// Enum <-> string tokens (the exact values used in serialized artifacts)
// ---------------------------------------------------------------------------

std::string to_token(RequirementKind k);
std::string to_token(Visibility v);
std::string to_token(DirectoryRole r);
std::string to_token(MarkerKind k);
std::string to_token(UnitStatus s);
std::string to_token(DiagSeverity s);
std::string to_token(BuildOutcome o);
std::string to_token(CaseCategory c);
std::string to_token(CaseStatus s);
std::string to_token(DefectSeverity s);
std::string to_token(FeedbackOrigin o);

RequirementKind requirement_kind_from(const std::string& token);
Visibility visibility_from(const std::string& token);
DirectoryRole directory_role_from(const std::string& token);
MarkerKind marker_kind_from(const std::string& token);
UnitStatus unit_status_from(const std::string& token);
DiagSeverity diag_severity_from(const std::string& token);
BuildOutcome build_outcome_from(const std::string& token);
CaseCategory case_category_from(const std::string& token);
CaseStatus case_status_from(const std::string& token);
DefectSeverity defect_severity_from(const std::string& token);
FeedbackOrigin feedback_origin_from(const std::string& token);

/// Method name portion of a canonical signature ("decreaseHealth(int a)"
/// -> "decreaseHealth").
std::string method_name(const std::string& signature);

}  // namespace appforge::model
