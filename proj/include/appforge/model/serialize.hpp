#pragma once

#include "appforge/model/types.hpp"

namespace appforge::model {

// Every artifact type maps to and from the JSON field names of its domain
// type. Parsers are strict: unknown fields, missing fields, and invalid
// enum tokens raise SchemaError. serialize(parse(text)) reproduces the
// canonical text byte-for-byte.

json to_json(const RequirementItem& v);
json to_json(const ParamSpec& v);
json to_json(const MethodContract& v);
json to_json(const ArchElement& v);
json to_json(const PlanStep& v);
json to_json(const PackageNode& v);
json to_json(const ArrangementRules& v);
json to_json(const CodePlan& v);
json to_json(const DirectoryEntry& v);
json to_json(const ProjectStructure& v);
json to_json(const ApiEntry& v);
json to_json(const ApiManifest& v);
json to_json(const DefectMarker& v);
json to_json(const StubBody& v);
json to_json(const SourceUnit& v);
json to_json(const Diagnostic& v);
json to_json(const CompilationLog& v);
json to_json(const TraceLink& v);
json to_json(const OracleSpec& v);
json to_json(const TestCase& v);
json to_json(const DefectEntry& v);
json to_json(const TestReport& v);
json to_json(const CountersSnapshot& v);
json to_json(const FeedbackEvent& v);
json to_json(const ImprovementRecord& v);
json to_json(const TraceRow& v);
json to_json(const TraceabilityMatrix& v);

RequirementItem requirement_from_json(const json& j);
ParamSpec param_spec_from_json(const json& j);
MethodContract contract_from_json(const json& j);
ArchElement arch_element_from_json(const json& j);
PlanStep plan_step_from_json(const json& j);
PackageNode package_node_from_json(const json& j);
ArrangementRules arrangement_rules_from_json(const json& j);
CodePlan code_plan_from_json(const json& j);
DirectoryEntry directory_entry_from_json(const json& j);
ProjectStructure structure_from_json(const json& j);
ApiEntry api_entry_from_json(const json& j);
ApiManifest manifest_from_json(const json& j);
DefectMarker defect_marker_from_json(const json& j);
StubBody stub_body_from_json(const json& j);
SourceUnit source_unit_from_json(const json& j);
Diagnostic diagnostic_from_json(const json& j);
CompilationLog compilation_log_from_json(const json& j);
TraceLink trace_link_from_json(const json& j);
OracleSpec oracle_from_json(const json& j);
TestCase test_case_from_json(const json& j);
DefectEntry defect_entry_from_json(const json& j);
TestReport test_report_from_json(const json& j);
CountersSnapshot counters_from_json(const json& j);
FeedbackEvent feedback_event_from_json(const json& j);
ImprovementRecord improvement_record_from_json(const json& j);
TraceRow trace_row_from_json(const json& j);
TraceabilityMatrix trace_matrix_from_json(const json& j);

/// SRS document: {"requirements": [...]}.
std::vector<RequirementItem> srs_from_json(const json& j);
json srs_to_json(const std::vector<RequirementItem>& requirements);

/// ADD document: {"elements": [...]}.
std::vector<ArchElement> add_from_json(const json& j);
json add_to_json(const std::vector<ArchElement>& elements);

}  // namespace appforge::model
