#include "appforge/model/serialize.hpp"

#include <set>

namespace appforge::model {

namespace {

json string_array(const std::vector<std::string>& values) {
    return json(values);
}

std::vector<std::string> string_vector(const json& j, const std::string& context) {
    if (!j.is_array()) {
        throw SchemaError(context + ": expected an array of strings");
    }
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_string()) {
            throw SchemaError(context + ": expected an array of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

int int_field(const json& j, const std::string& context, const char* name) {
    const json& field = require_field(j, context, name);
    if (!field.is_number_integer()) {
        throw SchemaError(context + ": field '" + name + "' must be an integer");
    }
    return field.get<int>();
}

}  // namespace

// --- requirements / architecture ---

json to_json(const RequirementItem& v) {
    return json{{"id", v.id},
                {"kind", to_token(v.kind)},
                {"text", v.text},
                {"constraints", string_array(v.constraints)},
                {"source_ref", v.source_ref}};
}

RequirementItem requirement_from_json(const json& j) {
    expect_fields(j, "requirement", {"id", "kind", "text", "constraints", "source_ref"});
    RequirementItem v;
    v.id = require_string(j, "requirement", "id");
    v.kind = requirement_kind_from(require_string(j, "requirement", "kind"));
    v.text = require_string(j, "requirement", "text");
    v.constraints = string_vector(j.at("constraints"), "requirement.constraints");
    v.source_ref = require_string(j, "requirement", "source_ref");
    return v;
}

json to_json(const ParamSpec& v) {
    json out{{"name", v.name},
             {"semantic_type", v.semantic_type},
             {"invalid_classes", string_array(v.invalid_classes)}};
    if (v.numeric_range) {
        out["numeric_range"] = json::array({v.numeric_range->first, v.numeric_range->second});
    }
    return out;
}

ParamSpec param_spec_from_json(const json& j) {
    expect_fields(j, "param", {"name", "semantic_type", "invalid_classes"}, {"numeric_range"});
    ParamSpec v;
    v.name = require_string(j, "param", "name");
    v.semantic_type = require_string(j, "param", "semantic_type");
    v.invalid_classes = string_vector(j.at("invalid_classes"), "param.invalid_classes");
    if (j.contains("numeric_range")) {
        const json& range = j.at("numeric_range");
        if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
            !range[1].is_number()) {
            throw SchemaError("param.numeric_range: expected [lo, hi]");
        }
        double lo = range[0].get<double>();
        double hi = range[1].get<double>();
        if (lo > hi) {
            throw SchemaError("param.numeric_range: lo exceeds hi");
        }
        v.numeric_range = {lo, hi};
    }
    return v;
}

json to_json(const MethodContract& v) {
    json params = json::array();
    for (const auto& p : v.params) {
        params.push_back(to_json(p));
    }
    return json{{"signature", v.signature},
                {"visibility", to_token(v.visibility)},
                {"params", params},
                {"returns", v.returns},
                {"exception_conditions", string_array(v.exception_conditions)},
                {"nondeterministic", v.nondeterministic}};
}

MethodContract contract_from_json(const json& j) {
    expect_fields(j, "contract",
                  {"signature", "visibility", "params", "returns", "exception_conditions",
                   "nondeterministic"});
    MethodContract v;
    v.signature = require_string(j, "contract", "signature");
    v.visibility = visibility_from(require_string(j, "contract", "visibility"));
    std::set<std::string> names;
    for (const auto& p : j.at("params")) {
        ParamSpec spec = param_spec_from_json(p);
        if (!names.insert(spec.name).second) {
            throw SchemaError("contract '" + v.signature + "': duplicate param '" + spec.name +
                              "'");
        }
        v.params.push_back(std::move(spec));
    }
    v.returns = require_string(j, "contract", "returns");
    v.exception_conditions =
        string_vector(j.at("exception_conditions"), "contract.exception_conditions");
    const json& nondet = require_field(j, "contract", "nondeterministic");
    if (!nondet.is_boolean()) {
        throw SchemaError("contract.nondeterministic: expected a boolean");
    }
    v.nondeterministic = nondet.get<bool>();
    return v;
}

json to_json(const ArchElement& v) {
    json contracts = json::array();
    for (const auto& c : v.contracts) {
        contracts.push_back(to_json(c));
    }
    return json{{"module_id", v.module_id},
                {"responsibilities", v.responsibilities},
                {"contracts", contracts},
                {"patterns", string_array(v.patterns)},
                {"tech_constraints", string_array(v.tech_constraints)},
                {"depends_on", string_array(v.depends_on)}};
}

ArchElement arch_element_from_json(const json& j) {
    expect_fields(j, "element",
                  {"module_id", "responsibilities", "contracts", "patterns", "tech_constraints",
                   "depends_on"});
    ArchElement v;
    v.module_id = require_string(j, "element", "module_id");
    v.responsibilities = require_string(j, "element", "responsibilities");
    std::set<std::string> signatures;
    for (const auto& c : j.at("contracts")) {
        MethodContract contract = contract_from_json(c);
        if (!signatures.insert(contract.signature).second) {
            throw SchemaError("element '" + v.module_id + "': duplicate contract '" +
                              contract.signature + "'");
        }
        v.contracts.push_back(std::move(contract));
    }
    v.patterns = string_vector(j.at("patterns"), "element.patterns");
    v.tech_constraints = string_vector(j.at("tech_constraints"), "element.tech_constraints");
    v.depends_on = string_vector(j.at("depends_on"), "element.depends_on");
    return v;
}

// --- code plan ---

json to_json(const PlanStep& v) {
    json contracts = json::array();
    for (const auto& c : v.contracts) {
        contracts.push_back(to_json(c));
    }
    return json{{"module_id", v.module_id}, {"rationale", v.rationale}, {"contracts", contracts}};
}

PlanStep plan_step_from_json(const json& j) {
    expect_fields(j, "step", {"module_id", "rationale", "contracts"});
    PlanStep v;
    v.module_id = require_string(j, "step", "module_id");
    v.rationale = require_string(j, "step", "rationale");
    std::set<std::string> signatures;
    for (const auto& c : j.at("contracts")) {
        MethodContract contract = contract_from_json(c);
        if (!signatures.insert(contract.signature).second) {
            throw SchemaError("step '" + v.module_id + "': duplicate contract '" +
                              contract.signature + "'");
        }
        v.contracts.push_back(std::move(contract));
    }
    return v;
}

json to_json(const PackageNode& v) {
    json children = json::array();
    for (const auto& child : v.children) {
        children.push_back(to_json(child));
    }
    return json{{"name", v.name}, {"children", children}, {"modules", string_array(v.modules)}};
}

PackageNode package_node_from_json(const json& j) {
    expect_fields(j, "package", {"name", "children", "modules"});
    PackageNode v;
    v.name = require_string(j, "package", "name");
    for (const auto& child : j.at("children")) {
        v.children.push_back(package_node_from_json(child));
    }
    v.modules = string_vector(j.at("modules"), "package.modules");
    return v;
}

json to_json(const ArrangementRules& v) {
    json edges = json::array();
    for (const auto& [derived, base] : v.inheritance) {
        edges.push_back(json::array({derived, base}));
    }
    return json{{"inheritance", edges}, {"visibility_rules", string_array(v.visibility_rules)}};
}

ArrangementRules arrangement_rules_from_json(const json& j) {
    expect_fields(j, "arrangement_rules", {"inheritance", "visibility_rules"});
    ArrangementRules v;
    for (const auto& edge : j.at("inheritance")) {
        if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() || !edge[1].is_string()) {
            throw SchemaError("arrangement_rules.inheritance: expected [derived, base] pairs");
        }
        v.inheritance.emplace_back(edge[0].get<std::string>(), edge[1].get<std::string>());
    }
    v.visibility_rules = string_vector(j.at("visibility_rules"), "visibility_rules");
    return v;
}

json to_json(const CodePlan& v) {
    json steps = json::array();
    for (const auto& step : v.steps) {
        steps.push_back(to_json(step));
    }
    json graph = json::object();
    for (const auto& [module, deps] : v.dep_graph) {
        graph[module] = string_array(deps);
    }
    return json{{"version", v.version},
                {"steps", steps},
                {"dep_graph", graph},
                {"packages", to_json(v.packages)},
                {"arrangement_rules", to_json(v.arrangement_rules)},
                {"ambiguities", string_array(v.ambiguities)}};
}

CodePlan code_plan_from_json(const json& j) {
    expect_fields(j, "plan",
                  {"version", "steps", "dep_graph", "packages", "arrangement_rules",
                   "ambiguities"});
    CodePlan v;
    v.version = int_field(j, "plan", "version");
    for (const auto& step : j.at("steps")) {
        v.steps.push_back(plan_step_from_json(step));
    }
    const json& graph = j.at("dep_graph");
    if (!graph.is_object()) {
        throw SchemaError("plan.dep_graph: expected an object");
    }
    for (auto it = graph.begin(); it != graph.end(); ++it) {
        v.dep_graph[it.key()] = string_vector(it.value(), "plan.dep_graph." + it.key());
    }
    v.packages = package_node_from_json(j.at("packages"));
    v.arrangement_rules = arrangement_rules_from_json(j.at("arrangement_rules"));
    v.ambiguities = string_vector(j.at("ambiguities"), "plan.ambiguities");
    return v;
}

// --- project structure ---

json to_json(const DirectoryEntry& v) {
    json out{{"path", v.path}, {"role", to_token(v.role)}};
    if (v.module) {
        out["module"] = *v.module;
    }
    return out;
}

DirectoryEntry directory_entry_from_json(const json& j) {
    expect_fields(j, "directory", {"path", "role"}, {"module"});
    DirectoryEntry v;
    v.path = require_string(j, "directory", "path");
    v.role = directory_role_from(require_string(j, "directory", "role"));
    if (j.contains("module")) {
        v.module = require_string(j, "directory", "module");
    }
    return v;
}

json to_json(const ProjectStructure& v) {
    json dirs = json::array();
    for (const auto& d : v.directories) {
        dirs.push_back(to_json(d));
    }
    return json{{"directories", dirs},
                {"entry_points", json(v.entry_points)},
                {"dep_config", json(v.dep_config)}};
}

ProjectStructure structure_from_json(const json& j) {
    expect_fields(j, "structure", {"directories", "entry_points", "dep_config"});
    ProjectStructure v;
    for (const auto& d : j.at("directories")) {
        v.directories.push_back(directory_entry_from_json(d));
    }
    const json& entries = j.at("entry_points");
    if (!entries.is_object()) {
        throw SchemaError("structure.entry_points: expected an object");
    }
    for (auto it = entries.begin(); it != entries.end(); ++it) {
        v.entry_points[it.key()] = it.value().get<std::string>();
    }
    const json& deps = j.at("dep_config");
    if (!deps.is_object()) {
        throw SchemaError("structure.dep_config: expected an object");
    }
    for (auto it = deps.begin(); it != deps.end(); ++it) {
        v.dep_config[it.key()] = it.value().get<std::string>();
    }
    return v;
}

// --- api manifest ---

json to_json(const ApiEntry& v) {
    return json{{"library_name", v.library_name},
                {"version_constraint", v.version_constraint},
                {"elements_used", string_array(v.elements_used)},
                {"purpose", v.purpose}};
}

ApiEntry api_entry_from_json(const json& j) {
    expect_fields(j, "api entry", {"library_name", "version_constraint", "elements_used",
                                   "purpose"});
    ApiEntry v;
    v.library_name = require_string(j, "api entry", "library_name");
    v.version_constraint = require_string(j, "api entry", "version_constraint");
    if (v.version_constraint.empty()) {
        throw SchemaError("api entry '" + v.library_name + "': empty version_constraint");
    }
    v.elements_used = string_vector(j.at("elements_used"), "api entry.elements_used");
    v.purpose = require_string(j, "api entry", "purpose");
    return v;
}

json to_json(const ApiManifest& v) {
    json entries = json::array();
    for (const auto& e : v.entries) {
        entries.push_back(to_json(e));
    }
    return json{{"entries", entries}};
}

ApiManifest manifest_from_json(const json& j) {
    expect_fields(j, "manifest", {"entries"});
    ApiManifest v;
    std::set<std::string> names;
    for (const auto& e : j.at("entries")) {
        ApiEntry entry = api_entry_from_json(e);
        if (!names.insert(entry.library_name).second) {
            throw SchemaError("manifest: duplicate library '" + entry.library_name + "'");
        }
        v.entries.push_back(std::move(entry));
    }
    return v;
}

// --- stub bodies and source units ---

json to_json(const DefectMarker& v) {
    json out{{"kind", to_token(v.kind)}, {"detail", v.detail}};
    if (v.target_signature) {
        out["target_signature"] = *v.target_signature;
    }
    return out;
}

DefectMarker defect_marker_from_json(const json& j) {
    expect_fields(j, "marker", {"kind", "detail"}, {"target_signature"});
    DefectMarker v;
    v.kind = marker_kind_from(require_string(j, "marker", "kind"));
    v.detail = require_string(j, "marker", "detail");
    if (j.contains("target_signature")) {
        v.target_signature = require_string(j, "marker", "target_signature");
    }
    return v;
}

json to_json(const StubBody& v) {
    json markers = json::array();
    for (const auto& m : v.defect_markers) {
        markers.push_back(to_json(m));
    }
    return json{{"declares", string_array(v.declares)},
                {"references", string_array(v.references)},
                {"defect_markers", markers}};
}

StubBody stub_body_from_json(const json& j) {
    expect_fields(j, "body", {"declares", "references", "defect_markers"});
    StubBody v;
    v.declares = string_vector(j.at("declares"), "body.declares");
    v.references = string_vector(j.at("references"), "body.references");
    for (const auto& name : v.declares) {
        if (name.empty()) {
            throw SchemaError("body.declares: empty symbol name");
        }
    }
    for (const auto& name : v.references) {
        if (name.empty()) {
            throw SchemaError("body.references: empty symbol name");
        }
    }
    for (const auto& m : j.at("defect_markers")) {
        v.defect_markers.push_back(defect_marker_from_json(m));
    }
    return v;
}

json to_json(const SourceUnit& v) {
    return json{{"path", v.path},
                {"module_id", v.module_id},
                {"plan_version", v.plan_version},
                {"body", to_json(v.body)},
                {"status", to_token(v.status)},
                {"debug_attempts", v.debug_attempts}};
}

SourceUnit source_unit_from_json(const json& j) {
    expect_fields(j, "unit",
                  {"path", "module_id", "plan_version", "body", "status", "debug_attempts"});
    SourceUnit v;
    v.path = require_string(j, "unit", "path");
    v.module_id = require_string(j, "unit", "module_id");
    v.plan_version = int_field(j, "unit", "plan_version");
    v.body = stub_body_from_json(j.at("body"));
    v.status = unit_status_from(require_string(j, "unit", "status"));
    v.debug_attempts = int_field(j, "unit", "debug_attempts");
    return v;
}

// --- diagnostics ---

json to_json(const Diagnostic& v) {
    json out{{"severity", to_token(v.severity)},
             {"error_type", v.error_type},
             {"location", json{{"path", v.path}, {"line", v.line}}},
             {"message", v.message}};
    if (v.suggested_fix) {
        out["suggested_fix"] = *v.suggested_fix;
    }
    return out;
}

Diagnostic diagnostic_from_json(const json& j) {
    expect_fields(j, "diagnostic", {"severity", "error_type", "location", "message"},
                  {"suggested_fix"});
    Diagnostic v;
    v.severity = diag_severity_from(require_string(j, "diagnostic", "severity"));
    v.error_type = require_string(j, "diagnostic", "error_type");
    const json& loc = j.at("location");
    expect_fields(loc, "diagnostic.location", {"path", "line"});
    v.path = require_string(loc, "diagnostic.location", "path");
    v.line = int_field(loc, "diagnostic.location", "line");
    v.message = require_string(j, "diagnostic", "message");
    if (j.contains("suggested_fix")) {
        v.suggested_fix = require_string(j, "diagnostic", "suggested_fix");
    }
    return v;
}

json to_json(const CompilationLog& v) {
    json diags = json::array();
    for (const auto& d : v.diagnostics) {
        diags.push_back(to_json(d));
    }
    return json{{"scope", v.scope},
                {"diagnostics", diags},
                {"outcome", to_token(v.outcome)},
                {"ordinal", v.ordinal}};
}

CompilationLog compilation_log_from_json(const json& j) {
    expect_fields(j, "compilation log", {"scope", "diagnostics", "outcome", "ordinal"});
    CompilationLog v;
    v.scope = require_string(j, "compilation log", "scope");
    for (const auto& d : j.at("diagnostics")) {
        v.diagnostics.push_back(diagnostic_from_json(d));
    }
    v.outcome = build_outcome_from(require_string(j, "compilation log", "outcome"));
    v.ordinal = int_field(j, "compilation log", "ordinal");
    bool failing = v.has_errors();
    if ((v.outcome == BuildOutcome::Failure) != failing) {
        throw SchemaError("compilation log: outcome inconsistent with diagnostics");
    }
    return v;
}

// --- tests and reports ---

json to_json(const TraceLink& v) {
    return json{{"requirement_id", v.requirement_id}, {"method_signature", v.method_signature}};
}

TraceLink trace_link_from_json(const json& j) {
    expect_fields(j, "trace", {"requirement_id", "method_signature"});
    TraceLink v;
    v.requirement_id = require_string(j, "trace", "requirement_id");
    v.method_signature = require_string(j, "trace", "method_signature");
    if (v.requirement_id.empty() || v.method_signature.empty()) {
        throw SchemaError("trace: requirement_id and method_signature must be non-empty");
    }
    return v;
}

json to_json(const OracleSpec& v) {
    json out{{"kind", v.kind}, {"expectation", v.expectation}};
    if (v.seed) {
        out["seed"] = *v.seed;
    }
    return out;
}

OracleSpec oracle_from_json(const json& j) {
    expect_fields(j, "oracle", {"kind", "expectation"}, {"seed"});
    OracleSpec v;
    v.kind = require_string(j, "oracle", "kind");
    v.expectation = require_string(j, "oracle", "expectation");
    if (j.contains("seed")) {
        v.seed = j.at("seed").get<std::uint32_t>();
    }
    return v;
}

json to_json(const TestCase& v) {
    json inputs = json::object();
    for (const auto& [name, value] : v.input_values) {
        inputs[name] = value;
    }
    return json{{"id", v.id},
                {"category", to_token(v.category)},
                {"trace", to_json(v.trace)},
                {"input_values", inputs},
                {"oracle", to_json(v.oracle)},
                {"status", to_token(v.status)}};
}

TestCase test_case_from_json(const json& j) {
    expect_fields(j, "test case", {"id", "category", "trace", "input_values", "oracle", "status"});
    TestCase v;
    v.id = require_string(j, "test case", "id");
    v.category = case_category_from(require_string(j, "test case", "category"));
    v.trace = trace_link_from_json(j.at("trace"));
    const json& inputs = j.at("input_values");
    if (!inputs.is_object()) {
        throw SchemaError("test case.input_values: expected an object");
    }
    for (auto it = inputs.begin(); it != inputs.end(); ++it) {
        v.input_values[it.key()] = it.value();
    }
    v.oracle = oracle_from_json(j.at("oracle"));
    v.status = case_status_from(require_string(j, "test case", "status"));
    return v;
}

json to_json(const DefectEntry& v) {
    return json{{"id", v.id},
                {"severity", to_token(v.severity)},
                {"description", v.description},
                {"test_input", v.test_input},
                {"expected", v.expected},
                {"actual", v.actual},
                {"trace", to_json(v.trace)}};
}

DefectEntry defect_entry_from_json(const json& j) {
    expect_fields(j, "defect",
                  {"id", "severity", "description", "test_input", "expected", "actual", "trace"});
    DefectEntry v;
    v.id = require_string(j, "defect", "id");
    v.severity = defect_severity_from(require_string(j, "defect", "severity"));
    v.description = require_string(j, "defect", "description");
    v.test_input = j.at("test_input");
    v.expected = j.at("expected");
    v.actual = j.at("actual");
    v.trace = trace_link_from_json(j.at("trace"));
    return v;
}

json to_json(const TestReport& v) {
    json defects = json::array();
    for (const auto& d : v.defects) {
        defects.push_back(to_json(d));
    }
    return json{{"coverage", v.coverage},
                {"case_results", json(v.case_results)},
                {"defects", defects},
                {"ordinal", v.ordinal}};
}

TestReport test_report_from_json(const json& j) {
    expect_fields(j, "report", {"coverage", "case_results", "defects", "ordinal"});
    TestReport v;
    const json& coverage = require_field(j, "report", "coverage");
    if (!coverage.is_number()) {
        throw SchemaError("report.coverage: expected a number");
    }
    v.coverage = coverage.get<double>();
    if (v.coverage < 0.0 || v.coverage > 1.0) {
        throw SchemaError("report.coverage: outside [0, 1]");
    }
    const json& results = j.at("case_results");
    if (!results.is_object()) {
        throw SchemaError("report.case_results: expected an object");
    }
    int failed = 0;
    for (auto it = results.begin(); it != results.end(); ++it) {
        std::string value = it.value().get<std::string>();
        if (value != "passed" && value != "failed") {
            throw SchemaError("report.case_results: invalid result '" + value + "'");
        }
        if (value == "failed") {
            ++failed;
        }
        v.case_results[it.key()] = value;
    }
    for (const auto& d : j.at("defects")) {
        v.defects.push_back(defect_entry_from_json(d));
    }
    if (static_cast<int>(v.defects.size()) != failed) {
        throw SchemaError("report: defect count must equal failed case count");
    }
    v.ordinal = int_field(j, "report", "ordinal");
    return v;
}

// --- feedback loop records ---

json to_json(const CountersSnapshot& v) {
    return json{{"self_debug", v.self_debug},
                {"plan_revisions", v.plan_revisions},
                {"rectifications", v.rectifications}};
}

CountersSnapshot counters_from_json(const json& j) {
    expect_fields(j, "counters", {"self_debug", "plan_revisions", "rectifications"});
    CountersSnapshot v;
    v.self_debug = int_field(j, "counters", "self_debug");
    v.plan_revisions = int_field(j, "counters", "plan_revisions");
    v.rectifications = int_field(j, "counters", "rectifications");
    return v;
}

json to_json(const FeedbackEvent& v) {
    return json{{"origin", to_token(v.origin)},
                {"payload_ref", v.payload_ref},
                {"subject", v.subject},
                {"counters", to_json(v.counters)}};
}

FeedbackEvent feedback_event_from_json(const json& j) {
    expect_fields(j, "event", {"origin", "payload_ref", "subject", "counters"});
    FeedbackEvent v;
    v.origin = feedback_origin_from(require_string(j, "event", "origin"));
    v.payload_ref = require_string(j, "event", "payload_ref");
    v.subject = require_string(j, "event", "subject");
    v.counters = counters_from_json(j.at("counters"));
    return v;
}

json to_json(const ImprovementRecord& v) {
    return json{{"ordinal", v.ordinal},
                {"trigger", v.trigger},
                {"changed_units", string_array(v.changed_units)},
                {"plan_version_before", v.plan_version_before},
                {"plan_version_after", v.plan_version_after}};
}

ImprovementRecord improvement_record_from_json(const json& j) {
    expect_fields(j, "improvement record",
                  {"ordinal", "trigger", "changed_units", "plan_version_before",
                   "plan_version_after"});
    ImprovementRecord v;
    v.ordinal = int_field(j, "improvement record", "ordinal");
    v.trigger = require_string(j, "improvement record", "trigger");
    v.changed_units = string_vector(j.at("changed_units"), "improvement record.changed_units");
    v.plan_version_before = int_field(j, "improvement record", "plan_version_before");
    v.plan_version_after = int_field(j, "improvement record", "plan_version_after");
    if (v.plan_version_after < v.plan_version_before) {
        throw SchemaError("improvement record: plan version must not decrease");
    }
    return v;
}

json to_json(const TraceRow& v) {
    return json{{"requirement_id", v.requirement_id},
                {"module_id", v.module_id},
                {"method_signature", v.method_signature},
                {"test_case_ids", string_array(v.test_case_ids)}};
}

TraceRow trace_row_from_json(const json& j) {
    expect_fields(j, "trace row",
                  {"requirement_id", "module_id", "method_signature", "test_case_ids"});
    TraceRow v;
    v.requirement_id = require_string(j, "trace row", "requirement_id");
    v.module_id = require_string(j, "trace row", "module_id");
    v.method_signature = require_string(j, "trace row", "method_signature");
    v.test_case_ids = string_vector(j.at("test_case_ids"), "trace row.test_case_ids");
    return v;
}

json to_json(const TraceabilityMatrix& v) {
    json rows = json::array();
    for (const auto& row : v.rows) {
        rows.push_back(to_json(row));
    }
    return json{{"rows", rows}};
}

TraceabilityMatrix trace_matrix_from_json(const json& j) {
    expect_fields(j, "trace matrix", {"rows"});
    TraceabilityMatrix v;
    for (const auto& row : j.at("rows")) {
        v.rows.push_back(trace_row_from_json(row));
    }
    return v;
}

// --- whole input documents ---

std::vector<RequirementItem> srs_from_json(const json& j) {
    expect_fields(j, "srs", {"requirements"});
    std::vector<RequirementItem> out;
    std::set<std::string> ids;
    for (const auto& r : j.at("requirements")) {
        RequirementItem item = requirement_from_json(r);
        if (!ids.insert(item.id).second) {
            throw SchemaError("srs: duplicate requirement id '" + item.id + "'");
        }
        out.push_back(std::move(item));
    }
    return out;
}

json srs_to_json(const std::vector<RequirementItem>& requirements) {
    json items = json::array();
    for (const auto& r : requirements) {
        items.push_back(to_json(r));
    }
    return json{{"requirements", items}};
}

std::vector<ArchElement> add_from_json(const json& j) {
    expect_fields(j, "add", {"elements"});
    std::vector<ArchElement> out;
    std::set<std::string> ids;
    for (const auto& e : j.at("elements")) {
        ArchElement element = arch_element_from_json(e);
        if (!ids.insert(element.module_id).second) {
            throw SchemaError("add: duplicate module id '" + element.module_id + "'");
        }
        out.push_back(std::move(element));
    }
    return out;
}

json add_to_json(const std::vector<ArchElement>& elements) {
    json items = json::array();
    for (const auto& e : elements) {
        items.push_back(to_json(e));
    }
    return json{{"elements", items}};
}

}  // namespace appforge::model
