#include "appforge/agents/ta.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "appforge/model/serialize.hpp"

namespace appforge::ta {

json to_json(const TestPlan& plan) {
    json mappings = json::array();
    for (const auto& m : plan.mappings) {
        mappings.push_back(json{{"requirement_id", m.requirement_id},
                                {"module_id", m.module_id},
                                {"method_signature", m.method_signature}});
    }
    return json{{"framework", plan.framework},
                {"mappings", mappings},
                {"untestable", json(plan.untestable)},
                {"scope_notes", json(plan.scope_notes)}};
}

TestPlan test_plan_from_json(const json& j) {
    expect_fields(j, "test plan", {"framework", "mappings", "untestable", "scope_notes"});
    TestPlan plan;
    plan.framework = require_string(j, "test plan", "framework");
    for (const auto& m : j.at("mappings")) {
        expect_fields(m, "mapping", {"requirement_id", "module_id", "method_signature"});
        plan.mappings.push_back({require_string(m, "mapping", "requirement_id"),
                                 require_string(m, "mapping", "module_id"),
                                 require_string(m, "mapping", "method_signature")});
    }
    for (const auto& u : j.at("untestable")) {
        plan.untestable.push_back(u.get<std::string>());
    }
    for (const auto& n : j.at("scope_notes")) {
        plan.scope_notes.push_back(n.get<std::string>());
    }
    return plan;
}

TestPlan generate_test_plan(const std::vector<RequirementItem>& srs,
                            const std::vector<ArchElement>& add, const CodePlan& plan,
                            const std::vector<SourceUnit>& units, const kb::Store& store,
                            bool strict) {
    TestPlan test_plan;

    std::vector<std::string> constraint_sources;
    for (const auto& element : add) {
        constraint_sources.insert(constraint_sources.end(), element.tech_constraints.begin(),
                                  element.tech_constraints.end());
    }
    auto keywords = model::tokenize(constraint_sources);
    std::set<std::string> keyword_set(keywords.begin(), keywords.end());
    auto hits = store.query("testing", "Testing Tools", keyword_set, 1);
    if (!hits.empty()) {
        test_plan.framework = hits.front().id;
    } else {
        test_plan.framework = "unspecified";
        test_plan.scope_notes.push_back("no testing-tools knowledge matched; framework left "
                                        "unspecified");
    }

    auto universe = model::contracts_of(plan);
    for (const auto& requirement : srs) {
        auto mappings = model::map_requirement(requirement, add, universe);
        if (mappings.empty()) {
            if (requirement.kind == model::RequirementKind::Functional) {
                if (strict) {
                    throw UnmappableRequirementError("requirement '" + requirement.id +
                                                     "' maps to no plan contract");
                }
                test_plan.untestable.push_back(requirement.id +
                                               ": no module or contract references it");
            }
            continue;
        }
        test_plan.mappings.insert(test_plan.mappings.end(), mappings.begin(), mappings.end());
    }

    test_plan.scope_notes.push_back("scope: " + std::to_string(units.size()) +
                                    " generated units, plan v" + std::to_string(plan.version));
    return test_plan;
}

namespace {

bool is_integer_type(const std::string& semantic_type) {
    static const std::set<std::string> integer_types{
        "int",  "integer", "long",  "short",  "byte",  "int8",  "int16", "int32",
        "int64", "uint",   "uint8", "uint16", "uint32", "uint64", "unsigned", "size_t",
    };
    std::string lowered;
    for (char c : semantic_type) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return integer_types.count(lowered) > 0;
}

bool is_numeric_type(const std::string& semantic_type) {
    static const std::set<std::string> float_types{"float", "double", "number", "decimal"};
    std::string lowered;
    for (char c : semantic_type) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return is_integer_type(semantic_type) || float_types.count(lowered) > 0;
}

json numeric_value(const model::ParamSpec& param, double value) {
    if (is_integer_type(param.semantic_type)) {
        return json(static_cast<std::int64_t>(value));
    }
    return json(value);
}

/// Nominal input for one parameter: the range midpoint (floor division
/// for integers), zero for unranged numerics, false/"nominal" otherwise.
json nominal_value(const model::ParamSpec& param) {
    if (param.numeric_range) {
        double midpoint = (param.numeric_range->first + param.numeric_range->second) / 2.0;
        if (is_integer_type(param.semantic_type)) {
            return json(static_cast<std::int64_t>(std::floor(midpoint)));
        }
        return json(midpoint);
    }
    if (is_numeric_type(param.semantic_type)) {
        return numeric_value(param, 0.0);
    }
    std::string lowered;
    for (char c : param.semantic_type) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lowered == "bool" || lowered == "boolean") {
        return json(false);
    }
    return json("nominal");
}

std::map<std::string, json> nominal_inputs(const MethodContract& contract) {
    std::map<std::string, json> inputs;
    for (const auto& param : contract.params) {
        inputs[param.name] = nominal_value(param);
    }
    return inputs;
}

/// One step outside a range limit: +-1 for integers, a millionth of the
/// range width (at least one representable step) otherwise.
double outside_step(const model::ParamSpec& param) {
    const auto& [lo, hi] = *param.numeric_range;
    if (is_integer_type(param.semantic_type)) {
        return 1.0;
    }
    double width = hi - lo;
    double step = width * 1e-6;
    if (hi + step == hi) {
        step = std::nextafter(hi, std::numeric_limits<double>::infinity()) - hi;
    }
    return step;
}

std::string dump_number(const json& value) {
    return value.dump();
}

}  // namespace

std::string defect_id_for(const std::string& case_id) {
    return "DEF-" + case_id;
}

std::vector<TestCase> derive_test_cases(const MethodContract& contract,
                                        const RequirementMapping& mapping) {
    std::vector<TestCase> cases;
    const std::string method = model::method_name(contract.signature);
    const std::string prefix = mapping.requirement_id + "." + mapping.module_id + "." + method;
    model::TraceLink trace{mapping.requirement_id, contract.signature};

    auto push_case = [&](model::CaseCategory category, int index,
                         std::map<std::string, json> inputs, model::OracleSpec oracle) {
        TestCase test_case;
        test_case.id = prefix + "." + model::to_token(category) + "." + std::to_string(index);
        test_case.category = category;
        test_case.trace = trace;
        test_case.input_values = std::move(inputs);
        test_case.oracle = std::move(oracle);
        test_case.status = model::CaseStatus::Pending;
        cases.push_back(std::move(test_case));
    };

    push_case(model::CaseCategory::Positive, 1, nominal_inputs(contract),
              {"returns", "nominal inputs accepted", std::nullopt});

    int negative_index = 0;
    for (const auto& param : contract.params) {
        for (const auto& invalid_class : param.invalid_classes) {
            auto inputs = nominal_inputs(contract);
            if (invalid_class == "out-of-range") {
                if (!param.numeric_range) {
                    throw RangeError("param '" + param.name + "' of '" + contract.signature +
                                     "' declares out-of-range but has no numeric_range");
                }
                inputs[param.name] =
                    numeric_value(param, param.numeric_range->second + outside_step(param));
            } else {
                inputs[param.name] = json{{"invalid_class", invalid_class}};
            }
            push_case(model::CaseCategory::Negative, ++negative_index, std::move(inputs),
                      {"rejects", "rejects " + param.name + " in class '" + invalid_class + "'",
                       std::nullopt});
        }
    }

    int boundary_index = 0;
    for (const auto& param : contract.params) {
        if (!param.numeric_range) {
            continue;
        }
        const auto& [lo, hi] = *param.numeric_range;
        double step = outside_step(param);
        const std::pair<double, double> limits[2] = {{lo, lo - step}, {hi, hi + step}};
        for (const auto& [limit, outside] : limits) {
            auto at_limit = nominal_inputs(contract);
            at_limit[param.name] = numeric_value(param, limit);
            push_case(model::CaseCategory::Boundary, ++boundary_index, std::move(at_limit),
                      {"returns",
                       "accepts " + param.name + " at limit " +
                           dump_number(numeric_value(param, limit)),
                       std::nullopt});

            auto outside_limit = nominal_inputs(contract);
            outside_limit[param.name] = numeric_value(param, outside);
            push_case(model::CaseCategory::Boundary, ++boundary_index, std::move(outside_limit),
                      {"rejects",
                       "rejects " + param.name + " one step outside limit " +
                           dump_number(numeric_value(param, limit)),
                       std::nullopt});
        }
    }

    int exception_index = 0;
    for (const auto& condition : contract.exception_conditions) {
        push_case(model::CaseCategory::Exception, ++exception_index, nominal_inputs(contract),
                  {"raises", condition, std::nullopt});
    }

    if (contract.nondeterministic) {
        model::OracleSpec oracle{"property", "invariants hold under seeded random inputs",
                                 fnv1a_32(contract.signature)};
        push_case(model::CaseCategory::Property, 1, nominal_inputs(contract), std::move(oracle));
    }
    return cases;
}

std::vector<TestCase> derive_all_cases(const TestPlan& test_plan, const CodePlan& plan) {
    std::vector<TestCase> cases;
    for (const auto& mapping : test_plan.mappings) {
        const model::MethodContract* contract = nullptr;
        if (const model::PlanStep* step = plan.find_step(mapping.module_id)) {
            for (const auto& candidate : step->contracts) {
                if (candidate.signature == mapping.method_signature) {
                    contract = &candidate;
                    break;
                }
            }
        }
        if (contract == nullptr) {
            throw NotFoundError("test plan maps '" + mapping.requirement_id + "' to unknown '" +
                                mapping.method_signature + "' in module '" + mapping.module_id +
                                "'");
        }
        auto derived = derive_test_cases(*contract, mapping);
        cases.insert(cases.end(), derived.begin(), derived.end());
    }
    return cases;
}

TraceabilityMatrix build_matrix(const std::vector<TestCase>& cases) {
    // Key rows by (requirement, signature); module recovered from case ids.
    std::map<std::pair<std::string, std::string>, model::TraceRow> rows;
    for (const auto& test_case : cases) {
        auto key = std::make_pair(test_case.trace.requirement_id,
                                  test_case.trace.method_signature);
        auto it = rows.find(key);
        if (it == rows.end()) {
            model::TraceRow row;
            row.requirement_id = test_case.trace.requirement_id;
            row.method_signature = test_case.trace.method_signature;
            // Case ids look like "<req>.<module>.<method>.<category>.<n>".
            std::string rest = test_case.id.substr(test_case.trace.requirement_id.size() + 1);
            row.module_id = rest.substr(0, rest.find('.'));
            it = rows.emplace(key, std::move(row)).first;
        }
        it->second.test_case_ids.push_back(test_case.id);
    }
    TraceabilityMatrix matrix;
    for (auto& [key, row] : rows) {
        std::sort(row.test_case_ids.begin(), row.test_case_ids.end());
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

std::set<std::string> regenerate_affected(const TraceabilityMatrix& matrix,
                                          const std::set<std::string>& changed_requirements,
                                          const std::set<std::string>& changed_signatures) {
    std::set<std::string> affected;
    for (const auto& row : matrix.rows) {
        if (changed_requirements.count(row.requirement_id) > 0 ||
            changed_signatures.count(row.method_signature) > 0) {
            affected.insert(row.test_case_ids.begin(), row.test_case_ids.end());
        }
    }
    return affected;
}

std::vector<TestCase> apply_regeneration(const std::vector<TestCase>& cases,
                                         const std::set<std::string>& affected,
                                         const TestPlan& test_plan, const CodePlan& plan) {
    std::vector<TestCase> fresh = derive_all_cases(test_plan, plan);
    std::map<std::string, const TestCase*> fresh_by_id;
    for (const auto& test_case : fresh) {
        fresh_by_id[test_case.id] = &test_case;
    }

    std::vector<TestCase> out;
    for (const auto& test_case : cases) {
        if (affected.count(test_case.id) == 0) {
            out.push_back(test_case);
            continue;
        }
        auto it = fresh_by_id.find(test_case.id);
        if (it == fresh_by_id.end()) {
            continue;  // the mapping disappeared; the case is retired
        }
        TestCase regenerated = *it->second;
        regenerated.status = model::CaseStatus::Regenerated;
        out.push_back(std::move(regenerated));
    }
    return out;
}

namespace {

model::DefectSeverity severity_for(model::CaseCategory category, bool duplicate) {
    if (duplicate) {
        return model::DefectSeverity::Minor;
    }
    switch (category) {
        case model::CaseCategory::Exception:
        case model::CaseCategory::Boundary:
            return model::DefectSeverity::Blocker;
        case model::CaseCategory::Negative:
        case model::CaseCategory::Positive:
        case model::CaseCategory::Property:
            return model::DefectSeverity::Major;
    }
    return model::DefectSeverity::Major;
}

}  // namespace

TestReport execute_and_report(std::vector<TestCase>& cases,
                              const std::vector<SourceUnit>& units, const CodePlan& plan,
                              toolchain::Toolchain& toolchain, int ordinal,
                              const std::set<std::string>& open_defects) {
    // Sequential execution in case-id order keeps reports reproducible.
    std::sort(cases.begin(), cases.end(),
              [](const TestCase& a, const TestCase& b) { return a.id < b.id; });
    toolchain::RawResults results = toolchain.run_tests(cases, units);

    TestReport report;
    report.ordinal = ordinal;

    std::set<std::string> exercised;
    for (auto& test_case : cases) {
        const toolchain::RawCaseResult& raw = results.at(test_case.id);
        exercised.insert(test_case.trace.method_signature);
        report.case_results[test_case.id] = raw.passed ? "passed" : "failed";
        test_case.status = raw.passed ? model::CaseStatus::Passed : model::CaseStatus::Failed;
        if (raw.passed) {
            continue;
        }
        model::DefectEntry defect;
        defect.id = defect_id_for(test_case.id);
        defect.severity = severity_for(test_case.category, open_defects.count(defect.id) > 0);
        defect.description = "case " + test_case.id + " (" +
                             model::to_token(test_case.category) + ") failed for " +
                             test_case.trace.method_signature;
        defect.test_input = json(test_case.input_values);
        defect.expected = model::to_json(test_case.oracle);
        defect.actual = raw.actual;
        defect.trace = test_case.trace;
        report.defects.push_back(std::move(defect));
    }

    std::set<std::string> planned;
    for (const auto& step : plan.steps) {
        for (const auto& contract : step.contracts) {
            planned.insert(contract.signature);
        }
    }
    int covered = 0;
    for (const auto& signature : exercised) {
        if (planned.count(signature) > 0) {
            ++covered;
        }
    }
    report.coverage = planned.empty() ? 0.0
                                      : static_cast<double>(covered) /
                                            static_cast<double>(planned.size());
    return report;
}

}  // namespace appforge::ta
