#include <algorithm>
#include <set>

#include "appforge/toolchain/toolchain.hpp"

#include "appforge/model/serialize.hpp"

namespace appforge::toolchain {

using model::CompilationLog;
using model::Diagnostic;
using model::SourceUnit;

namespace {

std::set<std::string> declared_symbols(const std::vector<SourceUnit>& units) {
    std::set<std::string> symbols;
    for (const auto& unit : units) {
        symbols.insert(unit.body.declares.begin(), unit.body.declares.end());
    }
    return symbols;
}

void check_body(const SourceUnit& unit, const std::set<std::string>& scope,
                std::vector<Diagnostic>& out) {
    for (const auto& marker : unit.body.defect_markers) {
        if (marker.kind != model::MarkerKind::Compile) {
            continue;
        }
        Diagnostic d;
        d.severity = model::DiagSeverity::Error;
        d.error_type = marker.detail;
        d.path = unit.path;
        d.line = 0;
        d.message = "injected compile defect: " + marker.detail;
        out.push_back(std::move(d));
    }
    int line = 0;
    for (const auto& symbol : unit.body.references) {
        ++line;
        if (scope.count(symbol) > 0) {
            continue;
        }
        Diagnostic d;
        d.severity = model::DiagSeverity::Error;
        d.error_type = "undeclared-symbol";
        d.path = unit.path;
        d.line = line;
        d.message = "reference to undeclared symbol '" + symbol + "'";
        d.suggested_fix = "declare '" + symbol + "' or depend on the module that declares it";
        out.push_back(std::move(d));
    }
}

CompilationLog finish_log(std::string scope, std::vector<Diagnostic> diagnostics, int ordinal) {
    CompilationLog log;
    log.scope = std::move(scope);
    log.diagnostics = std::move(diagnostics);
    log.outcome = log.has_errors() ? model::BuildOutcome::Failure : model::BuildOutcome::Success;
    log.ordinal = ordinal;
    return log;
}

}  // namespace

CompilationLog StubToolchain::compile_unit(const SourceUnit& unit,
                                           const std::vector<SourceUnit>& compiled,
                                           int ordinal) {
    std::set<std::string> scope = declared_symbols(compiled);
    scope.insert(unit.body.declares.begin(), unit.body.declares.end());
    std::vector<Diagnostic> diagnostics;
    check_body(unit, scope, diagnostics);
    return finish_log(unit.path, std::move(diagnostics), ordinal);
}

CompilationLog StubToolchain::compile_all(const std::vector<SourceUnit>& units, int ordinal) {
    std::set<std::string> scope = declared_symbols(units);
    std::vector<Diagnostic> diagnostics;
    std::vector<const SourceUnit*> ordered;
    ordered.reserve(units.size());
    for (const auto& unit : units) {
        ordered.push_back(&unit);
    }
    std::sort(ordered.begin(), ordered.end(), [](const SourceUnit* a, const SourceUnit* b) {
        return a->module_id < b->module_id;
    });
    for (const SourceUnit* unit : ordered) {
        check_body(*unit, scope, diagnostics);
    }
    return finish_log("integration", std::move(diagnostics), ordinal);
}

LaunchOutcome StubToolchain::launch_check(const std::vector<SourceUnit>& units) {
    std::vector<const SourceUnit*> ordered;
    ordered.reserve(units.size());
    for (const auto& unit : units) {
        ordered.push_back(&unit);
    }
    std::sort(ordered.begin(), ordered.end(), [](const SourceUnit* a, const SourceUnit* b) {
        return a->module_id < b->module_id;
    });
    for (const SourceUnit* unit : ordered) {
        for (const auto& marker : unit->body.defect_markers) {
            if (marker.kind == model::MarkerKind::Init) {
                LaunchOutcome outcome;
                outcome.ok = false;
                outcome.unit_path = unit->path;
                outcome.detail = marker.detail;
                return outcome;
            }
        }
    }
    return {};
}

RawResults StubToolchain::run_tests(const std::vector<model::TestCase>& cases,
                                    const std::vector<SourceUnit>& units) {
    RawResults results;
    for (const auto& test_case : cases) {
        const std::string method = model::method_name(test_case.trace.method_signature);
        std::string failure_detail;
        for (const auto& unit : units) {
            for (const auto& marker : unit.body.defect_markers) {
                if (marker.kind != model::MarkerKind::Logic || !marker.target_signature) {
                    continue;
                }
                bool targets_method = *marker.target_signature == test_case.trace.method_signature ||
                                      *marker.target_signature == method;
                bool names_category =
                    marker.detail.find(model::to_token(test_case.category)) != std::string::npos;
                if (targets_method && names_category) {
                    failure_detail = marker.detail;
                }
            }
        }
        RawCaseResult result;
        if (failure_detail.empty()) {
            result.passed = true;
            result.actual = model::to_json(test_case.oracle);
        } else {
            result.passed = false;
            result.actual = "defect: " + failure_detail;
        }
        results[test_case.id] = std::move(result);
    }
    return results;
}

}  // namespace appforge::toolchain
