#include "appforge/agents/ca.hpp"

#include <algorithm>
#include <set>

#include "appforge/model/serialize.hpp"
#include "appforge/model/trace.hpp"

namespace appforge::ca {

using backend::GenRequest;
using backend::RequestKind;

backend::GenRequest build_api_request(const CodePlan& plan, const kb::Store& store) {
    std::vector<std::string> modules;
    std::vector<std::string> signatures;
    for (const auto& step : plan.steps) {
        modules.push_back(step.module_id);
        for (const auto& contract : step.contracts) {
            signatures.push_back(contract.signature);
        }
    }
    std::sort(modules.begin(), modules.end());
    std::sort(signatures.begin(), signatures.end());

    std::vector<std::string> keyword_sources = modules;
    for (const auto& signature : signatures) {
        keyword_sources.push_back(model::method_name(signature));
    }
    auto keywords = model::tokenize(keyword_sources);
    std::set<std::string> keyword_set(keywords.begin(), keywords.end());
    std::set<std::string> kb_ids;
    for (const auto& doc : store.query("coding", "API Library", keyword_set, 3)) {
        kb_ids.insert(doc.id);
    }

    json context{{"modules", json(modules)},
                 {"signatures", json(signatures)},
                 {"kb", json(kb_ids)}};
    return backend::make_request(RequestKind::ApiProposal, std::move(context));
}

ApiManifest manifest_from_proposal(const json& payload) {
    expect_fields(payload, "api proposal", {"entries"});
    ApiManifest manifest;
    std::map<std::string, size_t> index;
    for (const auto& entry_json : payload.at("entries")) {
        model::ApiEntry entry = model::api_entry_from_json(entry_json);
        auto it = index.find(entry.library_name);
        if (it == index.end()) {
            index[entry.library_name] = manifest.entries.size();
            manifest.entries.push_back(std::move(entry));
            continue;
        }
        // Merge duplicates: union the used elements, keep the first
        // version constraint and purpose.
        model::ApiEntry& existing = manifest.entries[it->second];
        std::set<std::string> merged(existing.elements_used.begin(),
                                     existing.elements_used.end());
        merged.insert(entry.elements_used.begin(), entry.elements_used.end());
        existing.elements_used.assign(merged.begin(), merged.end());
    }
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const model::ApiEntry& a, const model::ApiEntry& b) {
                  return a.library_name < b.library_name;
              });
    return manifest;
}

ApiManifest analyze_apis(const CodePlan& plan, const kb::Store& store,
                         backend::Backend& backend) {
    GenRequest request = build_api_request(plan, store);
    backend::GenResponse response = backend.generate(request);
    return manifest_from_proposal(response.payload);
}

std::string unit_path(const ProjectStructure& structure, const std::string& module_id) {
    return structure.source_dir(module_id) + "/" + module_id + ".unit.json";
}

backend::GenRequest build_unit_request(const PlanStep& step, const CodePlan& plan,
                                       const ProjectStructure& structure,
                                       const ApiManifest& manifest) {
    json contracts = json::array();
    for (const auto& contract : step.contracts) {
        contracts.push_back(model::to_json(contract));
    }
    std::vector<std::string> deps;
    auto it = plan.dep_graph.find(step.module_id);
    if (it != plan.dep_graph.end()) {
        deps = it->second;
    }
    std::sort(deps.begin(), deps.end());
    std::vector<std::string> libraries;
    for (const auto& entry : manifest.entries) {
        libraries.push_back(entry.library_name);
    }
    json context{{"module_id", step.module_id},
                 {"contracts", contracts},
                 {"depends_on", json(deps)},
                 {"unit_path", unit_path(structure, step.module_id)},
                 {"libraries", json(libraries)}};
    return backend::make_request(RequestKind::SourceUnit, std::move(context));
}

SourceUnit generate_unit(const PlanStep& step, const CodePlan& plan,
                         const ProjectStructure& structure, const ApiManifest& manifest,
                         backend::Backend& backend, const UnitMap& units) {
    auto it = plan.dep_graph.find(step.module_id);
    if (it != plan.dep_graph.end()) {
        for (const auto& dep : it->second) {
            auto unit = units.find(dep);
            if (unit == units.end() || unit->second.status != model::UnitStatus::Compiled) {
                throw DependencyNotReadyError("module '" + step.module_id + "' needs '" + dep +
                                              "' compiled first");
            }
        }
    }

    GenRequest request = build_unit_request(step, plan, structure, manifest);
    backend::GenResponse response = backend.generate(request);

    SourceUnit unit;
    unit.path = unit_path(structure, step.module_id);
    unit.module_id = step.module_id;
    unit.plan_version = plan.version;
    unit.body = model::stub_body_from_json(response.payload);
    unit.status = model::UnitStatus::Generated;
    unit.debug_attempts = 0;
    return unit;
}

CompilationLog compile_unit(SourceUnit& unit, const UnitMap& units,
                            toolchain::Toolchain& toolchain, int ordinal) {
    if (unit.status != model::UnitStatus::Generated) {
        throw DependencyNotReadyError("unit '" + unit.module_id + "' is not in generated state");
    }
    std::vector<SourceUnit> compiled;
    for (const auto& [module, other] : units) {
        if (module != unit.module_id && other.status == model::UnitStatus::Compiled) {
            compiled.push_back(other);
        }
    }
    CompilationLog log = toolchain.compile_unit(unit, compiled, ordinal);
    unit.status = log.outcome == model::BuildOutcome::Success ? model::UnitStatus::Compiled
                                                              : model::UnitStatus::Failed;
    return log;
}

backend::GenRequest build_fix_request(const SourceUnit& unit, const CompilationLog& log,
                                      const CodePlan& plan, int attempt) {
    json diagnostics = json::array();
    for (const auto& d : log.diagnostics) {
        diagnostics.push_back(model::to_json(d));
    }
    json contracts = json::array();
    if (const model::PlanStep* step = plan.find_step(unit.module_id)) {
        for (const auto& contract : step->contracts) {
            contracts.push_back(model::to_json(contract));
        }
    }
    json context{{"module_id", unit.module_id},
                 {"unit_path", unit.path},
                 {"contracts", contracts},
                 {"attempt", attempt},
                 {"diagnostics", diagnostics}};
    return backend::make_request(RequestKind::FixSnippet, std::move(context));
}

SourceUnit self_debug(const SourceUnit& unit, const CompilationLog& log, const CodePlan& plan,
                      backend::Backend& backend, int budget) {
    if (unit.debug_attempts >= budget) {
        throw BudgetExhausted("self-debug budget (" + std::to_string(budget) +
                              ") exhausted for unit '" + unit.module_id + "'");
    }
    GenRequest request = build_fix_request(unit, log, plan, unit.debug_attempts + 1);
    backend::GenResponse response = backend.generate(request);

    SourceUnit fixed = unit;
    fixed.body = model::stub_body_from_json(response.payload);
    fixed.debug_attempts = unit.debug_attempts + 1;
    fixed.status = model::UnitStatus::Generated;
    return fixed;
}

IntegrationOutcome integration_build(const UnitMap& units, const ProjectStructure& structure,
                                     toolchain::Toolchain& toolchain, int ordinal) {
    (void)structure;
    std::vector<SourceUnit> all;
    all.reserve(units.size());
    for (const auto& [module, unit] : units) {
        if (unit.status != model::UnitStatus::Compiled) {
            throw DependencyNotReadyError("integration build requires '" + module +
                                          "' to be compiled");
        }
        all.push_back(unit);
    }
    IntegrationOutcome outcome{toolchain.compile_all(all, ordinal), {}};
    if (outcome.log.outcome == model::BuildOutcome::Success) {
        outcome.launch = toolchain.launch_check(all);
    } else {
        outcome.launch.ok = false;
        outcome.launch.detail = "integration compile failed";
    }
    return outcome;
}

json to_json(const QualityIssue& issue) {
    return json{{"module_id", issue.module_id}, {"rule", issue.rule}, {"detail", issue.detail}};
}

namespace {

std::set<std::string> allowed_visibilities(const std::string& rule) {
    // "module=public,protected"
    auto eq = rule.find('=');
    std::set<std::string> out;
    if (eq == std::string::npos) {
        return out;
    }
    std::string values = rule.substr(eq + 1);
    size_t start = 0;
    while (start <= values.size()) {
        auto comma = values.find(',', start);
        std::string token = values.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!token.empty()) {
            out.insert(token);
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::set<std::string> dependency_closure(const std::string& module,
                                         const model::DepGraph& graph) {
    std::set<std::string> closure{module};
    std::vector<std::string> frontier{module};
    while (!frontier.empty()) {
        std::string current = frontier.back();
        frontier.pop_back();
        auto it = graph.find(current);
        if (it == graph.end()) {
            continue;
        }
        for (const auto& dep : it->second) {
            if (closure.insert(dep).second) {
                frontier.push_back(dep);
            }
        }
    }
    return closure;
}

}  // namespace

std::vector<QualityIssue> quality_check(const UnitMap& units, const CodePlan& plan) {
    std::vector<QualityIssue> issues;

    std::map<std::string, std::set<std::string>> visibility_rules;
    for (const auto& rule : plan.arrangement_rules.visibility_rules) {
        auto eq = rule.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        visibility_rules[rule.substr(0, eq)] = allowed_visibilities(rule);
    }
    for (const auto& step : plan.steps) {
        auto rule = visibility_rules.find(step.module_id);
        if (rule == visibility_rules.end()) {
            continue;
        }
        for (const auto& contract : step.contracts) {
            std::string token = model::to_token(contract.visibility);
            if (rule->second.count(token) == 0) {
                issues.push_back({step.module_id, "visibility",
                                  "contract '" + contract.signature + "' uses visibility " +
                                      token});
            }
        }
    }

    // Symbols that resolve globally but through a module the unit does not
    // declare a dependency on point at a layering problem.
    std::map<std::string, std::string> owner;  // symbol -> module
    for (const auto& [module, unit] : units) {
        for (const auto& symbol : unit.body.declares) {
            owner.emplace(symbol, module);
        }
    }
    for (const auto& [module, unit] : units) {
        std::set<std::string> closure = dependency_closure(module, plan.dep_graph);
        for (const auto& symbol : unit.body.references) {
            auto it = owner.find(symbol);
            if (it == owner.end()) {
                continue;  // the compile pass reports unresolved symbols
            }
            if (closure.count(it->second) == 0) {
                issues.push_back({module, "undeclared-dependency-use",
                                  "symbol '" + symbol + "' comes from module '" + it->second +
                                      "' which is not a declared dependency"});
            }
        }
    }

    std::sort(issues.begin(), issues.end(), [](const QualityIssue& a, const QualityIssue& b) {
        if (a.module_id != b.module_id) {
            return a.module_id < b.module_id;
        }
        if (a.rule != b.rule) {
            return a.rule < b.rule;
        }
        return a.detail < b.detail;
    });
    return issues;
}

backend::GenRequest build_rectification_request(const std::vector<DefectEntry>& defects,
                                                const CodePlan& plan,
                                                const ApiManifest& manifest,
                                                const std::vector<std::string>& target_modules,
                                                int round) {
    json defect_refs = json::array();
    for (const auto& defect : defects) {
        defect_refs.push_back(json{{"id", defect.id},
                                   {"method_signature", defect.trace.method_signature},
                                   {"severity", model::to_token(defect.severity)}});
    }
    std::vector<std::string> libraries;
    for (const auto& entry : manifest.entries) {
        libraries.push_back(entry.library_name);
    }
    json context{{"plan_version", plan.version},
                 {"targets", json(target_modules)},
                 {"defects", defect_refs},
                 {"libraries", json(libraries)},
                 {"round", round}};
    return backend::make_request(RequestKind::Rectification, std::move(context));
}

RectifyOutcome rectify(UnitMap& units, const std::vector<DefectEntry>& defects,
                       const CodePlan& plan, const ApiManifest& manifest,
                       backend::Backend& backend, int round) {
    RectifyOutcome outcome;
    outcome.manifest = manifest;
    if (defects.empty()) {
        return outcome;
    }

    // Trace closure: the modules owning the defects' method signatures.
    std::set<std::string> closure;
    for (const auto& defect : defects) {
        for (const auto& step : plan.steps) {
            for (const auto& contract : step.contracts) {
                if (contract.signature == defect.trace.method_signature) {
                    closure.insert(step.module_id);
                }
            }
        }
    }
    std::vector<std::string> targets(closure.begin(), closure.end());

    GenRequest request = build_rectification_request(defects, plan, manifest, targets, round);
    backend::GenResponse response = backend.generate(request);

    const json& bodies = response.payload.at("unit_bodies");
    for (auto it = bodies.begin(); it != bodies.end(); ++it) {
        if (closure.count(it.key()) == 0) {
            throw SchemaError("rectification touches module '" + it.key() +
                              "' outside the defect trace closure");
        }
        auto unit = units.find(it.key());
        if (unit == units.end()) {
            throw NotFoundError("rectification targets unknown unit '" + it.key() + "'");
        }
        unit->second.body = model::stub_body_from_json(it.value());
        unit->second.status = model::UnitStatus::Generated;
        outcome.changed_unit_paths.push_back(unit->second.path);
    }
    std::sort(outcome.changed_unit_paths.begin(), outcome.changed_unit_paths.end());

    if (response.payload.contains("api_updates")) {
        for (const auto& entry_json : response.payload.at("api_updates")) {
            model::ApiEntry entry = model::api_entry_from_json(entry_json);
            bool replaced = false;
            for (auto& existing : outcome.manifest.entries) {
                if (existing.library_name == entry.library_name) {
                    existing = entry;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) {
                outcome.manifest.entries.push_back(entry);
            }
        }
        std::sort(outcome.manifest.entries.begin(), outcome.manifest.entries.end(),
                  [](const model::ApiEntry& a, const model::ApiEntry& b) {
                      return a.library_name < b.library_name;
                  });
    }
    return outcome;
}

}  // namespace appforge::ca
