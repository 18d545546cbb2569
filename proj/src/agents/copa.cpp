#include "appforge/agents/copa.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "appforge/model/serialize.hpp"

namespace appforge::copa {

using backend::GenRequest;
using backend::RequestKind;

json to_json(const AnalysisResult& analysis) {
    json requirements = json::array();
    for (const auto& r : analysis.requirements) {
        requirements.push_back(model::to_json(r));
    }
    json elements = json::array();
    for (const auto& e : analysis.elements) {
        elements.push_back(model::to_json(e));
    }
    return json{{"requirements", requirements},
                {"elements", elements},
                {"constraints", json(analysis.constraints)},
                {"ambiguities", json(analysis.ambiguities)}};
}

namespace {

bool known_type(const std::string& type, const std::set<std::string>& modules,
                const std::vector<ArchElement>& add) {
    static const std::set<std::string> primitives{
        "void", "int",  "integer", "long",   "short",  "byte",   "float",
        "double", "bool", "boolean", "string", "char", "object",
    };
    std::string lowered;
    for (char c : type) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (primitives.count(lowered) > 0 || modules.count(type) > 0) {
        return true;
    }
    // Domain types are acceptable when some element's prose introduces them.
    for (const auto& element : add) {
        if (element.responsibilities.find(type) != std::string::npos) {
            return true;
        }
        for (const auto& constraint : element.tech_constraints) {
            if (constraint.find(type) != std::string::npos) {
                return true;
            }
        }
    }
    return false;
}

std::set<std::string> kb_excerpt_ids(const kb::Store& store, const std::string& corpus,
                                     const std::string& pillar,
                                     const std::vector<std::string>& keywords) {
    std::set<std::string> keyword_set(keywords.begin(), keywords.end());
    std::set<std::string> ids;
    for (const auto& doc : store.query(corpus, pillar, keyword_set, 3)) {
        ids.insert(doc.id);
    }
    return ids;
}

}  // namespace

AnalysisResult analyze_documents(const std::vector<RequirementItem>& srs,
                                 const std::vector<ArchElement>& add, const kb::Store& store) {
    (void)store;  // the knowledge base informs the backend, not extraction
    AnalysisResult analysis;
    analysis.requirements = srs;
    analysis.elements = add;

    std::set<std::string> modules;
    for (const auto& element : add) {
        modules.insert(element.module_id);
    }
    std::set<std::string> merged;
    for (const auto& requirement : srs) {
        merged.insert(requirement.constraints.begin(), requirement.constraints.end());
    }
    for (const auto& element : add) {
        merged.insert(element.tech_constraints.begin(), element.tech_constraints.end());
    }
    analysis.constraints.assign(merged.begin(), merged.end());

    for (const auto& element : add) {
        for (const auto& dep : element.depends_on) {
            if (modules.count(dep) == 0) {
                analysis.ambiguities.push_back("add:" + element.module_id +
                                               ": undeclared dependency " + dep);
            }
        }
        for (const auto& contract : element.contracts) {
            std::set<std::string> named;
            named.insert(contract.returns);
            for (const auto& param : contract.params) {
                named.insert(param.semantic_type);
            }
            for (const auto& type : named) {
                if (!known_type(type, modules, add)) {
                    analysis.ambiguities.push_back("add:" + element.module_id + ": contract '" +
                                                   contract.signature +
                                                   "' names unknown type " + type);
                }
            }
        }
    }

    auto universe = model::contracts_of(add);
    for (const auto& requirement : srs) {
        if (model::map_requirement(requirement, add, universe).empty()) {
            analysis.ambiguities.push_back("srs:" + requirement.id +
                                           ": requirement mapped to no module");
        }
    }
    return analysis;
}

GenRequest build_plan_request(const AnalysisResult& analysis, const kb::Store& store) {
    json context = to_json(analysis);
    context["kb"] =
        json(kb_excerpt_ids(store, "srs-add", "", model::tokenize(analysis.constraints)));
    return backend::make_request(RequestKind::PlanProposal, std::move(context));
}

namespace {

/// Orders proposal steps by dependency rank, smallest module id first
/// among ready modules; stepless graph entries and graphless steps are
/// both tolerated here and reported by validation instead.
std::vector<model::PlanStep> normalize_steps(std::vector<model::PlanStep> steps,
                                             const model::DepGraph& graph) {
    model::DepGraph combined = graph;
    for (const auto& step : steps) {
        combined.emplace(step.module_id, std::vector<std::string>{});
    }
    std::vector<std::string> order = model::topo_order(combined);
    std::vector<model::PlanStep> sorted;
    for (const auto& module : order) {
        for (auto& step : steps) {
            if (step.module_id == module) {
                sorted.push_back(std::move(step));
                break;
            }
        }
    }
    return sorted;
}

CodePlan plan_from_payload(const json& proposal, int version,
                           std::vector<std::string> ambiguities,
                           const std::vector<ArchElement>& add) {
    expect_fields(proposal, "plan proposal",
                  {"steps", "dep_graph", "packages", "arrangement_rules"});
    CodePlan plan;
    plan.version = version;
    for (const auto& step : proposal.at("steps")) {
        plan.steps.push_back(model::plan_step_from_json(step));
    }
    const json& graph = proposal.at("dep_graph");
    for (auto it = graph.begin(); it != graph.end(); ++it) {
        std::vector<std::string> deps;
        for (const auto& dep : it.value()) {
            deps.push_back(dep.get<std::string>());
        }
        plan.dep_graph[it.key()] = std::move(deps);
    }
    plan.packages = model::package_node_from_json(proposal.at("packages"));
    plan.arrangement_rules = model::arrangement_rules_from_json(proposal.at("arrangement_rules"));
    plan.ambiguities = std::move(ambiguities);

    try {
        plan.steps = normalize_steps(std::move(plan.steps), plan.dep_graph);
    } catch (const CycleError& e) {
        throw PlanValidationError(std::string("proposal rejected: ") + e.what());
    }

    auto result = model::validate_plan(plan, add);
    if (!result.ok()) {
        std::string message = "proposal rejected:";
        for (const auto& violation : result.violations) {
            message += " [" + violation + "]";
        }
        throw PlanValidationError(message);
    }
    return plan;
}

}  // namespace

CodePlan plan_from_proposal(const AnalysisResult& analysis, const json& proposal,
                            const std::vector<ArchElement>& add) {
    return plan_from_payload(proposal, 1, analysis.ambiguities, add);
}

CodePlan generate_plan(const AnalysisResult& analysis, const kb::Store& store,
                       backend::Backend& backend, const std::vector<ArchElement>& add) {
    GenRequest request = build_plan_request(analysis, store);
    backend::GenResponse response = backend.generate(request);
    return plan_from_proposal(analysis, response.payload, add);
}

namespace {

void collect_directories(const model::PackageNode& node, const std::string& prefix,
                         std::vector<model::DirectoryEntry>& out) {
    std::string path = prefix.empty() ? node.name : prefix + "/" + node.name;
    if (node.modules.empty()) {
        out.push_back({path, model::DirectoryRole::Source, std::nullopt});
    }
    for (const auto& module : node.modules) {
        out.push_back({path, model::DirectoryRole::Source, module});
    }
    for (const auto& child : node.children) {
        collect_directories(child, path, out);
    }
}

}  // namespace

ProjectStructure generate_structure(const CodePlan& plan) {
    ProjectStructure structure;
    collect_directories(plan.packages, "src", structure.directories);

    // Modules the package tree does not place land directly under src/.
    std::set<std::string> placed;
    for (const auto& entry : structure.directories) {
        if (entry.module) {
            placed.insert(*entry.module);
        }
    }
    for (const auto& step : plan.steps) {
        if (placed.count(step.module_id) == 0) {
            structure.directories.push_back(
                {"src/" + step.module_id, model::DirectoryRole::Source, step.module_id});
        }
    }

    for (const auto& step : plan.steps) {
        structure.directories.push_back(
            {"tests/" + step.module_id, model::DirectoryRole::Tests, step.module_id});
    }
    structure.directories.push_back({"resources", model::DirectoryRole::Resources, std::nullopt});

    std::stable_sort(structure.directories.begin(), structure.directories.end(),
                     [](const model::DirectoryEntry& a, const model::DirectoryEntry& b) {
                         if (a.path != b.path) {
                             return a.path < b.path;
                         }
                         return a.module.value_or("") < b.module.value_or("");
                     });

    // Drop duplicate placements, first (path-sorted) one wins.
    std::set<std::string> seen_modules;
    std::vector<model::DirectoryEntry> unique;
    for (auto& entry : structure.directories) {
        if (entry.role == model::DirectoryRole::Source && entry.module) {
            if (!seen_modules.insert(*entry.module).second) {
                continue;
            }
        }
        unique.push_back(std::move(entry));
    }
    structure.directories = std::move(unique);

    // Entry points: modules nothing else depends on.
    std::set<std::string> depended_on;
    for (const auto& [module, deps] : plan.dep_graph) {
        depended_on.insert(deps.begin(), deps.end());
    }
    for (const auto& step : plan.steps) {
        if (depended_on.count(step.module_id) == 0) {
            structure.entry_points[step.module_id] = structure.source_dir(step.module_id);
        }
    }
    return structure;
}

GenRequest build_revision_request(const CodePlan& plan, const FeedbackEvent& event,
                                  const CompilationLog& error_log,
                                  const std::vector<RequirementItem>& traced_requirements,
                                  const std::vector<ArchElement>& traced_elements,
                                  const kb::Store& store) {
    json diagnostics = json::array();
    for (const auto& d : error_log.diagnostics) {
        diagnostics.push_back(model::to_json(d));
    }
    json requirements = json::array();
    for (const auto& r : traced_requirements) {
        requirements.push_back(model::to_json(r));
    }
    json elements = json::array();
    for (const auto& e : traced_elements) {
        elements.push_back(model::to_json(e));
    }
    std::vector<std::string> keyword_sources{event.subject};
    json context{{"plan_version", plan.version},
                 {"subject", event.subject},
                 {"origin", model::to_token(event.origin)},
                 {"error_log", json{{"scope", error_log.scope}, {"diagnostics", diagnostics}}},
                 {"requirements", requirements},
                 {"elements", elements},
                 {"kb", json(kb_excerpt_ids(store, "srs-add", "",
                                            model::tokenize(keyword_sources)))}};
    return backend::make_request(RequestKind::PlanRevision, std::move(context));
}

CodePlan plan_from_revision(const CodePlan& current, const json& proposal,
                            const std::vector<ArchElement>& add) {
    CodePlan revised = plan_from_payload(proposal, current.version + 1, current.ambiguities, add);
    auto diff = model::plan_diff(current, revised);
    if (diff.empty()) {
        throw NoChangeError("revision for plan v" + std::to_string(current.version) +
                            " returned an identical plan");
    }
    return revised;
}

std::vector<RequirementItem> traced_requirements(const CodePlan& plan,
                                                 const std::vector<ArchElement>& add,
                                                 const std::vector<RequirementItem>& srs,
                                                 const std::string& subject) {
    auto universe = model::contracts_of(plan);
    std::vector<RequirementItem> traced;
    for (const auto& requirement : srs) {
        for (const auto& mapping : model::map_requirement(requirement, add, universe)) {
            if (mapping.module_id == subject) {
                traced.push_back(requirement);
                break;
            }
        }
    }
    return traced;
}

std::vector<ArchElement> traced_elements(const std::vector<ArchElement>& add,
                                         const std::string& subject) {
    std::vector<ArchElement> traced;
    for (const auto& element : add) {
        if (element.module_id == subject) {
            traced.push_back(element);
        }
    }
    return traced;
}

CodePlan revise_plan(const CodePlan& plan, const FeedbackEvent& event,
                     const CompilationLog& error_log,
                     const std::vector<RequirementItem>& srs,
                     const std::vector<ArchElement>& add, const kb::Store& store,
                     backend::Backend& backend) {
    // Mechanical root-cause bundle: the element behind the failing module
    // plus every requirement traced to it.
    GenRequest request = build_revision_request(
        plan, event, error_log, traced_requirements(plan, add, srs, event.subject),
        traced_elements(add, event.subject), store);
    backend::GenResponse response = backend.generate(request);
    return plan_from_revision(plan, response.payload, add);
}

}  // namespace appforge::copa
