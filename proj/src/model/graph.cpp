#include "appforge/model/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "appforge/model/serialize.hpp"

namespace appforge::model {

std::vector<std::string> topo_order(const DepGraph& graph) {
    // Kahn's algorithm; the ready set is an ordered set so the smallest
    // module id is always dequeued first.
    std::map<std::string, int> pending;  // unresolved dependency count
    std::map<std::string, std::vector<std::string>> dependents;
    for (const auto& [module, deps] : graph) {
        pending.emplace(module, 0);
        for (const auto& dep : deps) {
            pending.emplace(dep, 0);
        }
    }
    for (const auto& [module, deps] : graph) {
        for (const auto& dep : deps) {
            ++pending[module];
            dependents[dep].push_back(module);
        }
    }

    std::set<std::string> ready;
    for (const auto& [module, count] : pending) {
        if (count == 0) {
            ready.insert(module);
        }
    }

    std::vector<std::string> order;
    order.reserve(pending.size());
    while (!ready.empty()) {
        std::string module = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(module);
        for (const auto& dependent : dependents[module]) {
            if (--pending[dependent] == 0) {
                ready.insert(dependent);
            }
        }
    }

    if (order.size() != pending.size()) {
        for (const auto& [module, count] : pending) {
            if (count > 0) {
                throw CycleError("dependency cycle involving module '" + module + "'");
            }
        }
    }
    return order;
}

ValidationResult validate_plan(const CodePlan& plan, const std::vector<ArchElement>& add) {
    ValidationResult result;
    if (plan.version < 1) {
        result.violations.push_back("version: must be >= 1");
    }

    std::map<std::string, int> step_counts;
    for (const auto& step : plan.steps) {
        ++step_counts[step.module_id];
    }
    for (const auto& [module, count] : step_counts) {
        if (count > 1) {
            result.violations.push_back("duplicate step: " + module);
        }
    }
    for (const auto& element : add) {
        if (step_counts.find(element.module_id) == step_counts.end()) {
            result.violations.push_back("unplanned module: " + element.module_id);
        }
    }

    for (const auto& [module, deps] : plan.dep_graph) {
        if (step_counts.find(module) == step_counts.end()) {
            result.violations.push_back("unknown module in dep_graph: " + module);
        }
        for (const auto& dep : deps) {
            if (step_counts.find(dep) == step_counts.end()) {
                result.violations.push_back("unknown dependency: " + module + " -> " + dep);
            }
        }
    }

    bool acyclic = true;
    try {
        topo_order(plan.dep_graph);
    } catch (const CycleError& e) {
        acyclic = false;
        result.violations.push_back(std::string("cycle: ") + e.what());
    }

    if (acyclic) {
        // A step may only follow steps covering all of its dependencies.
        std::set<std::string> seen;
        for (const auto& step : plan.steps) {
            auto it = plan.dep_graph.find(step.module_id);
            if (it != plan.dep_graph.end()) {
                for (const auto& dep : it->second) {
                    if (seen.find(dep) == seen.end() && step_counts.count(dep) > 0) {
                        result.violations.push_back("step order violates dependency: " +
                                                    step.module_id + " before " + dep);
                    }
                }
            }
            seen.insert(step.module_id);
        }
    }
    return result;
}

bool PlanDiff::empty() const {
    return added_modules.empty() && removed_modules.empty() && changed_contracts.empty() &&
           changed_deps.empty() && changed_rationale.empty() && !packages_changed &&
           !arrangement_changed && !ambiguities_changed && !steps_reordered;
}

bool PlanDiff::reorder_only() const {
    return steps_reordered && added_modules.empty() && removed_modules.empty() &&
           changed_contracts.empty() && changed_deps.empty() && changed_rationale.empty() &&
           !packages_changed && !arrangement_changed && !ambiguities_changed;
}

namespace {

std::map<std::string, const PlanStep*> index_steps(const CodePlan& plan) {
    std::map<std::string, const PlanStep*> out;
    for (const auto& step : plan.steps) {
        out[step.module_id] = &step;
    }
    return out;
}

std::vector<std::string> contract_delta(const PlanStep& before, const PlanStep& after) {
    std::map<std::string, json> lhs;
    std::map<std::string, json> rhs;
    for (const auto& c : before.contracts) {
        lhs[c.signature] = to_json(c);
    }
    for (const auto& c : after.contracts) {
        rhs[c.signature] = to_json(c);
    }
    std::set<std::string> changed;
    for (const auto& [sig, value] : lhs) {
        auto it = rhs.find(sig);
        if (it == rhs.end() || it->second != value) {
            changed.insert(sig);
        }
    }
    for (const auto& [sig, value] : rhs) {
        if (lhs.find(sig) == lhs.end()) {
            changed.insert(sig);
        }
    }
    return {changed.begin(), changed.end()};
}

}  // namespace

PlanDiff plan_diff(const CodePlan& prev, const CodePlan& next) {
    if (next.version != prev.version + 1) {
        throw VersionError("plan diff requires consecutive versions, got " +
                           std::to_string(prev.version) + " -> " + std::to_string(next.version));
    }

    PlanDiff diff;
    auto before = index_steps(prev);
    auto after = index_steps(next);

    for (const auto& [module, step] : after) {
        if (before.find(module) == before.end()) {
            diff.added_modules.push_back(module);
        }
    }
    for (const auto& [module, step] : before) {
        if (after.find(module) == after.end()) {
            diff.removed_modules.push_back(module);
        }
    }

    for (const auto& [module, step] : after) {
        auto it = before.find(module);
        if (it == before.end()) {
            continue;
        }
        auto delta = contract_delta(*it->second, *step);
        if (!delta.empty()) {
            diff.changed_contracts[module] = delta;
        }
        if (it->second->rationale != step->rationale) {
            diff.changed_rationale.push_back(module);
        }
        auto prev_deps = prev.dep_graph.find(module);
        auto next_deps = next.dep_graph.find(module);
        std::vector<std::string> lhs =
            prev_deps == prev.dep_graph.end() ? std::vector<std::string>{} : prev_deps->second;
        std::vector<std::string> rhs =
            next_deps == next.dep_graph.end() ? std::vector<std::string>{} : next_deps->second;
        std::sort(lhs.begin(), lhs.end());
        std::sort(rhs.begin(), rhs.end());
        if (lhs != rhs) {
            diff.changed_deps.push_back(module);
        }
    }

    diff.packages_changed = to_json(prev.packages) != to_json(next.packages);
    diff.arrangement_changed =
        to_json(prev.arrangement_rules) != to_json(next.arrangement_rules);
    diff.ambiguities_changed = prev.ambiguities != next.ambiguities;

    std::vector<std::string> prev_order;
    std::vector<std::string> next_order;
    for (const auto& step : prev.steps) {
        if (after.count(step.module_id) > 0) {
            prev_order.push_back(step.module_id);
        }
    }
    for (const auto& step : next.steps) {
        if (before.count(step.module_id) > 0) {
            next_order.push_back(step.module_id);
        }
    }
    diff.steps_reordered = prev_order != next_order;
    return diff;
}

std::set<std::string> conflict_set(const PlanDiff& diff, const DepGraph& graph) {
    std::set<std::string> seeds;
    for (const auto& [module, contracts] : diff.changed_contracts) {
        seeds.insert(module);
    }
    for (const auto& module : diff.added_modules) {
        seeds.insert(module);
    }
    if (seeds.empty()) {
        return {};
    }

    // Dependents are reachable by walking the dependency edges backwards.
    std::map<std::string, std::vector<std::string>> dependents;
    for (const auto& [module, deps] : graph) {
        for (const auto& dep : deps) {
            dependents[dep].push_back(module);
        }
    }

    std::set<std::string> result = seeds;
    std::deque<std::string> frontier(seeds.begin(), seeds.end());
    while (!frontier.empty()) {
        std::string module = frontier.front();
        frontier.pop_front();
        for (const auto& dependent : dependents[module]) {
            if (result.insert(dependent).second) {
                frontier.push_back(dependent);
            }
        }
    }
    return result;
}

}  // namespace appforge::model
