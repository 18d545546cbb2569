#pragma once

#include <set>
#include <string>
#include <vector>

#include "appforge/model/types.hpp"

namespace appforge::model {

/// Dependency-respecting order over the graph's modules. Every module
/// appears after all of its dependencies; ties are broken by taking the
/// lexicographically smallest ready module first, which makes the result
/// the unique lexicographically smallest valid order.
/// Throws CycleError naming at least one member of a cycle.
std::vector<std::string> topo_order(const DepGraph& graph);

struct ValidationResult {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks the CodePlan invariants against the architecture elements:
/// acyclic dep graph, step order consistent with dependencies, every ADD
/// module planned exactly once, dep graph confined to planned modules,
/// version >= 1. Violations are returned, never thrown.
ValidationResult validate_plan(const CodePlan& plan, const std::vector<ArchElement>& add);

struct PlanDiff {
    std::vector<std::string> added_modules;
    std::vector<std::string> removed_modules;
    /// module id -> signatures added, removed, or altered in that step.
    std::map<std::string, std::vector<std::string>> changed_contracts;
    std::vector<std::string> changed_deps;
    std::vector<std::string> changed_rationale;
    bool packages_changed = false;
    bool arrangement_changed = false;
    bool ambiguities_changed = false;
    bool steps_reordered = false;

    bool empty() const;
    /// True when the only difference is step order.
    bool reorder_only() const;
};

/// Field-by-field difference between consecutive plan versions.
/// Throws VersionError unless next.version == prev.version + 1.
PlanDiff plan_diff(const CodePlan& prev, const CodePlan& next);

/// Modules whose contracts changed (including added modules) plus every
/// transitive dependent in `graph`. Reorder-only diffs yield the empty set.
std::set<std::string> conflict_set(const PlanDiff& diff, const DepGraph& graph);

}  // namespace appforge::model
