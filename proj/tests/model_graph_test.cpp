#include <doctest.h>

#include "appforge/model/graph.hpp"
#include "support/oracles.hpp"

using namespace appforge;
using namespace appforge::model;

namespace {

MethodContract simple_contract(const std::string& signature) {
    MethodContract c;
    c.signature = signature;
    c.returns = "void";
    return c;
}

CodePlan tiny_plan(const std::vector<std::string>& modules, const DepGraph& graph,
                   int version = 1) {
    CodePlan plan;
    plan.version = version;
    plan.dep_graph = graph;
    plan.packages.name = "app";
    for (const auto& module : modules) {
        PlanStep step;
        step.module_id = module;
        step.rationale = "build " + module;
        step.contracts.push_back(simple_contract(module + ".run()"));
        plan.packages.modules.push_back(module);
        plan.steps.push_back(std::move(step));
    }
    return plan;
}

std::vector<ArchElement> add_for(const std::vector<std::string>& modules) {
    std::vector<ArchElement> elements;
    for (const auto& module : modules) {
        ArchElement e;
        e.module_id = module;
        e.responsibilities = module + " responsibilities";
        elements.push_back(std::move(e));
    }
    return elements;
}

}  // namespace

TEST_CASE("topo_order handles a single node") {
    DepGraph graph{{"A", {}}};
    CHECK(topo_order(graph) == std::vector<std::string>{"A"});
}

TEST_CASE("topo_order diamond resolves with lexicographic tie-break") {
    // B and C depend on A; D depends on B and C.
    DepGraph graph{{"A", {}}, {"B", {"A"}}, {"C", {"A"}}, {"D", {"B", "C"}}};
    std::vector<std::string> expected{"A", "B", "C", "D"};
    CHECK(topo_order(graph) == expected);
    CHECK(oracles::smallest_valid_order(graph) == expected);
}

TEST_CASE("topo_order rejects a two-cycle naming a member") {
    DepGraph graph{{"A", {"B"}}, {"B", {"A"}}};
    CHECK_THROWS_AS(topo_order(graph), CycleError);
    try {
        topo_order(graph);
    } catch (const CycleError& e) {
        std::string message = e.what();
        CHECK((message.find("A") != std::string::npos ||
               message.find("B") != std::string::npos));
    }
}

TEST_CASE("topo_order matches the enumeration oracle on random DAGs") {
    std::mt19937 rng(20250809);
    for (int i = 0; i < 200; ++i) {
        DepGraph graph = oracles::random_dag(rng);
        auto order = topo_order(graph);
        CHECK(oracles::order_satisfies(order, graph));
        CHECK(order == oracles::smallest_valid_order(graph));
    }
}

TEST_CASE("validate_plan flags cycles") {
    auto plan = tiny_plan({"A", "B"}, {{"A", {"B"}}, {"B", {"A"}}});
    auto result = validate_plan(plan, add_for({"A", "B"}));
    REQUIRE_FALSE(result.ok());
    bool cycle_found = false;
    for (const auto& v : result.violations) {
        if (v.rfind("cycle", 0) == 0) {
            cycle_found = true;
        }
    }
    CHECK(cycle_found);
}

TEST_CASE("validate_plan flags unplanned modules") {
    auto plan = tiny_plan({"A"}, {{"A", {}}});
    auto result = validate_plan(plan, add_for({"A", "B"}));
    REQUIRE_FALSE(result.ok());
    CHECK(result.violations == std::vector<std::string>{"unplanned module: B"});
}

TEST_CASE("validate_plan flags step order violating dependencies") {
    auto plan = tiny_plan({"view", "model"}, {{"view", {"model"}}, {"model", {}}});
    auto result = validate_plan(plan, add_for({"model", "view"}));
    REQUIRE_FALSE(result.ok());
    CHECK(result.violations.front().rfind("step order violates dependency", 0) == 0);
}

TEST_CASE("validate_plan accepts a layered acyclic plan") {
    auto plan = tiny_plan({"model", "logic", "view"},
                          {{"model", {}}, {"logic", {"model"}}, {"view", {"logic"}}});
    auto result = validate_plan(plan, add_for({"model", "logic", "view"}));
    CHECK(result.ok());
}

TEST_CASE("validate_plan rejects version below one") {
    auto plan = tiny_plan({"A"}, {{"A", {}}}, 0);
    auto result = validate_plan(plan, add_for({"A"}));
    CHECK_FALSE(result.ok());
}

TEST_CASE("plan_diff requires consecutive versions") {
    auto v1 = tiny_plan({"A"}, {{"A", {}}}, 1);
    auto v3 = tiny_plan({"A"}, {{"A", {}}}, 3);
    CHECK_THROWS_AS(plan_diff(v1, v3), VersionError);
}

TEST_CASE("plan_diff of identical plans is empty") {
    auto v1 = tiny_plan({"A", "B"}, {{"A", {}}, {"B", {"A"}}}, 1);
    auto v2 = v1;
    v2.version = 2;
    CHECK(plan_diff(v1, v2).empty());
}

TEST_CASE("plan_diff isolates a single contract change") {
    auto v1 = tiny_plan({"model", "logic"}, {{"model", {}}, {"logic", {"model"}}}, 1);
    auto v2 = v1;
    v2.version = 2;
    v2.steps[0].contracts[0].returns = "int";
    auto diff = plan_diff(v1, v2);
    CHECK_FALSE(diff.empty());
    REQUIRE(diff.changed_contracts.size() == 1);
    REQUIRE(diff.changed_contracts.count("model") == 1);
    CHECK(diff.changed_contracts.at("model") ==
          std::vector<std::string>{"model.run()"});
    CHECK(diff.changed_deps.empty());
    CHECK_FALSE(diff.steps_reordered);
}

TEST_CASE("plan_diff marks pure step permutations as reorder-only") {
    auto v1 = tiny_plan({"a", "b"}, {{"a", {}}, {"b", {}}}, 1);
    auto v2 = v1;
    v2.version = 2;
    std::swap(v2.steps[0], v2.steps[1]);
    auto diff = plan_diff(v1, v2);
    CHECK(diff.reorder_only());
    CHECK(conflict_set(diff, v2.dep_graph).empty());
}

TEST_CASE("conflict_set of an empty diff reuses everything") {
    PlanDiff diff;
    DepGraph graph{{"model", {}}, {"logic", {"model"}}};
    CHECK(conflict_set(diff, graph).empty());
}

TEST_CASE("conflict_set propagates to transitive dependents") {
    // logic depends on model, view depends on logic.
    DepGraph graph{{"model", {}}, {"logic", {"model"}}, {"view", {"logic"}}};
    PlanDiff diff;
    diff.changed_contracts["model"] = {"model.run()"};
    auto result = conflict_set(diff, graph);
    CHECK(result == std::set<std::string>{"model", "logic", "view"});
    CHECK(result == oracles::reachable_dependents({"model"}, graph));
}

TEST_CASE("conflict_set of a leaf change stays at the leaf") {
    DepGraph graph{{"model", {}}, {"logic", {"model"}}, {"view", {"logic"}}};
    PlanDiff diff;
    diff.changed_contracts["view"] = {"view.run()"};
    auto result = conflict_set(diff, graph);
    CHECK(result == std::set<std::string>{"view"});
    CHECK(result == oracles::reachable_dependents({"view"}, graph));
}

TEST_CASE("conflict_set matches the reachability oracle on random DAGs") {
    std::mt19937 rng(424242);
    for (int i = 0; i < 200; ++i) {
        DepGraph graph = oracles::random_dag(rng);
        auto nodes = oracles::graph_nodes(graph);
        std::uniform_int_distribution<size_t> pick(0, nodes.size() - 1);
        std::set<std::string> seeds{nodes[pick(rng)]};
        if (nodes.size() > 2 && pick(rng) % 2 == 0) {
            seeds.insert(nodes[pick(rng)]);
        }
        PlanDiff diff;
        for (const auto& seed : seeds) {
            diff.changed_contracts[seed] = {seed + ".run()"};
        }
        CHECK(conflict_set(diff, graph) == oracles::reachable_dependents(seeds, graph));
    }
}

TEST_CASE("validate_plan agrees with a direct invariant check on random plans") {
    std::mt19937 rng(777);
    for (int i = 0; i < 100; ++i) {
        DepGraph graph = oracles::random_dag(rng, 6);
        auto nodes = oracles::graph_nodes(graph);
        auto order = topo_order(graph);
        // Shuffle some plans out of topological order on purpose.
        std::vector<std::string> step_order = order;
        bool shuffled = rng() % 2 == 0;
        if (shuffled) {
            std::shuffle(step_order.begin(), step_order.end(), rng);
        }
        auto plan = tiny_plan(step_order, graph);
        auto result = validate_plan(plan, add_for(nodes));
        bool expect_ok = oracles::order_satisfies(step_order, graph);
        CHECK(result.ok() == expect_ok);
    }
}
