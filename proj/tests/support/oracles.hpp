#pragma once

// Brute-force reference implementations used to check the graph operations.
// These deliberately share no code with the library: orders are found by
// filtering whole permutations and reachability by naive fixpoint.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "appforge/model/types.hpp"

namespace oracles {

using appforge::model::DepGraph;

inline std::vector<std::string> graph_nodes(const DepGraph& graph) {
    std::set<std::string> nodes;
    for (const auto& [module, deps] : graph) {
        nodes.insert(module);
        nodes.insert(deps.begin(), deps.end());
    }
    return {nodes.begin(), nodes.end()};
}

inline bool order_satisfies(const std::vector<std::string>& order, const DepGraph& graph) {
    std::map<std::string, size_t> position;
    for (size_t i = 0; i < order.size(); ++i) {
        position[order[i]] = i;
    }
    for (const auto& [module, deps] : graph) {
        for (const auto& dep : deps) {
            if (position.at(dep) > position.at(module)) {
                return false;
            }
        }
    }
    return true;
}

/// Every valid dependency-respecting order, by permutation filtering.
inline std::vector<std::vector<std::string>> all_valid_orders(const DepGraph& graph) {
    std::vector<std::string> nodes = graph_nodes(graph);
    std::sort(nodes.begin(), nodes.end());
    std::vector<std::vector<std::string>> valid;
    do {
        if (order_satisfies(nodes, graph)) {
            valid.push_back(nodes);
        }
    } while (std::next_permutation(nodes.begin(), nodes.end()));
    return valid;
}

/// The expected topo_order result: the lexicographically smallest valid
/// order (valid orders are produced in lexicographic permutation order,
/// so the first one is it).
inline std::vector<std::string> smallest_valid_order(const DepGraph& graph) {
    auto valid = all_valid_orders(graph);
    return valid.empty() ? std::vector<std::string>{} : valid.front();
}

/// Transitive dependents of `seeds`: fixpoint over the reversed edges.
inline std::set<std::string> reachable_dependents(const std::set<std::string>& seeds,
                                                  const DepGraph& graph) {
    std::set<std::string> closure = seeds;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [module, deps] : graph) {
            if (closure.count(module) > 0) {
                continue;
            }
            for (const auto& dep : deps) {
                if (closure.count(dep) > 0) {
                    closure.insert(module);
                    grew = true;
                    break;
                }
            }
        }
    }
    return closure;
}

/// Random DAG over up to `max_nodes` single-letter modules. Edges only run
/// from earlier to later positions of a shuffled node list, so the result
/// is acyclic by construction.
inline DepGraph random_dag(std::mt19937& rng, int max_nodes = 8) {
    std::uniform_int_distribution<int> node_count(1, max_nodes);
    int n = node_count(rng);
    std::vector<std::string> nodes;
    for (int i = 0; i < n; ++i) {
        nodes.push_back(std::string(1, static_cast<char>('a' + i)));
    }
    std::shuffle(nodes.begin(), nodes.end(), rng);

    DepGraph graph;
    for (const auto& node : nodes) {
        graph[node] = {};
    }
    std::uniform_int_distribution<int> coin(0, 99);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng) < 35) {
                graph[nodes[static_cast<size_t>(j)]].push_back(nodes[static_cast<size_t>(i)]);
            }
        }
    }
    return graph;
}

}  // namespace oracles
