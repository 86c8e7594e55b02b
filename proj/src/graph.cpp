#include "bpmine/graph.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace bpmine {

TransitionGraph build_transition_graph(const EventLog& log) {
    TransitionGraph graph;
    graph.nodes = log.vocabulary;
    for (const auto& trace : log.traces)
        for (std::size_t i = 0; i + 1 < trace.tasks.size(); ++i)
            ++graph.edge_counts[{trace.tasks[i], trace.tasks[i + 1]}];
    return graph;
}

namespace {

using EdgeKey = std::pair<std::size_t, std::size_t>; // node-order indices

// Does `from` reach `to` through the current edge set?
bool reaches(const std::map<EdgeKey, std::uint64_t>& edges, std::size_t node_count,
             std::size_t from, std::size_t to) {
    std::vector<bool> visited(node_count, false);
    std::vector<std::size_t> stack{from};
    visited[from] = true;
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        if (node == to) return true;
        for (auto it = edges.lower_bound({node, 0});
             it != edges.end() && it->first.first == node; ++it) {
            const std::size_t next = it->first.second;
            if (!visited[next]) {
                visited[next] = true;
                stack.push_back(next);
            }
        }
    }
    return false;
}

} // namespace

DagStructure break_cycles(const TransitionGraph& graph, std::vector<RemovedEdge>* removed) {
    std::unordered_map<std::string, std::size_t> order;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) order[graph.nodes[i]] = i;

    auto record = [&](EdgeKey key, std::uint64_t count) {
        if (removed)
            removed->push_back({graph.nodes[key.first], graph.nodes[key.second], count});
    };

    std::map<EdgeKey, std::uint64_t> edges;
    for (const auto& [key, count] : graph.edge_counts) {
        const std::size_t u = order.at(key.first);
        const std::size_t v = order.at(key.second);
        if (u == v) {
            record({u, v}, count);
            continue; // self-loop
        }
        edges[{u, v}] = count;
    }

    // 2-cycles: keep the heavier direction, ties drop the later source.
    for (auto it = edges.begin(); it != edges.end();) {
        const auto [u, v] = it->first;
        auto back = edges.find({v, u});
        if (u < v && back != edges.end()) {
            EdgeKey drop;
            if (it->second < back->second) drop = {u, v};
            else if (back->second < it->second) drop = {v, u};
            else drop = {std::max(u, v), std::min(u, v)};
            record(drop, edges.at(drop));
            if (drop == it->first) {
                it = edges.erase(it);
                continue;
            }
            edges.erase(back);
        }
        ++it;
    }

    // Remaining cycles: repeatedly drop the weakest edge on any cycle. An
    // edge (u,v) lies on a cycle iff v still reaches u.
    for (;;) {
        bool found = false;
        EdgeKey weakest{};
        std::uint64_t weakest_count = 0;
        for (const auto& [key, count] : edges) {
            if (!reaches(edges, graph.nodes.size(), key.second, key.first)) continue;
            if (!found || count < weakest_count ||
                (count == weakest_count && key < weakest)) {
                found = true;
                weakest = key;
                weakest_count = count;
            }
        }
        if (!found) break;
        record(weakest, weakest_count);
        edges.erase(weakest);
    }

    DagStructure dag;
    dag.nodes = graph.nodes;
    for (const auto& node : graph.nodes) dag.parents[node];
    for (const auto& [key, count] : edges) {
        (void)count;
        dag.parents[graph.nodes[key.second]].push_back(graph.nodes[key.first]);
    }
    // edges is keyed (source, target), so parent lists need re-sorting by
    // node order to be reproducible.
    for (auto& [node, parents] : dag.parents)
        std::sort(parents.begin(), parents.end(),
                  [&](const std::string& a, const std::string& b) {
                      return order.at(a) < order.at(b);
                  });
    return dag;
}

BayesianNetwork to_structure(const DagStructure& dag) {
    return BayesianNetwork::uniform(dag.nodes, dag.parents);
}

namespace {

std::string quote(const std::string& name) {
    std::string quoted = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\') quoted += '\\';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

} // namespace

std::string to_dot(const TransitionGraph& graph) {
    std::ostringstream out;
    out << "digraph transitions {\n";
    for (const auto& node : graph.nodes) out << "  " << quote(node) << ";\n";
    for (const auto& [key, count] : graph.edge_counts)
        out << "  " << quote(key.first) << " -> " << quote(key.second) << " [label=\"" << count
            << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string to_dot(const DagStructure& dag) {
    std::ostringstream out;
    out << "digraph structure {\n";
    for (const auto& node : dag.nodes) out << "  " << quote(node) << ";\n";
    for (const auto& node : dag.nodes) {
        auto it = dag.parents.find(node);
        if (it == dag.parents.end()) continue;
        for (const auto& parent : it->second)
            out << "  " << quote(parent) << " -> " << quote(node) << ";\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace bpmine
