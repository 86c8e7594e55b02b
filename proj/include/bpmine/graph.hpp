#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bpmine/bayesnet.hpp"
#include "bpmine/eventlog.hpp"

namespace bpmine {

/// Weighted direct-follows graph: edge (u,v) counts how often v immediately
/// follows u within a trace. Zero-count edges are absent.
struct TransitionGraph {
    std::vector<std::string> nodes;
    std::map<std::pair<std::string, std::string>, std::uint64_t> edge_counts;

    bool operator==(const TransitionGraph&) const = default;
};

/// Acyclic reduction of a transition graph; parents are ordered by node
/// position for reproducibility.
struct DagStructure {
    std::vector<std::string> nodes;
    std::map<std::string, std::vector<std::string>> parents;

    bool operator==(const DagStructure&) const = default;
};

/// Count adjacent task pairs over all traces; nodes follow the vocabulary.
TransitionGraph build_transition_graph(const EventLog& log);

/// An edge removed while reducing the graph to a DAG.
struct RemovedEdge {
    std::string source;
    std::string target;
    std::uint64_t count = 0;
};

/// Reduce to a DAG by keeping the most frequent transitions:
///   1. self-loops are dropped;
///   2. in each 2-cycle the lower-count edge is dropped (tie: the edge
///      whose source is later in node order);
///   3. while a directed cycle remains, the minimum-count edge lying on a
///      cycle is dropped (ties by node-order position of source, target).
/// When removed is non-null it receives the dropped edges in drop order.
DagStructure break_cycles(const TransitionGraph& graph,
                          std::vector<RemovedEdge>* removed = nullptr);

/// Network skeleton from a DAG: binary variables, parents as given and all
/// CPT rows uniform.
BayesianNetwork to_structure(const DagStructure& dag);

/// DOT renderings; transition edges are labeled with their counts.
std::string to_dot(const TransitionGraph& graph);
std::string to_dot(const DagStructure& dag);

} // namespace bpmine
