#pragma once

#include <string>
#include <vector>

#include "bpmine/bayesnet.hpp"
#include "bpmine/eventlog.hpp"

namespace bpmine {

/// Controls for CPT estimation. pseudocount is the bias added to every
/// count cell; with 0 an unseen parent assignment is a hard error.
/// max_iterations and loglik_threshold are accepted for config
/// compatibility but unused: fully observed data needs no iteration.
struct LearnConfig {
    double pseudocount = 1.0;
    unsigned max_iterations = 10;
    double loglik_threshold = 0.05;
};

/// Variables that cannot co-occur in one case; order decides the direction
/// of the enforcing edges.
struct ExclusionGroup {
    std::vector<std::string> members;
};

/// Maximum-likelihood CPTs with symmetric smoothing: for variable v and
/// parent assignment u,
///   p_present = (count(v=present, u) + c) / (count(u) + 2c).
/// Parent assignments never seen in the data come out uniform when c > 0.
/// Throws LearningError when c == 0 leaves a division by zero, when a
/// structure variable is missing from the data, or when the data is empty.
BayesianNetwork mle_learn(const BayesianNetwork& structure, const PresenceMatrix& data,
                          const LearnConfig& config = {});

/// Force every CPT row whose parents are all absent to (0, 1): a task
/// cannot occur when none of its predecessors did. Roots are untouched.
BayesianNetwork apply_absent_propagation(const BayesianNetwork& net);

/// Make the group's members mutually exclusive: each member gains every
/// earlier member as a parent and its CPT rows are zeroed wherever an
/// earlier member is present. Throws StructureError when an added edge
/// would close a cycle, UnknownVariableError for missing members.
BayesianNetwork apply_mutual_exclusion(const BayesianNetwork& net, const ExclusionGroup& group);

} // namespace bpmine
