#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bpmine/errors.hpp"

namespace bpmine {

enum class State : std::uint8_t { absent = 0, present = 1 };

/// One CPT row: the distribution of a binary variable for a fixed parent
/// assignment. Stored as an explicit pair so persisted values survive
/// round-trips bit for bit.
struct ProbPair {
    double present = 0.5;
    double absent = 0.5;

    bool operator==(const ProbPair&) const = default;
};

/// Conditional probability table over the full set of parent assignments.
/// Row index is a bitmask: bit i set means parents[i] = present, so row 0
/// is the all-absent assignment and rows run in mask-ascending order.
struct Cpt {
    std::vector<std::string> parents;
    std::vector<ProbPair> rows; // size() == 1 << parents.size()

    bool operator==(const Cpt&) const = default;
};

/// Observed variables fixed during inference.
using Evidence = std::map<std::string, State>;

/// Normalized answer to a single-variable query. mass_present/mass_absent
/// are the unnormalized enumeration sums the normalizer was derived from.
struct Posterior {
    std::string variable;
    double p_present = 0.0;
    double p_absent = 0.0;
    double mass_present = 0.0;
    double mass_absent = 0.0;
};

/// Directed acyclic network of binary task variables. Construction and
/// every mutation validate the invariants: the parent relation is acyclic,
/// each CPT holds exactly 2^|parents| rows, and each row sums to 1 within
/// 1e-9 with both entries in [0,1].
class BayesianNetwork {
public:
    static constexpr double kRowSumTolerance = 1e-9;

    BayesianNetwork() = default;

    /// Full construction from explicit tables; cpts maps variable name to
    /// its mask-ordered rows. Validates all invariants.
    BayesianNetwork(std::vector<std::string> variables,
                    std::map<std::string, std::vector<std::string>> parents,
                    std::map<std::string, std::vector<ProbPair>> cpts);

    /// Structure-only construction: every CPT row starts uniform (0.5/0.5).
    static BayesianNetwork uniform(std::vector<std::string> variables,
                                   const std::map<std::string, std::vector<std::string>>& parents);

    const std::vector<std::string>& variables() const { return variables_; }
    std::size_t size() const { return variables_.size(); }
    bool empty() const { return variables_.empty(); }

    bool has_variable(const std::string& name) const;
    std::size_t index_of(const std::string& name) const; // UnknownVariableError
    const Cpt& cpt(const std::string& name) const { return cpts_[index_of(name)]; }
    const Cpt& cpt(std::size_t index) const { return cpts_[index]; }
    const std::vector<std::string>& parents(const std::string& name) const {
        return cpts_[index_of(name)].parents;
    }
    /// Parent positions in variables() order, aligned with cpt(i).parents.
    const std::vector<std::size_t>& parent_indices(std::size_t index) const {
        return parent_indices_[index];
    }

    /// Replace one CPT row; the row must stay normalized.
    void set_row(const std::string& variable, std::size_t row_mask, ProbPair row);

    /// Append a parent to child's parent list, duplicating existing rows
    /// across the new parent's states. No-op when the edge already exists.
    /// Throws StructureError if the edge would close a directed cycle.
    void add_parent(const std::string& child, const std::string& parent);

    bool operator==(const BayesianNetwork& other) const {
        return variables_ == other.variables_ && cpts_ == other.cpts_;
    }

private:
    void rebuild_index();
    void validate(); // also refreshes parent_indices_

    std::vector<std::string> variables_;
    std::vector<Cpt> cpts_;
    std::vector<std::vector<std::size_t>> parent_indices_;
    std::map<std::string, std::size_t> index_;
};

struct InferOptions {
    /// Enumeration cost is 2^n; networks larger than this are rejected
    /// with NetworkSizeError instead of silently burning time.
    std::size_t max_enumeration_variables = 25;
};

/// Probability of one complete assignment: the product of each variable's
/// CPT entry under its parents. The assignment must cover every variable
/// exactly once (AssignmentError otherwise).
double joint_probability(const BayesianNetwork& net,
                         const std::map<std::string, State>& assignment);

/// Fast path: states aligned with net.variables() order.
double joint_probability(const BayesianNetwork& net, std::span<const State> states);

/// Exact posterior of query given evidence, by full enumeration of the
/// unobserved variables. Throws QueryError if query is in the evidence,
/// UnknownVariableError for names outside the network, ZeroEvidenceError
/// when the evidence has probability zero (the normalizer is undefined),
/// and NetworkSizeError per InferOptions.
Posterior infer(const BayesianNetwork& net, const std::string& query, const Evidence& evidence,
                const InferOptions& options = {});

/// Posterior of every variable with empty evidence.
std::map<std::string, Posterior> marginals(const BayesianNetwork& net,
                                           const InferOptions& options = {});

/// Probability of the complete assignment where exactly present_set is
/// present and every other variable is absent. A trace's task set fixes
/// such an assignment; order within the trace is not modeled.
double sequence_probability(const BayesianNetwork& net, const std::set<std::string>& present_set);

} // namespace bpmine
