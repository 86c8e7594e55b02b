#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bpmine/errors.hpp"
#include "bpmine/eventlog.hpp"

namespace bpmine {

/// First-order chain over task states with a row-stochastic transition
/// matrix. With virtual ends enabled, <START> precedes every trace and
/// <END> absorbs it, so every real state's row is fully defined; without
/// them, states never seen with a successor keep an all-zero row that is
/// flagged undefined rather than silently renormalized.
class MarkovChain {
public:
    static constexpr std::string_view kStart = "<START>";
    static constexpr std::string_view kEnd = "<END>";
    static constexpr double kRowSumTolerance = 1e-9;

    /// Validates shape, entry range and row sums (undefined all-zero rows
    /// are only legal without virtual ends).
    MarkovChain(std::vector<std::string> states, Eigen::MatrixXd transition, bool virtual_ends);

    const std::vector<std::string>& states() const { return states_; }
    const Eigen::MatrixXd& transition() const { return transition_; }
    bool has_virtual_ends() const { return virtual_ends_; }
    std::size_t index_of(const std::string& state) const; // StateError
    bool has_state(const std::string& state) const;
    bool row_defined(std::size_t index) const { return row_defined_[index]; }
    double probability(const std::string& source, const std::string& target) const;

private:
    std::vector<std::string> states_;
    Eigen::MatrixXd transition_;
    std::vector<bool> row_defined_;
    bool virtual_ends_ = false;
};

/// Estimate transition probabilities by counting adjacent pairs and
/// normalizing each source row. Throws TrainingError on an empty log.
MarkovChain build_markov_chain(const EventLog& log, bool use_virtual_ends = false);

/// One evolution step: returns state_vector * transition. The input must
/// match the state count and sum to 1 within 1e-9, and may not place mass
/// on an undefined row.
Eigen::RowVectorXd step(const MarkovChain& chain, const Eigen::RowVectorXd& state_vector);

/// Product of transition probabilities over consecutive pairs; with
/// virtual ends the sequence is wrapped in <START> ... <END>. Throws
/// StateError for unknown states, ShapeError for sequences too short to
/// contain a transition.
double chain_probability(const MarkovChain& chain, const std::vector<std::string>& sequence);

/// Matrix export: header row of state names, then one delimiter-separated
/// row per source state prefixed with its name.
std::string to_csv(const MarkovChain& chain, char delimiter = ',');

/// DOT export with probability-labeled edges (zero entries omitted).
std::string to_dot(const MarkovChain& chain);

} // namespace bpmine
