#include "bpmine/bayesnet.hpp"

#include <algorithm>
#include <cmath>

namespace bpmine {

namespace {

void check_row(const std::string& variable, std::size_t mask, const ProbPair& row) {
    if (!(row.present >= 0.0 && row.present <= 1.0 && row.absent >= 0.0 && row.absent <= 1.0))
        throw ModelError("CPT row " + std::to_string(mask) + " of '" + variable +
                         "' has entries outside [0,1]");
    if (std::fabs(row.present + row.absent - 1.0) > BayesianNetwork::kRowSumTolerance)
        throw ModelError("CPT row " + std::to_string(mask) + " of '" + variable +
                         "' does not sum to 1");
}

} // namespace

BayesianNetwork::BayesianNetwork(std::vector<std::string> variables,
                                 std::map<std::string, std::vector<std::string>> parents,
                                 std::map<std::string, std::vector<ProbPair>> cpts) {
    variables_ = std::move(variables);
    cpts_.resize(variables_.size());
    rebuild_index();
    if (index_.size() != variables_.size())
        throw ModelError("duplicate variable name in network");
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const auto& name = variables_[i];
        auto pit = parents.find(name);
        if (pit != parents.end()) cpts_[i].parents = pit->second;
        auto cit = cpts.find(name);
        if (cit != cpts.end()) {
            cpts_[i].rows = cit->second;
        } else {
            cpts_[i].rows.assign(std::size_t{1} << cpts_[i].parents.size(), ProbPair{});
        }
    }
    validate();
}

BayesianNetwork BayesianNetwork::uniform(
    std::vector<std::string> variables,
    const std::map<std::string, std::vector<std::string>>& parents) {
    return BayesianNetwork(std::move(variables), parents, {});
}

bool BayesianNetwork::has_variable(const std::string& name) const {
    return index_.count(name) != 0;
}

std::size_t BayesianNetwork::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw UnknownVariableError("variable '" + name + "' is not in the network");
    return it->second;
}

void BayesianNetwork::set_row(const std::string& variable, std::size_t row_mask, ProbPair row) {
    auto& cpt = cpts_[index_of(variable)];
    if (row_mask >= cpt.rows.size())
        throw ModelError("row mask " + std::to_string(row_mask) + " out of range for '" +
                         variable + "'");
    check_row(variable, row_mask, row);
    cpt.rows[row_mask] = row;
}

void BayesianNetwork::add_parent(const std::string& child, const std::string& parent) {
    const std::size_t child_idx = index_of(child);
    index_of(parent); // must exist
    if (child == parent) throw StructureError("'" + child + "' cannot be its own parent");
    auto& cpt = cpts_[child_idx];
    if (std::find(cpt.parents.begin(), cpt.parents.end(), parent) != cpt.parents.end())
        return;

    const std::size_t old_count = cpt.parents.size();
    cpt.parents.push_back(parent);
    std::vector<ProbPair> rows(std::size_t{1} << (old_count + 1));
    const std::size_t low_mask = (std::size_t{1} << old_count) - 1;
    for (std::size_t mask = 0; mask < rows.size(); ++mask)
        rows[mask] = cpt.rows[mask & low_mask];
    cpt.rows = std::move(rows);
    try {
        validate();
    } catch (const ModelError&) {
        throw StructureError("adding edge " + parent + " -> " + child +
                             " would close a directed cycle");
    }
}

void BayesianNetwork::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < variables_.size(); ++i) index_[variables_[i]] = i;
}

void BayesianNetwork::validate() {
    parent_indices_.assign(variables_.size(), {});
    std::vector<std::size_t> in_degree(variables_.size(), 0);
    std::vector<std::vector<std::size_t>> children(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const auto& cpt = cpts_[i];
        if (cpt.rows.size() != (std::size_t{1} << cpt.parents.size()))
            throw ModelError("variable '" + variables_[i] + "' has " +
                             std::to_string(cpt.rows.size()) + " CPT rows, expected 2^" +
                             std::to_string(cpt.parents.size()));
        for (std::size_t mask = 0; mask < cpt.rows.size(); ++mask)
            check_row(variables_[i], mask, cpt.rows[mask]);
        for (const auto& parent : cpt.parents) {
            auto it = index_.find(parent);
            if (it == index_.end())
                throw UnknownVariableError("parent '" + parent + "' of '" + variables_[i] +
                                           "' is not in the network");
            if (it->second == i)
                throw ModelError("variable '" + variables_[i] + "' is its own parent");
            parent_indices_[i].push_back(it->second);
            children[it->second].push_back(i);
            ++in_degree[i];
        }
    }
    // Kahn's algorithm: all nodes must drain for the relation to be acyclic.
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (in_degree[i] == 0) stack.push_back(i);
    std::size_t drained = 0;
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        ++drained;
        for (std::size_t child : children[node])
            if (--in_degree[child] == 0) stack.push_back(child);
    }
    if (drained != variables_.size())
        throw ModelError("parent relation contains a directed cycle");
}

namespace {

double joint_of_states(const BayesianNetwork& net, std::span<const State> states) {
    double product = 1.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& cpt = net.cpt(i);
        const auto& parent_idx = net.parent_indices(i);
        std::size_t mask = 0;
        for (std::size_t b = 0; b < parent_idx.size(); ++b)
            if (states[parent_idx[b]] == State::present) mask |= std::size_t{1} << b;
        const ProbPair& row = cpt.rows[mask];
        product *= (states[i] == State::present) ? row.present : row.absent;
        if (product == 0.0) return 0.0;
    }
    return product;
}

} // namespace

double joint_probability(const BayesianNetwork& net, std::span<const State> states) {
    if (states.size() != net.size())
        throw AssignmentError("assignment covers " + std::to_string(states.size()) +
                              " variables, network has " + std::to_string(net.size()));
    return joint_of_states(net, states);
}

double joint_probability(const BayesianNetwork& net,
                         const std::map<std::string, State>& assignment) {
    if (assignment.size() != net.size())
        throw AssignmentError("assignment covers " + std::to_string(assignment.size()) +
                              " variables, network has " + std::to_string(net.size()));
    std::vector<State> states(net.size());
    for (const auto& [name, state] : assignment) {
        auto idx = net.has_variable(name) ? net.index_of(name) : net.size();
        if (idx == net.size())
            throw AssignmentError("assignment names unknown variable '" + name + "'");
        states[idx] = state;
    }
    return joint_of_states(net, states);
}

Posterior infer(const BayesianNetwork& net, const std::string& query, const Evidence& evidence,
                const InferOptions& options) {
    if (net.size() > options.max_enumeration_variables)
        throw NetworkSizeError("network has " + std::to_string(net.size()) +
                               " variables, enumeration limit is " +
                               std::to_string(options.max_enumeration_variables));
    const std::size_t query_idx = net.index_of(query);
    if (evidence.count(query))
        throw QueryError("query variable '" + query + "' is part of the evidence");

    std::vector<State> states(net.size(), State::absent);
    std::vector<bool> fixed(net.size(), false);
    fixed[query_idx] = true;
    for (const auto& [name, state] : evidence) {
        const std::size_t idx = net.index_of(name);
        states[idx] = state;
        fixed[idx] = true;
    }
    std::vector<std::size_t> unobserved;
    for (std::size_t i = 0; i < net.size(); ++i)
        if (!fixed[i]) unobserved.push_back(i);

    double mass[2] = {0.0, 0.0};
    const std::size_t completions = std::size_t{1} << unobserved.size();
    for (State qs : {State::absent, State::present}) {
        states[query_idx] = qs;
        double sum = 0.0;
        for (std::size_t mask = 0; mask < completions; ++mask) {
            for (std::size_t b = 0; b < unobserved.size(); ++b)
                states[unobserved[b]] =
                    (mask >> b & 1) ? State::present : State::absent;
            sum += joint_of_states(net, states);
        }
        mass[static_cast<std::size_t>(qs)] = sum;
    }

    const double total = mass[0] + mass[1];
    if (total == 0.0)
        throw ZeroEvidenceError("evidence has probability 0; the posterior of '" + query +
                                "' is undefined");
    Posterior posterior;
    posterior.variable = query;
    posterior.mass_absent = mass[0];
    posterior.mass_present = mass[1];
    posterior.p_absent = mass[0] / total;
    posterior.p_present = mass[1] / total;
    return posterior;
}

std::map<std::string, Posterior> marginals(const BayesianNetwork& net,
                                           const InferOptions& options) {
    std::map<std::string, Posterior> result;
    for (const auto& name : net.variables()) result[name] = infer(net, name, {}, options);
    return result;
}

double sequence_probability(const BayesianNetwork& net,
                            const std::set<std::string>& present_set) {
    std::vector<State> states(net.size(), State::absent);
    for (const auto& name : present_set) {
        if (!net.has_variable(name))
            throw AssignmentError("present set names unknown variable '" + name + "'");
        states[net.index_of(name)] = State::present;
    }
    return joint_of_states(net, states);
}

} // namespace bpmine
