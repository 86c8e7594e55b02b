#include "bpmine/learning.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace bpmine {

namespace {

std::string describe_row(const Cpt& cpt, std::size_t mask) {
    if (cpt.parents.empty()) return "(no parents)";
    std::string text;
    for (std::size_t b = 0; b < cpt.parents.size(); ++b) {
        if (b) text += ", ";
        text += cpt.parents[b];
        text += (mask >> b & 1) ? "=present" : "=absent";
    }
    return text;
}

} // namespace

BayesianNetwork mle_learn(const BayesianNetwork& structure, const PresenceMatrix& data,
                          const LearnConfig& config) {
    if (config.pseudocount < 0.0)
        throw LearningError("pseudocount must be non-negative");
    if (data.rows.rows() == 0)
        throw LearningError("training data is empty");

    std::unordered_map<std::string, Eigen::Index> column;
    for (std::size_t j = 0; j < data.variables.size(); ++j)
        column[data.variables[j]] = static_cast<Eigen::Index>(j);
    auto column_of = [&](const std::string& name) {
        auto it = column.find(name);
        if (it == column.end())
            throw LearningError("variable '" + name + "' is missing from the training data");
        return it->second;
    };

    const double c = config.pseudocount;
    BayesianNetwork learned = structure;
    for (const auto& name : structure.variables()) {
        const Cpt& cpt = structure.cpt(name);
        const Eigen::Index var_col = column_of(name);
        std::vector<Eigen::Index> parent_cols;
        parent_cols.reserve(cpt.parents.size());
        for (const auto& parent : cpt.parents) parent_cols.push_back(column_of(parent));

        std::vector<std::uint64_t> seen(cpt.rows.size(), 0);
        std::vector<std::uint64_t> present(cpt.rows.size(), 0);
        for (Eigen::Index r = 0; r < data.rows.rows(); ++r) {
            std::size_t mask = 0;
            for (std::size_t b = 0; b < parent_cols.size(); ++b)
                if (data.rows(r, parent_cols[b])) mask |= std::size_t{1} << b;
            ++seen[mask];
            if (data.rows(r, var_col)) ++present[mask];
        }
        for (std::size_t mask = 0; mask < cpt.rows.size(); ++mask) {
            const double denom = static_cast<double>(seen[mask]) + 2.0 * c;
            if (denom == 0.0)
                throw LearningError("division by zero for variable '" + name + "', row " +
                                    describe_row(cpt, mask) +
                                    "; use a positive pseudocount");
            const double p_present = (static_cast<double>(present[mask]) + c) / denom;
            const double p_absent =
                (static_cast<double>(seen[mask] - present[mask]) + c) / denom;
            learned.set_row(name, mask, ProbPair{p_present, p_absent});
        }
    }
    return learned;
}

BayesianNetwork apply_absent_propagation(const BayesianNetwork& net) {
    BayesianNetwork result = net;
    for (const auto& name : net.variables())
        if (!net.cpt(name).parents.empty())
            result.set_row(name, 0, ProbPair{0.0, 1.0}); // mask 0 = all parents absent
    return result;
}

BayesianNetwork apply_mutual_exclusion(const BayesianNetwork& net, const ExclusionGroup& group) {
    if (group.members.size() < 2)
        throw ModelError("exclusion group needs at least 2 members");
    std::set<std::string> distinct(group.members.begin(), group.members.end());
    if (distinct.size() != group.members.size())
        throw ModelError("exclusion group members must be distinct");
    for (const auto& member : group.members) net.index_of(member);

    BayesianNetwork result = net;
    for (std::size_t i = 1; i < group.members.size(); ++i) {
        const std::string& member = group.members[i];
        for (std::size_t j = 0; j < i; ++j)
            result.add_parent(member, group.members[j]);

        const Cpt& cpt = result.cpt(member);
        std::size_t earlier_bits = 0;
        for (std::size_t b = 0; b < cpt.parents.size(); ++b)
            if (std::find(group.members.begin(), group.members.begin() + i, cpt.parents[b]) !=
                group.members.begin() + i)
                earlier_bits |= std::size_t{1} << b;
        for (std::size_t mask = 0; mask < cpt.rows.size(); ++mask)
            if (mask & earlier_bits) result.set_row(member, mask, ProbPair{0.0, 1.0});
    }
    return result;
}

} // namespace bpmine
