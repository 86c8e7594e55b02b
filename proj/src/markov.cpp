#include "bpmine/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace bpmine {

MarkovChain::MarkovChain(std::vector<std::string> states, Eigen::MatrixXd transition,
                         bool virtual_ends)
    : states_(std::move(states)), transition_(std::move(transition)),
      virtual_ends_(virtual_ends) {
    const auto n = static_cast<Eigen::Index>(states_.size());
    if (n == 0)
        throw ShapeError("markov chain has no states");
    if (transition_.rows() != n || transition_.cols() != n) {
        std::ostringstream msg;
        msg << "transition matrix is " << transition_.rows() << "x" << transition_.cols()
            << ", expected " << n << "x" << n;
        throw ShapeError(msg.str());
    }
    for (std::size_t i = 0; i + 1 < states_.size(); ++i)
        for (std::size_t j = i + 1; j < states_.size(); ++j)
            if (states_[i] == states_[j])
                throw ShapeError("duplicate state '" + states_[i] + "'");

    row_defined_.assign(states_.size(), true);
    for (Eigen::Index r = 0; r < n; ++r) {
        double sum = 0.0;
        for (Eigen::Index c = 0; c < n; ++c) {
            const double p = transition_(r, c);
            if (!(p >= 0.0 && p <= 1.0))
                throw ShapeError("probability out of range in row for state '" + states_[r] +
                                 "'");
            sum += p;
        }
        if (sum == 0.0) {
            if (virtual_ends_)
                throw ShapeError("state '" + states_[static_cast<std::size_t>(r)] +
                                 "' has an all-zero row despite virtual ends");
            row_defined_[static_cast<std::size_t>(r)] = false;
        } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
            std::ostringstream msg;
            msg << "row for state '" << states_[static_cast<std::size_t>(r)] << "' sums to "
                << sum;
            throw ShapeError(msg.str());
        }
    }
}

std::size_t MarkovChain::index_of(const std::string& state) const {
    auto it = std::find(states_.begin(), states_.end(), state);
    if (it == states_.end())
        throw StateError("unknown state '" + state + "'");
    return static_cast<std::size_t>(it - states_.begin());
}

bool MarkovChain::has_state(const std::string& state) const {
    return std::find(states_.begin(), states_.end(), state) != states_.end();
}

double MarkovChain::probability(const std::string& source, const std::string& target) const {
    return transition_(static_cast<Eigen::Index>(index_of(source)),
                       static_cast<Eigen::Index>(index_of(target)));
}

MarkovChain build_markov_chain(const EventLog& log, bool use_virtual_ends) {
    if (log.traces.empty())
        throw TrainingError("cannot train a markov chain on an empty log");

    std::vector<std::string> states = log.vocabulary;
    if (use_virtual_ends) {
        states.insert(states.begin(), std::string(MarkovChain::kStart));
        states.push_back(std::string(MarkovChain::kEnd));
    }

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < states.size(); ++i)
        index.emplace(states[i], i);

    const auto n = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    for (const Trace& trace : log.traces) {
        if (use_virtual_ends && !trace.tasks.empty()) {
            counts(0, static_cast<Eigen::Index>(index.at(trace.tasks.front()))) += 1.0;
            counts(static_cast<Eigen::Index>(index.at(trace.tasks.back())), n - 1) += 1.0;
        }
        for (std::size_t k = 0; k + 1 < trace.tasks.size(); ++k) {
            const auto r = static_cast<Eigen::Index>(index.at(trace.tasks[k]));
            const auto c = static_cast<Eigen::Index>(index.at(trace.tasks[k + 1]));
            counts(r, c) += 1.0;
        }
    }

    Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const double total = counts.row(r).sum();
        if (total > 0.0)
            transition.row(r) = counts.row(r) / total;
    }
    if (use_virtual_ends)
        transition(n - 1, n - 1) = 1.0; // <END> absorbs

    return MarkovChain(std::move(states), std::move(transition), use_virtual_ends);
}

Eigen::RowVectorXd step(const MarkovChain& chain, const Eigen::RowVectorXd& state_vector) {
    const auto n = static_cast<Eigen::Index>(chain.states().size());
    if (state_vector.size() != n) {
        std::ostringstream msg;
        msg << "state vector has " << state_vector.size() << " entries, expected " << n;
        throw ShapeError(msg.str());
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double p = state_vector(i);
        if (!(p >= 0.0 && p <= 1.0))
            throw ShapeError("state vector entry out of range");
        if (p > 0.0 && !chain.row_defined(static_cast<std::size_t>(i)))
            throw ShapeError("state vector places mass on '" +
                             chain.states()[static_cast<std::size_t>(i)] +
                             "', whose outgoing row is undefined");
        sum += p;
    }
    if (std::abs(sum - 1.0) > MarkovChain::kRowSumTolerance) {
        std::ostringstream msg;
        msg << "state vector sums to " << sum << ", expected 1";
        throw ShapeError(msg.str());
    }
    return state_vector * chain.transition();
}

double chain_probability(const MarkovChain& chain, const std::vector<std::string>& sequence) {
    std::vector<std::string> walk;
    if (chain.has_virtual_ends()) {
        walk.reserve(sequence.size() + 2);
        walk.emplace_back(MarkovChain::kStart);
        walk.insert(walk.end(), sequence.begin(), sequence.end());
        walk.emplace_back(MarkovChain::kEnd);
        if (sequence.empty())
            throw ShapeError("sequence is empty");
    } else {
        walk = sequence;
        if (walk.size() < 2)
            throw ShapeError("sequence needs at least two tasks to contain a transition");
    }

    double p = 1.0;
    for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
        p *= chain.probability(walk[k], walk[k + 1]);
        if (p == 0.0)
            return 0.0;
    }
    return p;
}

namespace {

std::string format_probability(double p) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    return buf;
}

} // namespace

std::string to_csv(const MarkovChain& chain, char delimiter) {
    std::ostringstream out;
    out << "state";
    for (const std::string& s : chain.states())
        out << delimiter << s;
    out << '\n';
    const auto n = static_cast<Eigen::Index>(chain.states().size());
    for (Eigen::Index r = 0; r < n; ++r) {
        out << chain.states()[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < n; ++c)
            out << delimiter << format_probability(chain.transition()(r, c));
        out << '\n';
    }
    return out.str();
}

std::string to_dot(const MarkovChain& chain) {
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\')
                q += '\\';
            q += c;
        }
        q += '"';
        return q;
    };

    std::ostringstream out;
    out << "digraph markov {\n";
    for (const std::string& s : chain.states())
        out << "  " << quote(s) << ";\n";
    const auto n = static_cast<Eigen::Index>(chain.states().size());
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const double p = chain.transition()(r, c);
            if (p == 0.0)
                continue;
            char label[32];
            std::snprintf(label, sizeof(label), "%.4f", p);
            out << "  " << quote(chain.states()[static_cast<std::size_t>(r)]) << " -> "
                << quote(chain.states()[static_cast<std::size_t>(c)]) << " [label=\"" << label
                << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace bpmine
