#include "bpmine/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace bpmine {

namespace {

std::size_t state_index(const GeneratorSpec& spec, const std::string& name) {
    auto it = std::find(spec.states.begin(), spec.states.end(), name);
    if (it == spec.states.end())
        throw GeneratorSpecError("state '" + name + "' is not in the state list");
    return static_cast<std::size_t>(it - spec.states.begin());
}

// uniform in [0, 1) with 53 random bits
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

void validate(const GeneratorSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.states.size());
    if (n == 0)
        throw GeneratorSpecError("generator has no states");
    for (std::size_t i = 0; i + 1 < spec.states.size(); ++i)
        for (std::size_t j = i + 1; j < spec.states.size(); ++j)
            if (spec.states[i] == spec.states[j])
                throw GeneratorSpecError("duplicate state '" + spec.states[i] + "'");
    if (spec.transition.rows() != n || spec.transition.cols() != n)
        throw GeneratorSpecError("transition matrix does not match the state count");

    for (Eigen::Index r = 0; r < n; ++r) {
        double sum = 0.0;
        for (Eigen::Index c = 0; c < n; ++c) {
            const double p = spec.transition(r, c);
            if (!(p >= 0.0 && p <= 1.0))
                throw GeneratorSpecError("probability out of range in row of '" +
                                         spec.states[static_cast<std::size_t>(r)] + "'");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", sum);
            throw GeneratorSpecError("row of '" + spec.states[static_cast<std::size_t>(r)] +
                                     "' sums to " + buf);
        }
    }

    const auto end = static_cast<Eigen::Index>(state_index(spec, spec.end_state));
    if (spec.transition(end, end) != 1.0)
        throw GeneratorSpecError("end state '" + spec.end_state + "' is not absorbing");

    // reverse reachability from END over nonzero transitions
    std::vector<bool> reaches_end(spec.states.size(), false);
    reaches_end[static_cast<std::size_t>(end)] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (reaches_end[static_cast<std::size_t>(r)])
                continue;
            for (Eigen::Index c = 0; c < n; ++c) {
                if (spec.transition(r, c) > 0.0 && reaches_end[static_cast<std::size_t>(c)]) {
                    reaches_end[static_cast<std::size_t>(r)] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    for (std::size_t i = 0; i < spec.states.size(); ++i)
        if (!reaches_end[i])
            throw GeneratorSpecError("end state is unreachable from '" + spec.states[i] + "'");

    const std::size_t start = state_index(spec, spec.start);
    if (start == static_cast<std::size_t>(end))
        throw GeneratorSpecError("start state cannot be the end state");
    if (spec.n_cases == 0)
        throw GeneratorSpecError("n_cases must be positive");
}

EventLog generate(const GeneratorSpec& spec) {
    validate(spec);
    const std::size_t start = state_index(spec, spec.start);
    const std::size_t end = state_index(spec, spec.end_state);
    const auto n = static_cast<Eigen::Index>(spec.states.size());

    std::mt19937_64 rng(spec.seed);
    EventLog log;
    log.traces.reserve(spec.n_cases);

    std::vector<bool> in_vocab(spec.states.size(), false);
    for (std::uint64_t k = 0; k < spec.n_cases; ++k) {
        char id[24];
        std::snprintf(id, sizeof(id), "case_%06llu", static_cast<unsigned long long>(k + 1));
        Trace trace;
        trace.case_id = id;

        std::size_t state = start;
        while (state != end) {
            trace.tasks.push_back(spec.states[state]);
            if (!in_vocab[state]) {
                in_vocab[state] = true;
                log.vocabulary.push_back(spec.states[state]);
            }
            const double u = uniform01(rng);
            double cum = 0.0;
            std::size_t next = state;
            bool picked = false;
            for (Eigen::Index c = 0; c < n; ++c) {
                const double p = spec.transition(static_cast<Eigen::Index>(state), c);
                if (p <= 0.0)
                    continue;
                cum += p;
                next = static_cast<std::size_t>(c);
                if (u < cum) {
                    picked = true;
                    break;
                }
            }
            (void)picked; // rounding can leave u >= cum; keep the last nonzero entry
            state = next;
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

GeneratorSpec loan_preset(std::uint64_t n_cases, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.states = {"A_SUBMITTED", "A_PARTLYSUBMITTED", "A_PREACCEPTED", "A_ACCEPTED",
                   "A_FINALIZED", "A_APPROVED",        "A_REGISTERED",  "A_ACTIVATED",
                   "A_DECLINED",  "A_CANCELLED",       "<END>"};
    const auto n = static_cast<Eigen::Index>(spec.states.size());
    spec.transition = Eigen::MatrixXd::Zero(n, n);
    auto at = [&](const char* s) {
        return static_cast<Eigen::Index>(state_index(spec, s));
    };
    auto set = [&](const char* from, const char* to, double p) {
        spec.transition(at(from), at(to)) = p;
    };
    set("A_SUBMITTED", "A_PARTLYSUBMITTED", 1.0);
    set("A_PARTLYSUBMITTED", "A_DECLINED", 0.43);
    set("A_PARTLYSUBMITTED", "A_PREACCEPTED", 0.57);
    set("A_PREACCEPTED", "A_ACCEPTED", 0.66);
    set("A_PREACCEPTED", "A_DECLINED", 0.19);
    set("A_PREACCEPTED", "A_CANCELLED", 0.15);
    set("A_ACCEPTED", "A_FINALIZED", 0.92);
    set("A_ACCEPTED", "A_DECLINED", 0.04);
    set("A_ACCEPTED", "A_CANCELLED", 0.04);
    set("A_FINALIZED", "A_APPROVED", 0.55);
    set("A_FINALIZED", "A_DECLINED", 0.20);
    set("A_FINALIZED", "A_CANCELLED", 0.25);
    set("A_APPROVED", "A_REGISTERED", 1.0);
    set("A_REGISTERED", "A_ACTIVATED", 1.0);
    set("A_ACTIVATED", "<END>", 1.0);
    set("A_DECLINED", "<END>", 1.0);
    set("A_CANCELLED", "<END>", 1.0);
    set("<END>", "<END>", 1.0);
    spec.start = "A_SUBMITTED";
    spec.n_cases = n_cases;
    spec.seed = seed;
    return spec;
}

} // namespace bpmine
