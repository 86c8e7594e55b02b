#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpmine/errors.hpp"
#include "bpmine/eventlog.hpp"

namespace bpmine {

/// Ground-truth chain for sampling synthetic logs. The state list must
/// contain end_state; its transition row is absorbing and walks stop on
/// reaching it (the end marker is never emitted as a task).
struct GeneratorSpec {
    std::vector<std::string> states;
    Eigen::MatrixXd transition;
    std::string start;
    std::string end_state = "<END>";
    std::uint64_t n_cases = 0;
    std::uint64_t seed = 0;
};

/// Throws GeneratorSpecError unless: transition is square and matches the
/// state count, every row is stochastic within 1e-9, the end state's row is
/// absorbing, the end state is reachable from every state, start is a
/// non-end state and n_cases > 0.
void validate(const GeneratorSpec& spec);

/// Sample n_cases traces by walking the chain from start until the end
/// state. One pseudo-random stream per call; identical spec and seed give
/// identical logs. Case ids are case_000001 upward.
EventLog generate(const GeneratorSpec& spec);

/// Built-in loan-application-style chain (synthetic probabilities, shaped
/// like a submit/check/offer/approve-or-decline flow) for demos and tests.
GeneratorSpec loan_preset(std::uint64_t n_cases, std::uint64_t seed);

} // namespace bpmine
