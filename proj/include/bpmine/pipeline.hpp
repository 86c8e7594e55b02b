#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bpmine/bayesnet.hpp"
#include "bpmine/errors.hpp"
#include "bpmine/evaluate.hpp"
#include "bpmine/eventlog.hpp"
#include "bpmine/learning.hpp"
#include "bpmine/markov.hpp"

namespace bpmine {

/// Everything a full run needs; all randomness flows from seed. The default
/// exclusion group matches the loan-process outcome tasks and is skipped
/// automatically (with a manifest note) when the log lacks any member.
struct PipelineConfig {
    std::filesystem::path input;
    std::filesystem::path out_dir = "out";
    std::string prefix;
    ParseConfig parse;
    double train_fraction = 0.7;
    std::uint64_t seed = 42;
    double pseudocount = 1.0;
    std::vector<ExclusionGroup> exclusion_groups = {
        ExclusionGroup{{"A_DECLINED", "A_CANCELLED", "A_APPROVED"}}};
    std::vector<std::string> observe; // conditional report per entry
    bool use_virtual_ends = false;
};

struct PipelineResult {
    BayesianNetwork network;
    MarkovChain chain;
    SequenceComparison comparison;
    std::vector<ConditionalReport> conditionals;
    std::vector<std::string> artifacts; // file names inside out_dir
    std::vector<std::string> skipped_groups;
    std::uint64_t train_traces = 0;
    std::uint64_t test_traces = 0;
};

/// 64-bit FNV-1a over a canonical rendering of the config; the manifest
/// records it so reruns can be matched to their settings.
std::uint64_t config_hash(const PipelineConfig& config);

/// parse -> filter -> split -> graph -> break_cycles -> structure ->
/// learn -> corrections -> markov -> evaluate, writing every intermediate
/// artifact plus manifest.txt into out_dir. Errors gain the failing stage
/// name as a message prefix and keep their data/model kind.
PipelineResult run_pipeline(const PipelineConfig& config);

} // namespace bpmine
