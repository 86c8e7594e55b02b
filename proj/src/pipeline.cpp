#include "bpmine/pipeline.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "bpmine/graph.hpp"
#include "bpmine/io.hpp"

namespace bpmine {

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.what());
    }
}

void hash_bytes(std::uint64_t& h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    h ^= 0xff; // field separator, so "ab"+"c" != "a"+"bc"
    h *= 0x100000001b3ull;
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
    return out;
}

} // namespace

std::uint64_t config_hash(const PipelineConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    hash_bytes(h, config.input.string());
    hash_bytes(h, config.prefix);
    hash_bytes(h, std::string(1, config.parse.delimiter));
    hash_bytes(h, config.parse.case_column);
    hash_bytes(h, config.parse.task_column);
    hash_bytes(h, config.parse.lifecycle_column);
    hash_bytes(h, config.parse.keep_lifecycle);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", config.train_fraction);
    hash_bytes(h, buf);
    std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(config.seed));
    hash_bytes(h, buf);
    std::snprintf(buf, sizeof(buf), "%.17g", config.pseudocount);
    hash_bytes(h, buf);
    for (const ExclusionGroup& group : config.exclusion_groups)
        for (const std::string& member : group.members)
            hash_bytes(h, member);
    for (const std::string& observed : config.observe)
        hash_bytes(h, observed);
    hash_bytes(h, config.use_virtual_ends ? "ends" : "no-ends");
    return h;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    namespace fs = std::filesystem;
    std::vector<std::string> artifacts;
    fs::create_directories(config.out_dir);
    auto emit = [&](const std::string& name, std::string_view bytes) {
        write_file(config.out_dir / name, bytes);
        artifacts.push_back(name);
    };

    const EventLog full = stage("parse", [&] {
        std::ifstream in(config.input, std::ios::binary);
        if (!in)
            throw DataError("cannot open '" + config.input.string() + "'");
        return parse_log(in, config.parse);
    });

    const EventLog filtered = stage("filter", [&] {
        EventLog kept = filter_prefix(full, config.prefix);
        if (kept.traces.empty())
            throw EmptyLogError("prefix '" + config.prefix + "' removed every event");
        return kept;
    });

    auto [train, test] = stage("split", [&] {
        return split_cases(filtered, config.train_fraction, config.seed);
    });
    emit("train_log.csv", to_csv(train, config.parse));
    emit("test_log.csv", to_csv(test, config.parse));

    const TransitionGraph graph = stage("graph", [&] { return build_transition_graph(train); });
    emit("transitions.dot", to_dot(graph));

    const DagStructure dag = stage("break_cycles", [&] { return break_cycles(graph); });
    emit("structure.dot", to_dot(dag));

    const BayesianNetwork structure = stage("structure", [&] { return to_structure(dag); });

    const PresenceMatrix training = stage("encode", [&] {
        return encode_presence(train, structure.variables());
    });
    emit("training.txt", save_training(training));

    BayesianNetwork net = stage("learn", [&] {
        LearnConfig lc;
        lc.pseudocount = config.pseudocount;
        return mle_learn(structure, training, lc);
    });

    std::vector<std::string> skipped_groups;
    net = stage("corrections", [&] {
        BayesianNetwork corrected = apply_absent_propagation(net);
        for (const ExclusionGroup& group : config.exclusion_groups) {
            std::string missing;
            for (const std::string& member : group.members)
                if (!corrected.has_variable(member)) {
                    missing = member;
                    break;
                }
            if (!missing.empty()) {
                std::string note;
                for (const std::string& member : group.members)
                    note += (note.empty() ? "" : ",") + member;
                skipped_groups.push_back(note + " (no variable '" + missing + "')");
                continue;
            }
            corrected = apply_mutual_exclusion(corrected, group);
        }
        return corrected;
    });
    emit("network.bpnet", save_network(net));

    const MarkovChain chain = stage("markov", [&] {
        return build_markov_chain(train, config.use_virtual_ends);
    });
    emit("markov.csv", to_csv(chain));
    emit("markov.dot", to_dot(chain));

    PipelineResult result{net,
                          chain,
                          SequenceComparison{},
                          {},
                          {},
                          std::move(skipped_groups),
                          train.traces.size(),
                          test.traces.size()};

    stage("evaluate", [&] {
        result.comparison = compare_sequences(net, chain, test);
        emit("sequence_comparison.txt", to_text(result.comparison));
        emit("sequence_comparison.csv", to_csv(result.comparison));
        for (const std::string& observed : config.observe) {
            const ConditionalReport report = conditional_report(net, test, observed);
            emit("conditional_" + sanitize(observed) + ".txt", to_text(report));
            emit("conditional_" + sanitize(observed) + ".csv", to_csv(report));
            result.conditionals.push_back(report);
        }
        return 0;
    });

    std::ostringstream manifest;
    manifest << "pipeline manifest\n";
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    manifest << "seed\t" << config.seed << '\n';
    manifest << "config_hash\t" << hash << '\n';
    manifest << "input\t" << config.input.string() << '\n';
    manifest << "prefix\t" << config.prefix << '\n';
    manifest << "train_fraction\t" << config.train_fraction << '\n';
    manifest << "pseudocount\t" << config.pseudocount << '\n';
    manifest << "virtual_ends\t" << (config.use_virtual_ends ? "yes" : "no") << '\n';
    manifest << "train_traces\t" << result.train_traces << '\n';
    manifest << "test_traces\t" << result.test_traces << '\n';
    for (const std::string& note : result.skipped_groups)
        manifest << "skipped_exclusion_group\t" << note << '\n';
    for (const std::string& name : artifacts)
        manifest << "artifact\t" << name << '\n';
    emit("manifest.txt", manifest.str());

    result.artifacts = std::move(artifacts);
    return result;
}

} // namespace bpmine
