#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpmine/bayesnet.hpp"
#include "bpmine/errors.hpp"
#include "bpmine/evaluate.hpp"
#include "bpmine/eventlog.hpp"
#include "bpmine/graph.hpp"
#include "bpmine/io.hpp"
#include "bpmine/learning.hpp"
#include "bpmine/markov.hpp"
#include "bpmine/pipeline.hpp"
#include "bpmine/synthgen.hpp"

namespace {

struct ParseFlags {
    std::string delimiter = ",";
    bpmine::ParseConfig config;

    void attach(CLI::App* cmd) {
        cmd->add_option("--delimiter", delimiter, "field delimiter (single char, or 'tab')");
        cmd->add_option("--case-column", config.case_column, "case id column name");
        cmd->add_option("--task-column", config.task_column, "task column name");
        cmd->add_option("--lifecycle-column", config.lifecycle_column,
                        "lifecycle column name");
        cmd->add_option("--keep", config.keep_lifecycle, "lifecycle value to keep");
    }

    bpmine::ParseConfig resolve() const {
        bpmine::ParseConfig out = config;
        if (delimiter == "tab")
            out.delimiter = '\t';
        else if (delimiter.size() == 1)
            out.delimiter = delimiter[0];
        else
            throw CLI::ValidationError("--delimiter", "must be one character or 'tab'");
        return out;
    }
};

bpmine::EventLog load_log(const std::string& path, const bpmine::ParseConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw bpmine::DataError("cannot open '" + path + "'");
    return bpmine::parse_log(in, config);
}

bpmine::Evidence parse_evidence(const std::vector<std::string>& pairs) {
    bpmine::Evidence evidence;
    for (const std::string& pair : pairs) {
        const std::size_t eq = pair.rfind('=');
        if (eq == std::string::npos || eq == 0)
            throw CLI::ValidationError("--evidence", "expected VAR=present or VAR=absent, got '" +
                                                         pair + "'");
        const std::string name = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);
        bpmine::State state;
        if (value == "present")
            state = bpmine::State::present;
        else if (value == "absent")
            state = bpmine::State::absent;
        else
            throw CLI::ValidationError("--evidence", "state must be present or absent, got '" +
                                                         value + "'");
        evidence[name] = state;
    }
    return evidence;
}

std::vector<bpmine::ExclusionGroup> resolve_groups(bool no_defaults,
                                                   const std::vector<std::string>& extra) {
    std::vector<bpmine::ExclusionGroup> groups;
    if (!no_defaults)
        groups = bpmine::PipelineConfig{}.exclusion_groups;
    for (const std::string& spec : extra) {
        bpmine::ExclusionGroup group;
        std::string member;
        std::istringstream in(spec);
        while (std::getline(in, member, ','))
            if (!member.empty())
                group.members.push_back(member);
        if (group.members.size() < 2)
            throw CLI::ValidationError("--exclude",
                                       "a group needs at least two comma-separated tasks");
        groups.push_back(std::move(group));
    }
    return groups;
}

void cmd_stats(const std::string& input, const ParseFlags& flags, const std::string& prefix) {
    const bpmine::EventLog log =
        bpmine::filter_prefix(load_log(input, flags.resolve()), prefix);
    const auto stats = bpmine::log_statistics(log);
    std::uint64_t total = 0;
    std::size_t width = 4;
    for (const auto& [task, count] : stats) {
        total += count;
        width = std::max(width, task.size());
    }
    if (total == 0) {
        std::cout << "0 events\n";
        return;
    }
    for (const auto& [task, count] : stats)
        std::cout << task << std::string(width - task.size() + 2, ' ') << count << '\n';
    std::cout << "total" << std::string(width - 3, ' ') << total << " events in "
              << log.traces.size() << " cases\n";
}

void cmd_gen(const std::string& out, std::uint64_t cases, std::uint64_t seed) {
    const bpmine::EventLog log = bpmine::generate(bpmine::loan_preset(cases, seed));
    bpmine::write_file(out, bpmine::to_csv(log));
    std::cout << out << '\n';
}

void cmd_pipeline(const bpmine::PipelineConfig& config) {
    const bpmine::PipelineResult result = bpmine::run_pipeline(config);
    for (const std::string& name : result.artifacts)
        std::cout << (config.out_dir / name).string() << '\n';
    for (const std::string& note : result.skipped_groups)
        std::cerr << "note: exclusion group skipped: " << note << '\n';
}

void cmd_learn(const std::string& input, const ParseFlags& flags, const std::string& prefix,
               double pseudocount, const std::vector<bpmine::ExclusionGroup>& groups,
               const std::string& out) {
    const bpmine::EventLog log =
        bpmine::filter_prefix(load_log(input, flags.resolve()), prefix);
    if (log.traces.empty())
        throw bpmine::EmptyLogError("prefix '" + prefix + "' removed every event");
    const bpmine::DagStructure dag = bpmine::break_cycles(bpmine::build_transition_graph(log));
    bpmine::LearnConfig lc;
    lc.pseudocount = pseudocount;
    bpmine::BayesianNetwork net =
        bpmine::mle_learn(bpmine::to_structure(dag), bpmine::encode_presence(log, dag.nodes), lc);
    net = bpmine::apply_absent_propagation(net);
    for (const bpmine::ExclusionGroup& group : groups) {
        bool complete = true;
        for (const std::string& member : group.members)
            if (!net.has_variable(member)) {
                std::cerr << "note: exclusion group skipped: no variable '" << member << "'\n";
                complete = false;
                break;
            }
        if (complete)
            net = bpmine::apply_mutual_exclusion(net, group);
    }
    bpmine::write_file(out, bpmine::save_network(net));
    std::cout << out << '\n';
}

void cmd_query(const std::string& network_path, const std::string& query,
               const std::vector<std::string>& evidence_pairs) {
    const bpmine::BayesianNetwork net = bpmine::load_network(bpmine::read_file(network_path));
    const bpmine::Evidence evidence = parse_evidence(evidence_pairs);
    const bpmine::Posterior posterior = bpmine::infer(net, query, evidence);
    std::string given;
    for (const auto& [name, state] : evidence)
        given += (given.empty() ? "" : ", ") + name +
                 (state == bpmine::State::present ? "=present" : "=absent");
    if (given.empty())
        given = "no evidence";
    char line[512];
    std::snprintf(line, sizeof(line), "Pr(%s=present | %s) = %.6f\n", query.c_str(),
                  given.c_str(), posterior.p_present);
    std::cout << line;
    std::snprintf(line, sizeof(line), "Pr(%s=absent  | %s) = %.6f\n", query.c_str(),
                  given.c_str(), posterior.p_absent);
    std::cout << line;
    std::snprintf(line, sizeof(line), "unnormalized masses: present %.9g, absent %.9g\n",
                  posterior.mass_present, posterior.mass_absent);
    std::cout << line;
}

void cmd_eval(const std::string& network_path, const std::string& train_path,
              const std::string& test_path, const ParseFlags& flags, const std::string& prefix,
              bool virtual_ends, const std::vector<std::string>& observe) {
    const bpmine::ParseConfig parse = flags.resolve();
    const bpmine::BayesianNetwork net = bpmine::load_network(bpmine::read_file(network_path));
    const bpmine::EventLog train = bpmine::filter_prefix(load_log(train_path, parse), prefix);
    const bpmine::EventLog test = bpmine::filter_prefix(load_log(test_path, parse), prefix);
    const bpmine::MarkovChain chain = bpmine::build_markov_chain(train, virtual_ends);
    std::cout << bpmine::to_text(bpmine::compare_sequences(net, chain, test));
    for (const std::string& observed : observe) {
        std::cout << '\n';
        std::cout << bpmine::to_text(bpmine::conditional_report(net, test, observed));
    }
}

void cmd_export_dot(const std::string& input, const ParseFlags& flags,
                    const std::string& prefix, bool dag, const std::string& out) {
    const bpmine::EventLog log =
        bpmine::filter_prefix(load_log(input, flags.resolve()), prefix);
    if (log.traces.empty())
        throw bpmine::EmptyLogError("prefix '" + prefix + "' removed every event");
    const bpmine::TransitionGraph graph = bpmine::build_transition_graph(log);
    const std::string dot = dag ? bpmine::to_dot(bpmine::break_cycles(graph))
                                : bpmine::to_dot(graph);
    bpmine::write_file(out, dot);
    std::cout << out << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"process-mining toolkit: event logs, Bayesian networks, Markov chains"};
    app.require_subcommand(1);

    // stats
    auto* stats = app.add_subcommand("stats", "print task occurrence counts");
    std::string stats_input, stats_prefix;
    ParseFlags stats_flags;
    stats->add_option("--input", stats_input, "event log file")->required();
    stats->add_option("--prefix", stats_prefix, "keep only tasks with this prefix");
    stats_flags.attach(stats);
    stats->callback([&] { cmd_stats(stats_input, stats_flags, stats_prefix); });

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic loan-style event log");
    std::string gen_out, gen_preset = "loan";
    std::uint64_t gen_cases = 1000, gen_seed = 42;
    gen->add_option("--out", gen_out, "output log file")->required();
    gen->add_option("--cases", gen_cases, "number of cases");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--preset", gen_preset, "generator preset (loan)")
        ->check(CLI::IsMember({"loan"}));
    gen->callback([&] { cmd_gen(gen_out, gen_cases, gen_seed); });

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "run the full mining pipeline");
    bpmine::PipelineConfig pc;
    std::string pipe_input, pipe_out = "out";
    ParseFlags pipe_flags;
    std::vector<std::string> pipe_exclude;
    bool pipe_no_defaults = false;
    pipe->add_option("--input", pipe_input, "event log file")->required();
    pipe->add_option("--out", pipe_out, "artifact directory");
    pipe->add_option("--prefix", pc.prefix, "keep only tasks with this prefix");
    pipe->add_option("--fraction", pc.train_fraction, "training fraction in (0,1)");
    pipe->add_option("--seed", pc.seed, "split seed");
    pipe->add_option("--pseudocount", pc.pseudocount, "smoothing bias for learning");
    pipe->add_option("--observe", pc.observe, "conditional report per observed task");
    pipe->add_flag("--virtual-ends", pc.use_virtual_ends,
                   "train the chain with <START>/<END> states");
    pipe->add_flag("--no-default-exclusions", pipe_no_defaults,
                   "drop the built-in loan outcome exclusion group");
    pipe->add_option("--exclude", pipe_exclude,
                     "mutual exclusion group as comma-separated tasks (repeatable)");
    pipe_flags.attach(pipe);
    pipe->callback([&] {
        pc.input = pipe_input;
        pc.out_dir = pipe_out;
        pc.parse = pipe_flags.resolve();
        pc.exclusion_groups = resolve_groups(pipe_no_defaults, pipe_exclude);
        cmd_pipeline(pc);
    });

    // learn
    auto* learn = app.add_subcommand("learn", "learn a network from a whole log");
    std::string learn_input, learn_out, learn_prefix;
    double learn_pseudocount = 1.0;
    ParseFlags learn_flags;
    std::vector<std::string> learn_exclude;
    bool learn_no_defaults = false;
    learn->add_option("--input", learn_input, "event log file")->required();
    learn->add_option("--out", learn_out, "network file to write")->required();
    learn->add_option("--prefix", learn_prefix, "keep only tasks with this prefix");
    learn->add_option("--pseudocount", learn_pseudocount, "smoothing bias for learning");
    learn->add_flag("--no-default-exclusions", learn_no_defaults,
                    "drop the built-in loan outcome exclusion group");
    learn->add_option("--exclude", learn_exclude,
                      "mutual exclusion group as comma-separated tasks (repeatable)");
    learn_flags.attach(learn);
    learn->callback([&] {
        cmd_learn(learn_input, learn_flags, learn_prefix, learn_pseudocount,
                  resolve_groups(learn_no_defaults, learn_exclude), learn_out);
    });

    // query
    auto* query = app.add_subcommand("query", "posterior of one variable given evidence");
    std::string query_network, query_var;
    std::vector<std::string> query_evidence;
    query->add_option("--network", query_network, "network file")->required();
    query->add_option("--query", query_var, "query variable")->required();
    query->add_option("--evidence", query_evidence, "observation VAR=present|absent (repeatable)");
    query->callback([&] { cmd_query(query_network, query_var, query_evidence); });

    // eval
    auto* eval = app.add_subcommand("eval", "compare a saved network and a chain on a test log");
    std::string eval_network, eval_train, eval_test, eval_prefix;
    ParseFlags eval_flags;
    bool eval_ends = false;
    std::vector<std::string> eval_observe;
    eval->add_option("--network", eval_network, "network file")->required();
    eval->add_option("--train", eval_train, "training log (rebuilds the chain)")->required();
    eval->add_option("--test", eval_test, "test log")->required();
    eval->add_option("--prefix", eval_prefix, "keep only tasks with this prefix");
    eval->add_flag("--virtual-ends", eval_ends, "train the chain with <START>/<END> states");
    eval->add_option("--observe", eval_observe, "conditional report per observed task");
    eval_flags.attach(eval);
    eval->callback([&] {
        cmd_eval(eval_network, eval_train, eval_test, eval_flags, eval_prefix, eval_ends,
                 eval_observe);
    });

    // export-dot
    auto* exportdot = app.add_subcommand("export-dot", "write the transition graph as DOT");
    std::string dot_input, dot_out, dot_prefix;
    ParseFlags dot_flags;
    bool dot_dag = false;
    exportdot->add_option("--input", dot_input, "event log file")->required();
    exportdot->add_option("--out", dot_out, "DOT file to write")->required();
    exportdot->add_option("--prefix", dot_prefix, "keep only tasks with this prefix");
    exportdot->add_flag("--dag", dot_dag, "break cycles before exporting");
    dot_flags.attach(exportdot);
    exportdot->callback([&] {
        cmd_export_dot(dot_input, dot_flags, dot_prefix, dot_dag, dot_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const bpmine::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == bpmine::Error::Kind::data ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
