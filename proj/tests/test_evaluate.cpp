#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "bpmine/evaluate.hpp"
#include "oracles.hpp"

using namespace bpmine;

namespace {

EventLog make_log(std::vector<std::vector<std::string>> traces) {
    EventLog log;
    std::set<std::string> seen;
    std::size_t id = 0;
    for (auto& tasks : traces) {
        for (const auto& t : tasks)
            if (seen.insert(t).second)
                log.vocabulary.push_back(t);
        log.traces.push_back({"c" + std::to_string(id++), std::move(tasks)});
    }
    return log;
}

/// Deterministic two-variable net: A certain, B certain given A.
BayesianNetwork make_ab_network() {
    return BayesianNetwork({"A", "B"}, {{"B", {"A"}}},
                           {{"A", {{1.0, 0.0}}}, {"B", {{0.0, 1.0}, {1.0, 0.0}}}});
}

} // namespace

TEST_CASE("conditional report matches hand counts and the brute posterior") {
    const BayesianNetwork net = oracles::make_rain_network();
    const EventLog test = make_log({{"R", "S"}, {"R", "W"}, {"S", "W"}, {"R"}});
    const ConditionalReport report = conditional_report(net, test, "R");

    CHECK(report.observed == "R");
    CHECK(report.conditioning_traces == 3);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].query == "S");
    CHECK(report.rows[1].query == "W");
    CHECK(report.rows[0].empirical == 1.0 / 3.0);
    CHECK(report.rows[1].empirical == 1.0 / 3.0);

    for (const ConditionalRow& row : report.rows) {
        const auto oracle = oracles::brute_posterior(net, row.query, {{"R", State::present}});
        REQUIRE(oracle.has_value());
        CHECK(std::abs(row.model - oracle->p_present) < 1e-12);
        CHECK(row.error_pct == std::abs(row.empirical - row.model) * 100.0);
    }
}

TEST_CASE("conditional report excludes the observed variable") {
    const BayesianNetwork net = oracles::make_rain_network();
    const EventLog test = make_log({{"S", "R", "W"}});
    const ConditionalReport report = conditional_report(net, test, "S");
    for (const ConditionalRow& row : report.rows)
        CHECK(row.query != "S");
    CHECK(report.rows.size() == net.size() - 1);
}

TEST_CASE("full co-occurrence gives empirical one") {
    const BayesianNetwork net = make_ab_network();
    const EventLog test = make_log({{"A", "B"}, {"B", "A"}});
    const ConditionalReport report = conditional_report(net, test, "A");
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].empirical == 1.0);
}

TEST_CASE("conditioning on an unseen or unknown task fails") {
    const BayesianNetwork net = oracles::make_rain_network();
    const EventLog test = make_log({{"R", "S"}});
    CHECK_THROWS_AS(conditional_report(net, test, "W"), ConditioningError);
    CHECK_THROWS_AS(conditional_report(net, test, "nope"), UnknownVariableError);
}

TEST_CASE("deterministic models agree exactly") {
    const BayesianNetwork net = make_ab_network();
    const EventLog train = make_log({{"A", "B"}});
    const MarkovChain chain = build_markov_chain(train);
    const EventLog test = make_log({{"A", "B"}, {"A", "B"}, {"A", "B"}});

    const SequenceComparison cmp = compare_sequences(net, chain, test);
    REQUIRE(cmp.rows.size() == 1);
    CHECK(cmp.rows[0].count == 3);
    CHECK(cmp.rows[0].bn == 1.0);
    CHECK(cmp.rows[0].mc == 1.0);
    CHECK(cmp.rows[0].error_pct == 0.0);
    CHECK(cmp.total_bn == 1.0);
    CHECK(cmp.total_mc == 1.0);
    CHECK(cmp.total_error_pct == 0.0);
    CHECK(cmp.total_count == 3);
    CHECK(cmp.skipped_rows == 0);
}

TEST_CASE("rows collapse by exact sequence in first-occurrence order") {
    const BayesianNetwork net = make_ab_network();
    const MarkovChain chain = build_markov_chain(make_log({{"A", "B"}, {"A", "A"}}));
    const EventLog test = make_log({{"B", "A"}, {"A", "B"}, {"B", "A"}});

    const SequenceComparison cmp = compare_sequences(net, chain, test);
    REQUIRE(cmp.rows.size() == 2);
    CHECK(cmp.rows[0].sequence == std::vector<std::string>{"B", "A"});
    CHECK(cmp.rows[0].count == 2);
    CHECK(cmp.rows[1].sequence == std::vector<std::string>{"A", "B"});
    CHECK(cmp.rows[1].count == 1);
    // same task set, different order: bn identical, mc differs
    CHECK(cmp.rows[0].bn == cmp.rows[1].bn);
    CHECK(cmp.rows[0].mc == 0.0);
    CHECK(cmp.rows[1].mc == 0.5);
}

TEST_CASE("unmodeled tasks skip the row and stay out of the totals") {
    const BayesianNetwork net = make_ab_network();
    const MarkovChain chain = build_markov_chain(make_log({{"A", "B"}}));
    const EventLog test = make_log({{"A", "B"}, {"A", "X"}, {"A", "X"}});

    const SequenceComparison cmp = compare_sequences(net, chain, test);
    REQUIRE(cmp.rows.size() == 2);
    CHECK_FALSE(cmp.rows[0].skipped);
    CHECK(cmp.rows[1].skipped);
    CHECK(cmp.rows[1].skip_reason.find("not a network variable") != std::string::npos);
    CHECK(cmp.rows[1].skip_reason.find("X") != std::string::npos);
    CHECK(cmp.skipped_rows == 1);
    CHECK(cmp.skipped_count == 2);
    CHECK(cmp.total_count == 1);
    CHECK(cmp.total_bn == cmp.rows[0].bn);
}

TEST_CASE("tasks missing from the chain are reported as such") {
    BayesianNetwork net({"A", "B", "C"}, {},
                        {{"A", {{0.5, 0.5}}}, {"B", {{0.5, 0.5}}}, {"C", {{0.5, 0.5}}}});
    const MarkovChain chain = build_markov_chain(make_log({{"A", "B"}}));
    const SequenceComparison cmp = compare_sequences(net, chain, make_log({{"A", "C"}}));
    REQUIRE(cmp.rows.size() == 1);
    CHECK(cmp.rows[0].skipped);
    CHECK(cmp.rows[0].skip_reason.find("not a chain state") != std::string::npos);
}

TEST_CASE("single-task sequences need virtual ends to score") {
    const BayesianNetwork net = make_ab_network();
    const EventLog train = make_log({{"A", "B"}, {"A"}});
    const EventLog test = make_log({{"A"}});

    const SequenceComparison bare = compare_sequences(net, build_markov_chain(train), test);
    REQUIRE(bare.rows.size() == 1);
    CHECK(bare.rows[0].skipped);
    CHECK(bare.rows[0].skip_reason.find("no transition") != std::string::npos);

    const SequenceComparison wrapped =
        compare_sequences(net, build_markov_chain(train, true), test);
    REQUIRE(wrapped.rows.size() == 1);
    CHECK_FALSE(wrapped.rows[0].skipped);
    CHECK(wrapped.rows[0].mc == 0.5); // <START> -> A -> <END>, A ends one of two traces
}

TEST_CASE("totals are the count-weighted means of the scored rows") {
    std::mt19937_64 rng(29);
    const EventLog train = oracles::random_log(rng, 40, 4);
    const MarkovChain chain = build_markov_chain(train, true);

    std::map<std::string, std::vector<ProbPair>> cpts;
    for (const std::string& v : train.vocabulary)
        cpts[v] = {{0.3, 0.7}};
    const BayesianNetwork net(train.vocabulary, {}, cpts);

    const SequenceComparison cmp = compare_sequences(net, chain, train);
    double bn_sum = 0.0;
    double mc_sum = 0.0;
    std::uint64_t count = 0;
    for (const SequenceRow& row : cmp.rows) {
        if (row.skipped)
            continue;
        bn_sum += static_cast<double>(row.count) * row.bn;
        mc_sum += static_cast<double>(row.count) * row.mc;
        count += row.count;
    }
    REQUIRE(count == cmp.total_count);
    REQUIRE(count > 0);
    CHECK(cmp.total_bn == bn_sum / static_cast<double>(count));
    CHECK(cmp.total_mc == mc_sum / static_cast<double>(count));
    CHECK(cmp.total_error_pct == std::abs(cmp.total_bn - cmp.total_mc) * 100.0);

    std::uint64_t total = 0;
    for (const SequenceRow& row : cmp.rows)
        total += row.count;
    CHECK(total == cmp.total_count + cmp.skipped_count);
}

TEST_CASE("text renderers describe their columns") {
    const BayesianNetwork net = oracles::make_rain_network();
    const EventLog test = make_log({{"R", "S", "W"}});
    const std::string cond = to_text(conditional_report(net, test, "R"));
    CHECK(cond.find("conditional probabilities given R = present") != std::string::npos);
    CHECK(cond.find("empirical") != std::string::npos);
    CHECK(cond.find("error_pct") != std::string::npos);

    const MarkovChain chain = build_markov_chain(test, true);
    const std::string seq = to_text(compare_sequences(net, chain, test));
    CHECK(seq.find("R -> S -> W") != std::string::npos);
    CHECK(seq.find("weighted totals") != std::string::npos);
}

TEST_CASE("csv renderers use fixed columns and reject delimiter collisions") {
    const BayesianNetwork net = make_ab_network();
    const EventLog test = make_log({{"A", "B"}});
    const MarkovChain chain = build_markov_chain(test);
    const SequenceComparison cmp = compare_sequences(net, chain, test);

    const std::string csv = to_csv(cmp);
    CHECK(csv.find("sequence,task_set,count,bn,mc,error_pct,skipped,reason\n") == 0);
    CHECK(csv.find("A|B,A|B,1,1,1,0,no,\n") != std::string::npos);
    CHECK(csv.find("\ntotal,") != std::string::npos);

    const std::string cond_csv = to_csv(conditional_report(net, test, "A"));
    CHECK(cond_csv.find("variable,empirical,model,error_pct\n") == 0);
    CHECK(cond_csv.find("B,1,1,0\n") != std::string::npos);

    BayesianNetwork piped({"A|B"}, {}, {{"A|B", {{0.5, 0.5}}}});
    const MarkovChain piped_chain = build_markov_chain(make_log({{"A|B", "A|B"}}));
    const SequenceComparison bad =
        compare_sequences(piped, piped_chain, make_log({{"A|B", "A|B"}}));
    CHECK_THROWS_AS(to_csv(bad), DataError);
}
