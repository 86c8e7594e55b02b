#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "bpmine/eventlog.hpp"
#include "oracles.hpp"

using namespace bpmine;

TEST_CASE("parse groups rows by case and keeps file order") {
    const std::string text = "caseId,task,lifecycle\n"
                             "1,A,COMPLETE\n"
                             "2,A,COMPLETE\n"
                             "1,B,COMPLETE\n";
    const EventLog log = parse_log(text);
    REQUIRE(log.traces.size() == 2);
    CHECK(log.traces[0].case_id == "1");
    CHECK(log.traces[0].tasks == std::vector<std::string>{"A", "B"});
    CHECK(log.traces[1].tasks == std::vector<std::string>{"A"});
    CHECK(log.vocabulary == std::vector<std::string>{"A", "B"});
}

TEST_CASE("parse keeps only the configured lifecycle") {
    const std::string text = "caseId,task,lifecycle\n"
                             "1,A,SCHEDULE\n"
                             "1,B,COMPLETE\n"
                             "1,C,START\n";
    const EventLog log = parse_log(text);
    REQUIRE(log.traces.size() == 1);
    CHECK(log.traces[0].tasks == std::vector<std::string>{"B"});
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_log(std::string_view{""}), EmptyLogError);
    // everything filtered away
    CHECK_THROWS_AS(parse_log(std::string_view{"caseId,task,lifecycle\n1,A,SCHEDULE\n"}),
                    EmptyLogError);
    // missing configured column, named in the message
    try {
        parse_log(std::string_view{"caseId,activity,lifecycle\n1,A,COMPLETE\n"});
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("task") != std::string::npos);
    }
    // wrong field count carries the line number
    try {
        parse_log(std::string_view{"caseId,task,lifecycle\n1,A,COMPLETE\n1,B\n"});
        FAIL("expected RowFormatError");
    } catch (const RowFormatError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    // empty task name
    CHECK_THROWS_AS(parse_log(std::string_view{"caseId,task,lifecycle\n1,,COMPLETE\n"}),
                    RowFormatError);
}

TEST_CASE("parse honors custom columns and delimiter") {
    ParseConfig config;
    config.delimiter = ';';
    config.case_column = "id";
    config.task_column = "name";
    config.lifecycle_column = "phase";
    config.keep_lifecycle = "DONE";
    const EventLog log = parse_log(std::string_view{"phase;id;name\nDONE;9;X\n"}, config);
    REQUIRE(log.traces.size() == 1);
    CHECK(log.traces[0].case_id == "9");
    CHECK(log.traces[0].tasks == std::vector<std::string>{"X"});
}

TEST_CASE("filter_prefix keeps matching tasks and drops emptied traces") {
    EventLog log;
    log.traces.push_back({"1", {"A_SUB", "W_Call", "A_DEC"}});
    log.traces.push_back({"2", {"W_Call"}});
    log.vocabulary = {"A_SUB", "W_Call", "A_DEC"};

    const EventLog filtered = filter_prefix(log, "A_");
    REQUIRE(filtered.traces.size() == 1);
    CHECK(filtered.traces[0].tasks == std::vector<std::string>{"A_SUB", "A_DEC"});
    CHECK(filtered.vocabulary == std::vector<std::string>{"A_SUB", "A_DEC"});

    CHECK(filter_prefix(log, "") == log);
    CHECK(filter_prefix(log, "ZZZ").traces.empty());
}

TEST_CASE("log_statistics counts every occurrence") {
    EventLog log;
    log.traces.push_back({"1", {"A", "B"}});
    log.traces.push_back({"2", {"A"}});
    log.vocabulary = {"A", "B"};
    const auto stats = log_statistics(log);
    CHECK(stats == std::map<std::string, std::uint64_t>{{"A", 2}, {"B", 1}});
    CHECK(log_statistics(EventLog{}).empty());
}

TEST_CASE("filtered statistics never exceed unfiltered") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
        const EventLog log = oracles::random_log(rng, 30);
        std::uint64_t full = 0, part = 0;
        for (const auto& [task, count] : log_statistics(log))
            full += count;
        for (const auto& [task, count] : log_statistics(filter_prefix(log, "T1")))
            part += count;
        CHECK(part <= full);
    }
}

static EventLog tiny_log(std::size_t n) {
    EventLog log;
    for (std::size_t i = 0; i < n; ++i)
        log.traces.push_back({"c" + std::to_string(i), {"A"}});
    log.vocabulary = {"A"};
    return log;
}

TEST_CASE("split_cases sizes, disjointness, determinism") {
    const EventLog log = tiny_log(10);
    const auto [train, test] = split_cases(log, 0.7, 42);
    CHECK(train.traces.size() == 7);
    CHECK(test.traces.size() == 3);

    std::set<std::string> ids;
    for (const auto& t : train.traces)
        ids.insert(t.case_id);
    for (const auto& t : test.traces)
        CHECK(ids.insert(t.case_id).second);
    CHECK(ids.size() == 10);

    const auto [train2, test2] = split_cases(log, 0.7, 42);
    CHECK(train == train2);
    CHECK(test == test2);
    const auto [train3, test3] = split_cases(log, 0.7, 43);
    CHECK(train3.traces.size() == 7); // size depends on fraction only
}

TEST_CASE("split_cases rounds half up at realistic scale") {
    const auto [train, test] = split_cases(tiny_log(13087), 0.7, 1);
    CHECK(train.traces.size() == 9161);
    CHECK(test.traces.size() == 3926);
}

TEST_CASE("split_cases rejects bad input") {
    CHECK_THROWS_AS(split_cases(tiny_log(1), 0.7, 1), SplitError);
    CHECK_THROWS_AS(split_cases(tiny_log(5), 0.0, 1), SplitError);
    CHECK_THROWS_AS(split_cases(tiny_log(5), 1.0, 1), SplitError);
}

TEST_CASE("split_cases property: partition for any fraction and seed") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 40; ++round) {
        const EventLog log = oracles::random_log(rng, 2 + rng() % 40);
        const double fraction = 0.05 + 0.9 * (static_cast<double>(rng() % 1000) / 1000.0);
        const auto [train, test] = split_cases(log, fraction, rng());
        CHECK(train.traces.size() + test.traces.size() == log.traces.size());
        std::set<std::string> ids;
        for (const auto& t : train.traces)
            CHECK(ids.insert(t.case_id).second);
        for (const auto& t : test.traces)
            CHECK(ids.insert(t.case_id).second);
    }
}

TEST_CASE("encode_presence basics") {
    EventLog log;
    log.traces.push_back({"1", {"A", "C"}});
    log.vocabulary = {"A", "C"};
    const PresenceMatrix m = encode_presence(log, {"A", "B", "C"});
    REQUIRE(m.rows.rows() == 1);
    REQUIRE(m.rows.cols() == 3);
    CHECK(m.rows(0, 0) == 1);
    CHECK(m.rows(0, 1) == 0);
    CHECK(m.rows(0, 2) == 1);
}

TEST_CASE("encode_presence collapses repeats") {
    EventLog log;
    log.traces.push_back({"1", {"A", "A", "B"}});
    log.vocabulary = {"A", "B"};
    const PresenceMatrix m = encode_presence(log, {"A", "B"});
    CHECK(m.rows(0, 0) == 1);
    CHECK(m.rows(0, 1) == 1);
}

TEST_CASE("encode_presence over the ten loan variables") {
    const std::vector<std::string> vars{
        "A_SUBMITTED", "A_PARTLYSUBMITTED", "A_PREACCEPTED", "A_ACCEPTED", "A_FINALIZED",
        "A_APPROVED",  "A_REGISTERED",      "A_ACTIVATED",   "A_DECLINED", "A_CANCELLED"};
    EventLog log;
    log.traces.push_back({"1", {"A_SUBMITTED", "A_PARTLYSUBMITTED", "A_DECLINED"}});
    log.vocabulary = {"A_SUBMITTED", "A_PARTLYSUBMITTED", "A_DECLINED"};
    const PresenceMatrix m = encode_presence(log, vars);
    int present = 0;
    for (Eigen::Index c = 0; c < m.rows.cols(); ++c)
        present += m.rows(0, c);
    CHECK(present == 3);
}

TEST_CASE("encode_presence names the uncovered task") {
    EventLog log;
    log.traces.push_back({"1", {"A", "Z"}});
    log.vocabulary = {"A", "Z"};
    try {
        encode_presence(log, {"A"});
        FAIL("expected EncodingError");
    } catch (const EncodingError& e) {
        CHECK(std::string(e.what()).find("Z") != std::string::npos);
    }
}

TEST_CASE("encode_presence shape matches traces and variables") {
    std::mt19937_64 rng(5);
    const EventLog log = oracles::random_log(rng, 25);
    std::vector<std::string> vars = log.vocabulary;
    vars.push_back("EXTRA");
    const PresenceMatrix m = encode_presence(log, vars);
    CHECK(static_cast<std::size_t>(m.rows.rows()) == log.traces.size());
    CHECK(static_cast<std::size_t>(m.rows.cols()) == vars.size());
}

TEST_CASE("to_csv round-trips through parse_log") {
    std::mt19937_64 rng(9);
    for (int round = 0; round < 20; ++round) {
        const EventLog log = oracles::random_log(rng, 15);
        CHECK(parse_log(std::string_view(to_csv(log))) == log);
    }
}

TEST_CASE("to_csv rejects fields that would corrupt the format") {
    EventLog log;
    log.traces.push_back({"1", {"A,B"}});
    log.vocabulary = {"A,B"};
    CHECK_THROWS_AS((void)to_csv(log), DataError);
}
