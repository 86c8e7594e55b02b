#include "bpmine/eventlog.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace bpmine {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw SchemaError("missing column '" + name + "' in header");
    return static_cast<std::size_t>(it - header.begin());
}

// Deterministic bounded draw, independent of the standard library's
// distribution implementations.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

} // namespace

EventLog parse_log(std::istream& source, const ParseConfig& config) {
    std::string line;
    if (!std::getline(source, line))
        throw EmptyLogError("empty event log: no header row");
    line = strip_cr(line);
    const auto header = split_fields(line, config.delimiter);
    const std::size_t case_col = find_column(header, config.case_column);
    const std::size_t task_col = find_column(header, config.task_column);
    const std::size_t life_col = find_column(header, config.lifecycle_column);

    std::vector<Event> events;
    std::unordered_map<std::string, std::size_t> per_case_ordinal;
    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line, config.delimiter);
        if (fields.size() != header.size())
            throw RowFormatError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        if (fields[task_col].empty())
            throw RowFormatError("line " + std::to_string(line_no) + ": empty task name");
        if (fields[life_col] != config.keep_lifecycle) continue;
        Event ev;
        ev.case_id = fields[case_col];
        ev.task = fields[task_col];
        ev.lifecycle = Lifecycle::complete;
        ev.ordinal = per_case_ordinal[ev.case_id]++;
        events.push_back(std::move(ev));
    }
    if (events.empty())
        throw EmptyLogError("no events with lifecycle '" + config.keep_lifecycle + "'");

    EventLog log;
    std::unordered_map<std::string, std::size_t> trace_index;
    std::unordered_set<std::string> seen_tasks;
    for (auto& ev : events) {
        auto [it, fresh] = trace_index.try_emplace(ev.case_id, log.traces.size());
        if (fresh) log.traces.push_back(Trace{ev.case_id, {}});
        log.traces[it->second].tasks.push_back(ev.task);
        if (seen_tasks.insert(ev.task).second) log.vocabulary.push_back(ev.task);
    }
    return log;
}

EventLog parse_log(std::string_view text, const ParseConfig& config) {
    std::istringstream ss{std::string(text)};
    return parse_log(ss, config);
}

std::string to_csv(const EventLog& log, const ParseConfig& config) {
    auto check_field = [&](const std::string& f) -> const std::string& {
        if (f.find(config.delimiter) != std::string::npos || f.find('\n') != std::string::npos)
            throw DataError("field '" + f + "' contains the delimiter or a newline");
        return f;
    };
    std::ostringstream out;
    out << config.case_column << config.delimiter << config.task_column << config.delimiter
        << config.lifecycle_column << '\n';
    for (const auto& trace : log.traces)
        for (const auto& task : trace.tasks)
            out << check_field(trace.case_id) << config.delimiter << check_field(task)
                << config.delimiter << config.keep_lifecycle << '\n';
    return out.str();
}

EventLog filter_prefix(const EventLog& log, std::string_view prefix) {
    EventLog result;
    std::unordered_set<std::string> seen;
    for (const auto& trace : log.traces) {
        Trace filtered{trace.case_id, {}};
        for (const auto& task : trace.tasks)
            if (std::string_view(task).starts_with(prefix)) filtered.tasks.push_back(task);
        if (filtered.tasks.empty()) continue;
        for (const auto& task : filtered.tasks)
            if (seen.insert(task).second) result.vocabulary.push_back(task);
        result.traces.push_back(std::move(filtered));
    }
    return result;
}

std::map<std::string, std::uint64_t> log_statistics(const EventLog& log) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& trace : log.traces)
        for (const auto& task : trace.tasks) ++counts[task];
    return counts;
}

std::pair<EventLog, EventLog> split_cases(const EventLog& log, double train_fraction,
                                          std::uint64_t seed) {
    const std::size_t n = log.traces.size();
    if (n < 2) throw SplitError("cannot split a log with fewer than 2 traces");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw SplitError("train fraction must lie in (0,1)");

    // round-half-up
    const auto n_train =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[bounded(rng, i)]);

    std::vector<bool> in_train(n, false);
    for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

    auto collect = [&](bool want_train) {
        EventLog half;
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_train[i] != want_train) continue;
            half.traces.push_back(log.traces[i]);
            for (const auto& task : log.traces[i].tasks)
                if (seen.insert(task).second) half.vocabulary.push_back(task);
        }
        return half;
    };
    return {collect(true), collect(false)};
}

PresenceMatrix encode_presence(const EventLog& log, const std::vector<std::string>& variables) {
    std::unordered_map<std::string, Eigen::Index> column;
    for (std::size_t j = 0; j < variables.size(); ++j)
        column[variables[j]] = static_cast<Eigen::Index>(j);

    PresenceMatrix matrix;
    matrix.variables = variables;
    matrix.rows.setZero(static_cast<Eigen::Index>(log.traces.size()),
                        static_cast<Eigen::Index>(variables.size()));
    for (std::size_t i = 0; i < log.traces.size(); ++i) {
        for (const auto& task : log.traces[i].tasks) {
            auto it = column.find(task);
            if (it == column.end())
                throw EncodingError("task '" + task + "' is not in the variable list");
            matrix.rows(static_cast<Eigen::Index>(i), it->second) = 1;
        }
    }
    return matrix;
}

} // namespace bpmine
