#include "bpmine/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <sstream>

namespace bpmine {

namespace {

std::string fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fixed4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

void check_cell(const std::string& task, char delimiter) {
    if (task.find('|') != std::string::npos ||
        task.find(delimiter) != std::string::npos ||
        task.find('\n') != std::string::npos)
        throw DataError("task name '" + task + "' cannot be written to a delimited report");
}

} // namespace

ConditionalReport conditional_report(const BayesianNetwork& net, const EventLog& test,
                                     const std::string& observed,
                                     const InferOptions& options) {
    net.index_of(observed); // UnknownVariableError for foreign names

    std::vector<const Trace*> conditioned;
    for (const Trace& trace : test.traces)
        if (std::find(trace.tasks.begin(), trace.tasks.end(), observed) != trace.tasks.end())
            conditioned.push_back(&trace);
    if (conditioned.empty())
        throw ConditioningError("task '" + observed + "' occurs in no test trace");

    ConditionalReport report;
    report.observed = observed;
    report.conditioning_traces = conditioned.size();

    const Evidence evidence{{observed, State::present}};
    for (const std::string& query : net.variables()) {
        if (query == observed)
            continue;
        std::uint64_t hits = 0;
        for (const Trace* trace : conditioned)
            if (std::find(trace->tasks.begin(), trace->tasks.end(), query) !=
                trace->tasks.end())
                ++hits;
        ConditionalRow row;
        row.query = query;
        row.empirical = static_cast<double>(hits) / static_cast<double>(conditioned.size());
        row.model = infer(net, query, evidence, options).p_present;
        row.error_pct = std::abs(row.empirical - row.model) * 100.0;
        report.rows.push_back(std::move(row));
    }
    return report;
}

SequenceComparison compare_sequences(const BayesianNetwork& net, const MarkovChain& chain,
                                     const EventLog& test) {
    SequenceComparison comparison;
    std::map<std::vector<std::string>, std::size_t> row_of;

    for (const Trace& trace : test.traces) {
        auto it = row_of.find(trace.tasks);
        if (it != row_of.end()) {
            ++comparison.rows[it->second].count;
            continue;
        }
        row_of.emplace(trace.tasks, comparison.rows.size());
        SequenceRow row;
        row.sequence = trace.tasks;
        row.task_set.insert(trace.tasks.begin(), trace.tasks.end());
        row.count = 1;
        comparison.rows.push_back(std::move(row));
    }

    for (SequenceRow& row : comparison.rows) {
        for (const std::string& task : row.task_set) {
            if (!net.has_variable(task)) {
                row.skipped = true;
                row.skip_reason = "task '" + task + "' is not a network variable";
                break;
            }
            if (!chain.has_state(task)) {
                row.skipped = true;
                row.skip_reason = "task '" + task + "' is not a chain state";
                break;
            }
        }
        if (!row.skipped && !chain.has_virtual_ends() && row.sequence.size() < 2) {
            row.skipped = true;
            row.skip_reason = "sequence has no transition and the chain has no virtual ends";
        }
        if (row.skipped) {
            ++comparison.skipped_rows;
            comparison.skipped_count += row.count;
            continue;
        }
        row.bn = sequence_probability(net, row.task_set);
        row.mc = chain_probability(chain, row.sequence);
        row.error_pct = std::abs(row.bn - row.mc) * 100.0;
        comparison.total_count += row.count;
        comparison.total_bn += static_cast<double>(row.count) * row.bn;
        comparison.total_mc += static_cast<double>(row.count) * row.mc;
    }
    if (comparison.total_count > 0) {
        comparison.total_bn /= static_cast<double>(comparison.total_count);
        comparison.total_mc /= static_cast<double>(comparison.total_count);
        comparison.total_error_pct =
            std::abs(comparison.total_bn - comparison.total_mc) * 100.0;
    }
    return comparison;
}

std::string to_text(const ConditionalReport& report) {
    std::size_t width = 8;
    for (const ConditionalRow& row : report.rows)
        width = std::max(width, row.query.size());

    std::ostringstream out;
    out << "conditional probabilities given " << report.observed << " = present\n";
    out << "empirical: share of the " << report.conditioning_traces << " test traces containing "
        << report.observed << " that also contain the row's task\n";
    out << "model: posterior from the learned network under the same observation\n\n";
    out << std::left << std::setw(static_cast<int>(width)) << "variable"
        << "  empirical     model  error_pct\n";
    for (const ConditionalRow& row : report.rows) {
        out << std::left << std::setw(static_cast<int>(width)) << row.query << "  "
            << fixed6(row.empirical) << "  " << fixed6(row.model) << "  "
            << std::right << std::setw(9) << fixed4(row.error_pct) << '\n';
        out << std::left;
    }
    return out.str();
}

std::string to_text(const SequenceComparison& comparison) {
    std::size_t width = 8;
    for (const SequenceRow& row : comparison.rows)
        width = std::max(width, join(row.sequence, " -> ").size());

    std::ostringstream out;
    out << "sequence probabilities, network (by task set) vs chain (by order)\n\n";
    out << std::left << std::setw(static_cast<int>(width)) << "sequence"
        << "  count        bn        mc  error_pct  note\n";
    for (const SequenceRow& row : comparison.rows) {
        out << std::left << std::setw(static_cast<int>(width)) << join(row.sequence, " -> ")
            << "  " << std::right << std::setw(5) << row.count << "  ";
        if (row.skipped) {
            out << "        -         -          -  skipped: " << row.skip_reason << '\n';
        } else {
            out << fixed6(row.bn) << "  " << fixed6(row.mc) << "  " << std::setw(9)
                << fixed4(row.error_pct) << "  set {" << join({row.task_set.begin(),
                                                               row.task_set.end()}, ", ")
                << "}\n";
        }
        out << std::left;
    }
    out << '\n';
    if (comparison.total_count > 0) {
        out << "weighted totals over " << comparison.total_count << " occurrences: bn "
            << fixed6(comparison.total_bn) << ", mc " << fixed6(comparison.total_mc)
            << ", error " << fixed4(comparison.total_error_pct) << "%\n";
    } else {
        out << "no rows entered the totals\n";
    }
    if (comparison.skipped_rows > 0)
        out << "skipped " << comparison.skipped_rows << " sequences ("
            << comparison.skipped_count << " occurrences)\n";
    return out.str();
}

std::string to_csv(const ConditionalReport& report, char delimiter) {
    std::ostringstream out;
    out << "variable" << delimiter << "empirical" << delimiter << "model" << delimiter
        << "error_pct\n";
    for (const ConditionalRow& row : report.rows) {
        check_cell(row.query, delimiter);
        out << row.query << delimiter << exact(row.empirical) << delimiter << exact(row.model)
            << delimiter << exact(row.error_pct) << '\n';
    }
    return out.str();
}

std::string to_csv(const SequenceComparison& comparison, char delimiter) {
    std::ostringstream out;
    out << "sequence" << delimiter << "task_set" << delimiter << "count" << delimiter << "bn"
        << delimiter << "mc" << delimiter << "error_pct" << delimiter << "skipped" << delimiter
        << "reason\n";
    for (const SequenceRow& row : comparison.rows) {
        for (const std::string& task : row.sequence)
            check_cell(task, delimiter);
        out << join(row.sequence, "|") << delimiter
            << join({row.task_set.begin(), row.task_set.end()}, "|") << delimiter << row.count
            << delimiter << exact(row.bn) << delimiter << exact(row.mc) << delimiter
            << exact(row.error_pct) << delimiter << (row.skipped ? "yes" : "no") << delimiter
            << row.skip_reason << '\n';
    }
    out << "total" << delimiter << "" << delimiter << comparison.total_count << delimiter
        << exact(comparison.total_bn) << delimiter << exact(comparison.total_mc) << delimiter
        << exact(comparison.total_error_pct) << delimiter << "" << delimiter << "skipped "
        << comparison.skipped_rows << " rows / " << comparison.skipped_count
        << " occurrences\n";
    return out.str();
}

} // namespace bpmine
