#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bpmine/bayesnet.hpp"
#include "bpmine/errors.hpp"
#include "bpmine/eventlog.hpp"
#include "bpmine/markov.hpp"

namespace bpmine {

/// One query variable compared under a fixed observation. empirical is the
/// fraction of test traces containing the query task among those containing
/// the observed task; model is the network posterior given observed=present.
struct ConditionalRow {
    std::string query;
    double empirical = 0.0;
    double model = 0.0;
    double error_pct = 0.0; // |empirical - model| * 100
};

struct ConditionalReport {
    std::string observed;
    std::uint64_t conditioning_traces = 0; // test traces containing observed
    std::vector<ConditionalRow> rows;      // network order, observed excluded
};

/// Compare empirical test frequencies against network posteriors given
/// observed=present, one row per network variable except the observed one.
/// Throws ConditioningError when no test trace contains the observed task.
ConditionalReport conditional_report(const BayesianNetwork& net, const EventLog& test,
                                     const std::string& observed,
                                     const InferOptions& options = {});

/// One distinct test sequence. The order-sensitive sequence drives the
/// chain probability; its task set (also printed, so the collapse is
/// auditable) drives the network probability. Rows a model cannot score
/// are marked skipped with a reason and excluded from the totals.
struct SequenceRow {
    std::vector<std::string> sequence;
    std::set<std::string> task_set;
    std::uint64_t count = 0;
    double bn = 0.0;
    double mc = 0.0;
    double error_pct = 0.0; // |bn - mc| * 100
    bool skipped = false;
    std::string skip_reason;
};

/// Totals are count-weighted means over the non-skipped rows, normalized by
/// their total occurrence count; total_error_pct = |total_bn - total_mc|*100.
struct SequenceComparison {
    std::vector<SequenceRow> rows; // first-occurrence order
    double total_bn = 0.0;
    double total_mc = 0.0;
    double total_error_pct = 0.0;
    std::uint64_t total_count = 0;   // occurrences entering the totals
    std::uint64_t skipped_rows = 0;  // distinct skipped sequences
    std::uint64_t skipped_count = 0; // occurrences those rows carried
};

/// Score every distinct test sequence under both models.
SequenceComparison compare_sequences(const BayesianNetwork& net, const MarkovChain& chain,
                                     const EventLog& test);

/// Aligned plain-text tables. Headers state the column semantics.
std::string to_text(const ConditionalReport& report);
std::string to_text(const SequenceComparison& comparison);

/// Machine-readable rows with a fixed column order; sequence and set cells
/// join their tasks with '|' (task names containing '|' or the delimiter
/// are rejected with DataError).
std::string to_csv(const ConditionalReport& report, char delimiter = ',');
std::string to_csv(const SequenceComparison& comparison, char delimiter = ',');

} // namespace bpmine
