#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bpmine/errors.hpp"

namespace bpmine {

enum class Lifecycle : std::uint8_t { complete, other };

/// One row of the raw log after lifecycle filtering. ordinal is the 0-based
/// position of the event within its case, in file order.
struct Event {
    std::string case_id;
    std::string task;
    Lifecycle lifecycle = Lifecycle::complete;
    std::size_t ordinal = 0;
};

/// Ordered task sequence of a single case.
struct Trace {
    std::string case_id;
    std::vector<std::string> tasks;

    bool operator==(const Trace&) const = default;
};

/// Case-grouped log. vocabulary lists the distinct task names in
/// first-appearance order; every case_id occurs in exactly one trace.
struct EventLog {
    std::vector<Trace> traces;
    std::vector<std::string> vocabulary;

    bool operator==(const EventLog&) const = default;
};

/// Binary encoding of a log: rows(i, j) == 1 iff variables[j] occurs in
/// trace i at least once.
struct PresenceMatrix {
    std::vector<std::string> variables;
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> rows;

    bool operator==(const PresenceMatrix& other) const {
        return variables == other.variables && rows.rows() == other.rows.rows() &&
               rows.cols() == other.rows.cols() && rows == other.rows;
    }
};

/// Column mapping for delimiter-separated logs. The defaults match the
/// schema used throughout: header caseId,task,lifecycle and COMPLETE rows.
struct ParseConfig {
    char delimiter = ',';
    std::string case_column = "caseId";
    std::string task_column = "task";
    std::string lifecycle_column = "lifecycle";
    std::string keep_lifecycle = "COMPLETE";
};

/// Parse a delimiter-separated event log with a header row. Only rows whose
/// lifecycle equals config.keep_lifecycle are retained; events are grouped
/// by case in file order.
/// Throws SchemaError, RowFormatError, EmptyLogError.
EventLog parse_log(std::istream& source, const ParseConfig& config = {});
EventLog parse_log(std::string_view text, const ParseConfig& config = {});

/// Serialize back to the same delimiter-separated schema parse_log reads.
/// Fields containing the delimiter or a newline are rejected (DataError).
std::string to_csv(const EventLog& log, const ParseConfig& config = {});

/// Keep only tasks starting with prefix; traces left empty are dropped and
/// the vocabulary is recomputed. An empty prefix returns the log unchanged.
EventLog filter_prefix(const EventLog& log, std::string_view prefix);

/// Total occurrence count per task across all traces (repeats counted).
std::map<std::string, std::uint64_t> log_statistics(const EventLog& log);

/// Random case-level partition. Train receives round-half-up(fraction * N)
/// traces; both halves keep the input trace order. Deterministic per seed.
/// Throws SplitError when the log has fewer than 2 traces or the fraction
/// is outside (0,1).
std::pair<EventLog, EventLog> split_cases(const EventLog& log, double train_fraction,
                                          std::uint64_t seed);

/// Encode each trace as a presence row over the given variable order.
/// variables must cover the log's vocabulary; extra variables encode as
/// absent. Throws EncodingError naming the first uncovered task.
PresenceMatrix encode_presence(const EventLog& log, const std::vector<std::string>& variables);

} // namespace bpmine
