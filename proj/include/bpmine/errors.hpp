#pragma once

#include <stdexcept>
#include <string>

namespace bpmine {

// Every library failure derives from Error. kind() splits failures into the
// two classes the CLI maps to exit codes: bad input data vs. a model/query
// that cannot be answered.
class Error : public std::runtime_error {
public:
    enum class Kind { data, model };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct DataError : Error {
    explicit DataError(const std::string& what) : Error(Kind::data, what) {}
};

struct ModelError : Error {
    explicit ModelError(const std::string& what) : Error(Kind::model, what) {}
};

// event logs
struct SchemaError : DataError { using DataError::DataError; };      // header misses a configured column
struct EmptyLogError : DataError { using DataError::DataError; };    // no events survive parsing
struct RowFormatError : DataError { using DataError::DataError; };   // malformed row, message carries line number
struct SplitError : DataError { using DataError::DataError; };
struct EncodingError : DataError { using DataError::DataError; };    // task not covered by the variable list
struct TrainingError : DataError { using DataError::DataError; };    // unusable training input (e.g. empty log)

// persistence formats
struct FormatVersionError : DataError { using DataError::DataError; };
struct FormatError : DataError { using DataError::DataError; };
struct NormalizationError : DataError { using DataError::DataError; };
struct CycleError : DataError { using DataError::DataError; };       // cyclic parents in a loaded document

// networks and inference
struct AssignmentError : ModelError { using ModelError::ModelError; };
struct QueryError : ModelError { using ModelError::ModelError; };
struct ZeroEvidenceError : ModelError { using ModelError::ModelError; };
struct NetworkSizeError : ModelError { using ModelError::ModelError; }; // enumeration guard tripped
struct UnknownVariableError : ModelError { using ModelError::ModelError; };
struct StructureError : ModelError { using ModelError::ModelError; }; // edit would break the DAG invariant
struct LearningError : ModelError { using ModelError::ModelError; };

// markov chains
struct ShapeError : ModelError { using ModelError::ModelError; };
struct StateError : ModelError { using ModelError::ModelError; };

// evaluation
struct ConditioningError : ModelError { using ModelError::ModelError; };

// synthetic generation
struct GeneratorSpecError : ModelError { using ModelError::ModelError; };

} // namespace bpmine
