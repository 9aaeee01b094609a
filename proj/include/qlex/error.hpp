#pragma once

#include <stdexcept>
#include <string>

namespace qlex {

enum class ErrorCode {
    // input data problems
    RaggedInput,
    EmptyInput,
    EmptyField,
    IoError,
    // parameter problems
    ColumnOutOfRange,
    RankVectorLengthMismatch,
    LengthMismatch,
    InconsistentPartition,
    EmptySequence,
    CardinalityOutOfRange,
    NonPositiveEss,
    TableInconsistency,
    BadPair,
    BadNoise,
    BadFraction,
    BadArgument,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Data errors come from the bytes we were given; everything else is a
// caller mistake. The CLI maps the former to exit 1, the latter to exit 2.
inline bool is_data_error(ErrorCode c) {
    switch (c) {
        case ErrorCode::RaggedInput:
        case ErrorCode::EmptyInput:
        case ErrorCode::EmptyField:
        case ErrorCode::IoError:
            return true;
        default:
            return false;
    }
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace qlex
