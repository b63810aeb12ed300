#pragma once

#include <stdexcept>
#include <string>

namespace mssc {

enum class ErrorCode {
    UnsupportedEdgeWeightType,
    MalformedLine,
    DimensionMismatch,
    EmptyCluster,
    InvalidK,
    InvalidLevel,
    NumericalFailure,
    IncompatibleColumnInPool,
    ComponentSpansClusters,
    NoCandidates,
    ColumnAlreadyCompatible,
    TooLarge,
    SolutionIntegral,
    InfeasibleConstraints,
    TooLargeForExact,
    InvalidAxis,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mssc
