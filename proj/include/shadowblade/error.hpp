#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shadowblade {

enum class ErrorCode {
    // graph-core
    InvalidHost,
    InvalidTargetName,
    HostMismatch,
    UnknownNode,
    WrongNodeKind,
    RootNotMarkable,
    InvalidEdge,
    CycleRejected,
    InvalidNodeAttrs,
    SchemaVersionMismatch,
    MalformedDocument,
    // weight-engine
    MissingWeight,
    StaleWeights,
    // tool-runner
    InvalidUrl,
    InvalidWordlist,
    InvalidOptions,
    MalformedXml,
    NoHostFound,
    MalformedJson,
    MissingResultsField,
    ProgramNotFound,
    Timeout,
    FixtureMissing,
    ExecutionFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every library-level failure. The code is stable and is
/// what the HTTP layer and the Python bindings surface to callers.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view code_string() const noexcept { return to_string(code_); }

private:
    ErrorCode code_;
};

} // namespace shadowblade
