#include "shadowblade/error.hpp"

namespace shadowblade {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidHost: return "InvalidHost";
    case ErrorCode::InvalidTargetName: return "InvalidTargetName";
    case ErrorCode::HostMismatch: return "HostMismatch";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::WrongNodeKind: return "WrongNodeKind";
    case ErrorCode::RootNotMarkable: return "RootNotMarkable";
    case ErrorCode::InvalidEdge: return "InvalidEdge";
    case ErrorCode::CycleRejected: return "CycleRejected";
    case ErrorCode::InvalidNodeAttrs: return "InvalidNodeAttrs";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::MissingWeight: return "MissingWeight";
    case ErrorCode::StaleWeights: return "StaleWeights";
    case ErrorCode::InvalidUrl: return "InvalidUrl";
    case ErrorCode::InvalidWordlist: return "InvalidWordlist";
    case ErrorCode::InvalidOptions: return "InvalidOptions";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::NoHostFound: return "NoHostFound";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::MissingResultsField: return "MissingResultsField";
    case ErrorCode::ProgramNotFound: return "ProgramNotFound";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::FixtureMissing: return "FixtureMissing";
    case ErrorCode::ExecutionFailed: return "ExecutionFailed";
    }
    return "Unknown";
}

} // namespace shadowblade
