#include "perfgate/error.hpp"

namespace perfgate {

std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::DuplicateInput: return "DuplicateInput";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::UnknownInput: return "UnknownInput";
        case ErrorCode::TooFewRecords: return "TooFewRecords";
        case ErrorCode::NoClusters: return "NoClusters";
        case ErrorCode::EmptyCluster: return "EmptyCluster";
        case ErrorCode::NonPositiveStatements: return "NonPositiveStatements";
        case ErrorCode::ClusterMismatch: return "ClusterMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace perfgate
