#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perfgate {

enum class ErrorCode {
    MalformedRow,
    DuplicateInput,
    EmptyDataset,
    InvalidSpec,
    UnknownInput,
    TooFewRecords,
    NoClusters,
    EmptyCluster,
    NonPositiveStatements,
    ClusterMismatch,
    InvalidArgument,
    NotFound,
    IoError,
};

std::string_view error_name(ErrorCode code);

/// Domain error raised by every module. The code's name is what the CLI
/// prints and what the HTTP API reports in its `error` field.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const { return error_name(code_); }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace perfgate
