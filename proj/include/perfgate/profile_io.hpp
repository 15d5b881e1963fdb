#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "perfgate/profile.hpp"

namespace perfgate {

enum class ProfileFormat { Csv, Json };

/// Picks the format from a file extension (".csv" / ".json").
ProfileFormat format_from_path(const std::filesystem::path& path);
ProfileFormat parse_profile_format(std::string_view name);

inline constexpr int kDefaultRealDigits = 6;

/// Decimal text with `digits` significant digits ("%.*g").
std::string format_real(double value, int digits = kDefaultRealDigits);

/// Rounds a value to what format_real would print, so that serialized and
/// in-memory snapshots compare equal after one save.
double round_significant(double value, int digits = kDefaultRealDigits);

CommitSnapshot parse_csv(std::string_view text, const std::string& commit_id);
CommitSnapshot parse_json(std::string_view text, const std::string& commit_id);

/// Reads and validates a profile file. Errors: MalformedRow(line, reason),
/// DuplicateInput(input_id), EmptyDataset, IoError.
CommitSnapshot ingest(const std::filesystem::path& path, ProfileFormat format,
                      const std::string& commit_id);

std::string to_csv(const CommitSnapshot& snapshot, int digits = kDefaultRealDigits);
nlohmann::ordered_json to_json_records(const CommitSnapshot& snapshot,
                                       int digits = kDefaultRealDigits);

void save(const CommitSnapshot& snapshot, const std::filesystem::path& path,
          ProfileFormat format, int digits = kDefaultRealDigits);

}  // namespace perfgate
