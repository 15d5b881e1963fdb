#include "perfgate/profile_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "perfgate/error.hpp"

namespace perfgate {

namespace {

constexpr std::array<std::string_view, 8> kColumns = {
    "input_id",   "input_size",     "exec_time_ms", "memory_kb",
    "iterations", "statements",     "function_calls", "conditionals",
};

[[noreturn]] void malformed(std::size_t line, const std::string& reason) {
    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + reason);
}

std::uint64_t parse_counter(std::string_view field, std::string_view column, std::size_t line) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        malformed(line, std::string(column) + " is not a non-negative integer: '" +
                            std::string(field) + "'");
    }
    return v;
}

double parse_real(std::string_view field, std::string_view column, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() ||
        !std::isfinite(v)) {
        malformed(line, std::string(column) + " is not a number: '" + std::string(field) + "'");
    }
    return v;
}

void check_record(const ProfileRecord& r, std::size_t line) {
    if (r.input_id.empty()) malformed(line, "empty input_id");
    if (!(r.exec_time > 0.0)) malformed(line, "exec_time_ms must be > 0");
    if (r.memory < 0.0) malformed(line, "memory_kb must be >= 0");
}

// RFC 4180 style split; quotes may wrap a field and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) malformed(line_no, "unterminated quote");
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ProfileFormat format_from_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".csv") return ProfileFormat::Csv;
    if (ext == ".json") return ProfileFormat::Json;
    throw Error(ErrorCode::InvalidArgument, "cannot infer format of " + path.string());
}

ProfileFormat parse_profile_format(std::string_view name) {
    if (name == "csv") return ProfileFormat::Csv;
    if (name == "json") return ProfileFormat::Json;
    throw Error(ErrorCode::InvalidArgument, "unknown profile format '" + std::string(name) + "'");
}

std::string format_real(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

double round_significant(double value, int digits) {
    if (!std::isfinite(value)) return value;
    auto text = format_real(value, digits);
    return std::strtod(text.c_str(), nullptr);
}

CommitSnapshot parse_csv(std::string_view text, const std::string& commit_id) {
    CommitSnapshot snap;
    snap.commit_id = commit_id;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    bool has_test_case = false;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        auto fields = split_csv_line(line, line_no);
        if (!header_seen) {
            if (line_no == 1 && !fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
                fields[0].erase(0, 3);
            }
            if (fields.size() < kColumns.size() || fields.size() > kColumns.size() + 1) {
                malformed(line_no, "unexpected header column count");
            }
            for (std::size_t i = 0; i < kColumns.size(); ++i) {
                if (fields[i] != kColumns[i]) {
                    malformed(line_no, "expected header column '" + std::string(kColumns[i]) +
                                           "', got '" + fields[i] + "'");
                }
            }
            has_test_case = fields.size() == kColumns.size() + 1;
            if (has_test_case && fields.back() != "test_case") {
                malformed(line_no, "expected header column 'test_case', got '" + fields.back() + "'");
            }
            header_seen = true;
            continue;
        }

        const std::size_t want = kColumns.size() + (has_test_case ? 1 : 0);
        if (fields.size() != want) {
            malformed(line_no, "expected " + std::to_string(want) + " fields, got " +
                                   std::to_string(fields.size()));
        }
        ProfileRecord r;
        r.input_id = fields[0];
        r.input_size = parse_counter(fields[1], kColumns[1], line_no);
        r.exec_time = parse_real(fields[2], kColumns[2], line_no);
        r.memory = parse_real(fields[3], kColumns[3], line_no);
        r.iterations = parse_counter(fields[4], kColumns[4], line_no);
        r.statements = parse_counter(fields[5], kColumns[5], line_no);
        r.function_calls = parse_counter(fields[6], kColumns[6], line_no);
        r.conditionals = parse_counter(fields[7], kColumns[7], line_no);
        if (has_test_case && !fields[8].empty()) r.test_case = fields[8];
        check_record(r, line_no);
        snap.records.push_back(std::move(r));
    }
    if (!header_seen) throw Error(ErrorCode::EmptyDataset, "no header in CSV for " + commit_id);
    validate(snap);
    return snap;
}

CommitSnapshot parse_json(std::string_view text, const std::string& commit_id) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MalformedRow, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) malformed(1, "top-level JSON value must be an array");

    CommitSnapshot snap;
    snap.commit_id = commit_id;
    std::size_t line = 0;
    for (const auto& obj : doc) {
        ++line;  // 1-based element index
        if (!obj.is_object()) malformed(line, "element is not an object");
        auto counter = [&](std::string_view key) -> std::uint64_t {
            auto it = obj.find(std::string(key));
            if (it == obj.end()) malformed(line, "missing " + std::string(key));
            if (!it->is_number_unsigned()) {
                if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
                    return it->get<std::uint64_t>();
                }
                malformed(line, std::string(key) + " is not a non-negative integer");
            }
            return it->get<std::uint64_t>();
        };
        auto real = [&](std::string_view key) -> double {
            auto it = obj.find(std::string(key));
            if (it == obj.end()) malformed(line, "missing " + std::string(key));
            if (!it->is_number()) malformed(line, std::string(key) + " is not a number");
            return it->get<double>();
        };
        ProfileRecord r;
        auto id = obj.find("input_id");
        if (id == obj.end() || !id->is_string()) malformed(line, "input_id must be a string");
        r.input_id = id->get<std::string>();
        r.input_size = counter("input_size");
        r.exec_time = real("exec_time_ms");
        r.memory = real("memory_kb");
        r.iterations = counter("iterations");
        r.statements = counter("statements");
        r.function_calls = counter("function_calls");
        r.conditionals = counter("conditionals");
        if (auto tc = obj.find("test_case"); tc != obj.end() && !tc->is_null()) {
            if (!tc->is_string()) malformed(line, "test_case must be a string");
            r.test_case = tc->get<std::string>();
        }
        check_record(r, line);
        snap.records.push_back(std::move(r));
    }
    validate(snap);
    return snap;
}

CommitSnapshot ingest(const std::filesystem::path& path, ProfileFormat format,
                      const std::string& commit_id) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error(ErrorCode::IoError, "no such file: " + path.string());
    }
    auto text = read_file(path);
    auto snap = format == ProfileFormat::Csv ? parse_csv(text, commit_id)
                                             : parse_json(text, commit_id);
    auto mtime = std::filesystem::last_write_time(path, ec);
    if (!ec) {
        auto sys = std::chrono::file_clock::to_sys(mtime);
        snap.captured_at =
            std::chrono::duration_cast<std::chrono::seconds>(sys.time_since_epoch()).count();
    }
    return snap;
}

std::string to_csv(const CommitSnapshot& snapshot, int digits) {
    const bool with_tc = snapshot.has_test_cases();
    std::string out;
    for (std::size_t i = 0; i < kColumns.size(); ++i) {
        if (i) out += ',';
        out += kColumns[i];
    }
    if (with_tc) out += ",test_case";
    out += '\n';
    for (const auto& r : snapshot.records) {
        out += csv_escape(r.input_id);
        out += ',' + std::to_string(r.input_size);
        out += ',' + format_real(r.exec_time, digits);
        out += ',' + format_real(r.memory, digits);
        out += ',' + std::to_string(r.iterations);
        out += ',' + std::to_string(r.statements);
        out += ',' + std::to_string(r.function_calls);
        out += ',' + std::to_string(r.conditionals);
        if (with_tc) out += ',' + csv_escape(r.test_case.value_or(""));
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json to_json_records(const CommitSnapshot& snapshot, int digits) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : snapshot.records) {
        nlohmann::ordered_json o;
        o["input_id"] = r.input_id;
        o["input_size"] = r.input_size;
        o["exec_time_ms"] = round_significant(r.exec_time, digits);
        o["memory_kb"] = round_significant(r.memory, digits);
        o["iterations"] = r.iterations;
        o["statements"] = r.statements;
        o["function_calls"] = r.function_calls;
        o["conditionals"] = r.conditionals;
        if (r.test_case) o["test_case"] = *r.test_case;
        arr.push_back(std::move(o));
    }
    return arr;
}

void save(const CommitSnapshot& snapshot, const std::filesystem::path& path,
          ProfileFormat format, int digits) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    if (format == ProfileFormat::Csv) {
        out << to_csv(snapshot, digits);
    } else {
        out << to_json_records(snapshot, digits).dump(1) << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace perfgate
