#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace curvlab::store {

/// Code version folded into every run id.
std::string_view version();

struct Payload {
    std::string kind;  // "verification" or "mass"
    std::string text;  // write_report_text / write_mass_csv output
};

struct RunRecord {
    std::string run_id;
    std::string created_at;  // UTC, ISO 8601
    std::string config_echo;
    std::vector<Payload> reports;
};

/// First 16 hex digits of SHA-256(config_echo + '\n' + version).
std::string run_id_for(const std::string& config_echo, std::string_view code_version = version());

/// Fills run_id and created_at (current UTC time).
RunRecord make_record(std::string config_echo, std::vector<Payload> reports);

/// Writes <dir>/<run_id>.run atomically (temporary file + rename). Saving a
/// record whose file already exists with the same content is a no-op; an
/// existing file that does not parse, or differs, raises IoError.
std::filesystem::path save(const RunRecord& record, const std::filesystem::path& dir);

RunRecord load(const std::filesystem::path& file);

std::string serialize(const RunRecord& record);
/// SchemaMismatch when the text is not a schema=1 record.
RunRecord deserialize(const std::string& text);

/// One line per changed margin or status; empty when the records agree.
/// SchemaMismatch when payload kinds or check lists differ.
std::string diff(const RunRecord& a, const RunRecord& b);

}  // namespace curvlab::store
