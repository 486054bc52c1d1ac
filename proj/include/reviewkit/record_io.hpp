#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "reviewkit/assemble.hpp"

namespace reviewkit {

/// One record as a single compact JSON line with keys exactly
///   record_id, image_id, platform, text, stars, text_box, rating_box, flags
/// in that order. Absent platform/stars/rating_box serialize as null;
/// boxes as [x_min, y_min, x_max, y_max]; flags as an object holding only
/// the fields that were computed. No trailing newline.
std::string serialize_record(const ReviewRecord& record);

/// All records, one line each, each line newline-terminated.
std::string serialize_records(const std::vector<ReviewRecord>& records);

/// Inverse of serialize_record. Throws ParseError (tagged with
/// source_name:line) on malformed JSON, missing or unknown keys, and
/// out-of-range values. parse_records(serialize_records(v)) == v.
ReviewRecord parse_record(const std::string& line,
                          const std::string& source_name, int line_number);
std::vector<ReviewRecord> parse_records(const std::string& content,
                                        const std::string& source_name);

/// File convenience wrappers. Reading a missing file and writing to an
/// uncreatable path throw ParseError / ConfigError respectively.
std::vector<ReviewRecord> read_records_file(const std::filesystem::path& path);
void write_records_file(const std::filesystem::path& path,
                        const std::vector<ReviewRecord>& records);

/// Read / write a whole file as bytes (UTF-8 text in practice).
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace reviewkit
