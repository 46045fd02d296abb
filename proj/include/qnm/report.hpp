#pragma once

// Report serialization shared by the library and the CLI.
//
// Floats are always printed with 17 significant digits ("%.17g" in the C
// locale) so that reports round-trip exactly and are byte-identical across
// runs.

#include <string>

#include <json.hpp>

namespace qnm {

inline constexpr const char* kToolName = "qnm";
inline constexpr const char* kToolVersion = "0.1.0";

std::string format_double(double v);

/// Deterministic JSON text: keys in insertion order, 2-space indent,
/// numbers via format_double. Non-finite numbers are written as null.
std::string dump_json(const nlohmann::ordered_json& doc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(const std::string& bytes);

}  // namespace qnm
