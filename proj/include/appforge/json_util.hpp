#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "appforge/errors.hpp"

namespace appforge {

using json = nlohmann::json;

/// Canonical textual form for every artifact written to disk: two-space
/// indent, keys in sorted order (nlohmann::json objects already iterate
/// sorted), trailing newline. parse(canonical(x)) == x byte-for-byte.
std::string canonical_dump(const json& value);

/// Compact sorted-key form used for fingerprinting, never persisted.
std::string compact_dump(const json& value);

/// 64-bit FNV-1a over a byte string, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// 32-bit FNV-1a, used where a small numeric seed is wanted.
std::uint32_t fnv1a_32(const std::string& bytes);

/// Throws SchemaError unless `value` is an object whose keys are exactly
/// drawn from `required` plus `optional`. Unknown fields are rejected by
/// name so malformed artifacts fail loudly.
void expect_fields(const json& value, const std::string& context,
                   std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {});

const json& require_field(const json& value, const std::string& context,
                          const char* name);

std::string require_string(const json& value, const std::string& context,
                           const char* name);

json parse_json(const std::string& text, const std::string& context);

json load_json_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace appforge
