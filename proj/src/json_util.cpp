#include "appforge/json_util.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace appforge {

std::string canonical_dump(const json& value) {
    return value.dump(2) + "\n";
}

std::string compact_dump(const json& value) {
    return value.dump();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

std::uint32_t fnv1a_32(const std::string& bytes) {
    std::uint32_t hash = 2166136261u;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 16777619u;
    }
    return hash;
}

void expect_fields(const json& value, const std::string& context,
                   std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional) {
    if (!value.is_object()) {
        throw SchemaError(context + ": expected an object");
    }
    std::set<std::string> allowed;
    for (const char* name : required) {
        if (!value.contains(name)) {
            throw SchemaError(context + ": missing field '" + name + "'");
        }
        allowed.insert(name);
    }
    for (const char* name : optional) {
        allowed.insert(name);
    }
    for (auto it = value.begin(); it != value.end(); ++it) {
        if (allowed.find(it.key()) == allowed.end()) {
            throw SchemaError(context + ": unknown field '" + it.key() + "'");
        }
    }
}

const json& require_field(const json& value, const std::string& context,
                          const char* name) {
    if (!value.is_object() || !value.contains(name)) {
        throw SchemaError(context + ": missing field '" + name + "'");
    }
    return value.at(name);
}

std::string require_string(const json& value, const std::string& context,
                           const char* name) {
    const json& field = require_field(value, context, name);
    if (!field.is_string()) {
        throw SchemaError(context + ": field '" + name + "' must be a string");
    }
    return field.get<std::string>();
}

json parse_json(const std::string& text, const std::string& context) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) {
        throw SchemaError(context + ": invalid JSON");
    }
    return parsed;
}

json load_json_file(const std::string& path) {
    return parse_json(read_text_file(path), path);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw NotFoundError("cannot open for writing: " + path);
    }
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace appforge
