#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oseentp/vec.hpp"

// Strict JSON helpers: configuration and scenario files reject unknown keys
// and type mismatches loudly (distinct exit path in the CLI) instead of
// silently ignoring typos.

namespace oseentp {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace schema {

using json = nlohmann::json;

inline void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
}

inline void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                                const std::string& where) {
    require_object(j, where);
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const std::string& a : allowed) ok = ok || it.key() == a;
        if (!ok)
            throw SchemaError(where + ": unknown key \"" + it.key() + "\"");
    }
}

inline const json& require_key(const json& j, const std::string& key, const std::string& where) {
    require_object(j, where);
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(where + ": missing key \"" + key + "\"");
    return *it;
}

inline double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw SchemaError(where + ": expected a number");
    return j.get<double>();
}

inline int get_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return j.get<int>();
}

inline std::string get_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw SchemaError(where + ": expected a string");
    return j.get<std::string>();
}

inline Vec3 get_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(where + ": expected an array of 3 numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) v[i] = get_number(j[static_cast<std::size_t>(i)], where);
    return v;
}

inline std::vector<double> get_number_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(get_number(e, where));
    return out;
}

// Parse with position-bearing diagnostics folded into the message.
inline json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        // e.what() carries the byte position of the failure.
        throw SchemaError(path + ": " + e.what());
    }
}

}  // namespace schema
}  // namespace oseentp
