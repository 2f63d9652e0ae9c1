// tomlmini.hpp -- a small TOML-subset reader, enough for flat config files:
// [section] headers, bare keys, strings, integers, floats, booleans, and
// one-dimensional arrays of those. No nested tables, no multiline strings.
#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cpex/types.hpp"

namespace cpex::toml {

struct value;
using array = std::vector<value>;

struct value {
    std::variant<bool, std::int64_t, double, std::string, array> data;

    bool is_array() const { return std::holds_alternative<array>(data); }
};

class table {
public:
    void set(const std::string& key, value v) { entries_[key] = std::move(v); }
    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::int64_t get_int(const std::string& key) const {
        const auto& v = at(key);
        if (const auto* i = std::get_if<std::int64_t>(&v.data)) return *i;
        throw config_error("config field '" + key + "': expected an integer");
    }
    double get_double(const std::string& key) const {
        const auto& v = at(key);
        if (const auto* d = std::get_if<double>(&v.data)) return *d;
        if (const auto* i = std::get_if<std::int64_t>(&v.data)) return double(*i);
        throw config_error("config field '" + key + "': expected a number");
    }
    bool get_bool(const std::string& key) const {
        const auto& v = at(key);
        if (const auto* b = std::get_if<bool>(&v.data)) return *b;
        throw config_error("config field '" + key + "': expected a boolean");
    }
    std::string get_string(const std::string& key) const {
        const auto& v = at(key);
        if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
        throw config_error("config field '" + key + "': expected a string");
    }
    array get_array(const std::string& key) const {
        const auto& v = at(key);
        if (const auto* a = std::get_if<array>(&v.data)) return *a;
        throw config_error("config field '" + key + "': expected an array");
    }

    std::int64_t get_int_or(const std::string& key, std::int64_t def) const {
        return has(key) ? get_int(key) : def;
    }
    double get_double_or(const std::string& key, double def) const {
        return has(key) ? get_double(key) : def;
    }
    bool get_bool_or(const std::string& key, bool def) const {
        return has(key) ? get_bool(key) : def;
    }
    std::string get_string_or(const std::string& key, const std::string& def) const {
        return has(key) ? get_string(key) : def;
    }

    std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
        std::vector<std::string> out;
        for (const auto& [k, v] : entries_)
            if (k.rfind(prefix, 0) == 0) out.push_back(k);
        return out;
    }

private:
    const value& at(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw config_error("config field '" + key + "' is missing");
        return it->second;
    }
    std::map<std::string, value> entries_;
};

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// removes a trailing comment, honoring double-quoted strings
inline std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

inline value parse_scalar(const std::string& raw, int lineno) {
    const std::string s = strip(raw);
    if (s.empty()) throw config_error("toml line " + std::to_string(lineno) + ": empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw config_error("toml line " + std::to_string(lineno) + ": unterminated string");
        return value{s.substr(1, s.size() - 2)};
    }
    if (s == "true") return value{true};
    if (s == "false") return value{false};
    const bool looks_float = s.find_first_of(".eE") != std::string::npos &&
                             s.find_first_not_of("+-0123456789.eE") == std::string::npos;
    if (!looks_float) {
        std::int64_t i = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
        if (ec == std::errc() && p == s.data() + s.size()) return value{i};
    }
    try {
        std::size_t used = 0;
        const double d = std::stod(s, &used);
        if (used == s.size()) return value{d};
    } catch (...) {
    }
    throw config_error("toml line " + std::to_string(lineno) + ": cannot parse value '" + s + "'");
}

inline value parse_value(const std::string& raw, int lineno) {
    const std::string s = strip(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']')
            throw config_error("toml line " + std::to_string(lineno) + ": unterminated array");
        array items;
        std::string body = s.substr(1, s.size() - 2);
        std::string cur;
        bool in_string = false;
        for (char c : body) {
            if (c == '"') in_string = !in_string;
            if (c == ',' && !in_string) {
                if (!strip(cur).empty()) items.push_back(parse_scalar(cur, lineno));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!strip(cur).empty()) items.push_back(parse_scalar(cur, lineno));
        return value{std::move(items)};
    }
    return parse_scalar(s, lineno);
}

} // namespace detail

inline table parse(std::istream& in) {
    table t;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = detail::strip(detail::strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw config_error("toml line " + std::to_string(lineno) + ": bad section header");
            section = detail::strip(s.substr(1, s.size() - 2));
            if (section.empty())
                throw config_error("toml line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("toml line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::strip(s.substr(0, eq));
        if (key.size() >= 2 && key.front() == '"' && key.back() == '"')
            key = key.substr(1, key.size() - 2);
        if (key.empty())
            throw config_error("toml line " + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        t.set(full, detail::parse_value(s.substr(eq + 1), lineno));
    }
    return t;
}

inline table parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

inline table parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    return parse(in);
}

} // namespace cpex::toml
