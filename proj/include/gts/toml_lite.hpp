#pragma once

// Reader for the flat TOML subset used by the run configuration files:
// [section] headers, key = value lines with string, number, boolean, or
// numeric-array values, and # comments. Keys are exposed as "section.key".

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gts::toml {

struct Value {
    std::string raw;

    std::string as_string() const {
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
            return raw.substr(1, raw.size() - 2);
        return raw;
    }
    double as_double() const {
        size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("toml: not a number: " + raw);
        return v;
    }
    long as_int() const {
        size_t pos = 0;
        long v = std::stol(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("toml: not an integer: " + raw);
        return v;
    }
    bool as_bool() const {
        if (raw == "true") return true;
        if (raw == "false") return false;
        throw std::invalid_argument("toml: not a boolean: " + raw);
    }
    std::vector<double> as_double_array() const {
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
            throw std::invalid_argument("toml: not an array: " + raw);
        std::vector<double> out;
        std::string inner = raw.substr(1, raw.size() - 2);
        std::stringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ',')) {
            size_t a = item.find_first_not_of(" \t");
            if (a == std::string::npos) continue;
            size_t b = item.find_last_not_of(" \t");
            out.push_back(Value{item.substr(a, b - a + 1)}.as_double());
        }
        return out;
    }
};

using Table = std::map<std::string, Value>;

inline std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline Table parse(std::istream& in) {
    Table table;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments outside of strings.
        bool in_string = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line = line.substr(0, i);
                break;
            }
        }
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("toml: malformed section header at line " +
                                            std::to_string(lineno));
            section = strip(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("toml: expected key = value at line " +
                                        std::to_string(lineno));
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("toml: empty key or value at line " +
                                        std::to_string(lineno));
        table[section.empty() ? key : section + "." + key] = Value{val};
    }
    return table;
}

}  // namespace gts::toml
