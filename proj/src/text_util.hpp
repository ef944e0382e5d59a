#pragma once

// Shared text helpers for the CSV and model-file readers/writers.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "vpd/types.hpp"

namespace vpd::detail {

// 17 significant digits: enough for a lossless double round-trip.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline double parse_double(const std::string& s, const std::string& where) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw Error(ErrorCode::data_error, where + ": not a number: '" + s + "'");
    }
    return v;
}

inline long parse_long(const std::string& s, const std::string& where) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
        throw Error(ErrorCode::data_error, where + ": not an integer: '" + s + "'");
    }
    return v;
}

// Strips a trailing '\r' so files written on Windows parse the same.
inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

}  // namespace vpd::detail
