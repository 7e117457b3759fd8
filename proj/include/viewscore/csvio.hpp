#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "viewscore/errors.hpp"

namespace viewscore {

// Shortest round-trip decimal text; identical across runs by construction.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw_io("format_double: conversion failed");
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw_parse(where + ": not a number: '" + s + "'");
    return v;
}

inline long parse_long(const std::string& s, const std::string& where) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw_parse(where + ": not an integer: '" + s + "'");
    return v;
}

inline std::string join_csv(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        line += fields[i];
    }
    return line;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

// UTF-8, comma separator, LF line ends, one header row; `# ` comment lines
// before the header carry provenance (config hash, registry version).
struct CsvDocument {
    std::vector<std::string> comments; // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::string render_csv(const CsvDocument& doc) {
    std::string out;
    for (const std::string& c : doc.comments) out += "# " + c + "\n";
    out += join_csv(doc.header) + "\n";
    for (const auto& row : doc.rows) out += join_csv(row) + "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw_io("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw_io("write failed for '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw_io("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline CsvDocument read_csv_file(const std::string& path) {
    std::string text = read_text_file(path);
    CsvDocument doc;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = end + 1;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::size_t skip = line.size() > 1 && line[1] == ' ' ? 2 : 1;
            doc.comments.push_back(line.substr(skip));
        } else if (!header_seen) {
            doc.header = split_csv(line);
            header_seen = true;
        } else {
            doc.rows.push_back(split_csv(line));
        }
    }
    if (!header_seen) throw_parse(path + ": missing CSV header row");
    return doc;
}

// FNV-1a over a canonical string; used to key artifacts by configuration.
inline std::string fnv1a_hex(const std::string& text) {
    uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

} // namespace viewscore
