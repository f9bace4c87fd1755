#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "tdw/common.hpp"

namespace tdw::csv {

struct IoFailure : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

/// A parsed delimited table: header row plus string cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ParseError("missing column: " + name);
    }
};

inline std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string to_string(const Table& t) {
    std::string out;
    auto emit_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            out += escape(row[i]);
        }
        out.push_back('\n');
    };
    emit_row(t.header);
    for (const auto& row : t.rows) emit_row(row);
    return out;
}

inline Table parse(const std::string& text) {
    Table t;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    auto end_field = [&]() {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        if (!any) {
            t.header = row;
            any = true;
        } else {
            if (row.size() != t.header.size())
                throw ParseError("row has " + std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(t.header.size()));
            t.rows.push_back(row);
        }
        row.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_row();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (quoted) throw ParseError("unterminated quoted field");
    if (!field.empty() || !row.empty()) end_row();  // final line without trailing newline
    if (!any) throw ParseError("empty csv input");
    return t;
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Table read_table(const std::filesystem::path& path) {
    try {
        return parse(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

// Numeric formatting helpers. Doubles use the shortest round-trip form so
// that written files re-parse to the identical value.

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

inline double parse_double(const std::string& s) {
    const std::string t = trim(s);
    double v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ParseError("bad real number: '" + s + "'");
    return v;
}

inline std::int64_t parse_int(const std::string& s) {
    const std::string t = trim(s);
    std::int64_t v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ParseError("bad integer: '" + s + "'");
    return v;
}

}  // namespace tdw::csv
