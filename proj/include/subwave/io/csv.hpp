#pragma once

// Deterministic CSV emission: '#'-prefixed metadata comments, one header row,
// 17-significant-digit values, LF line endings, and atomic replace via a
// temp file in the destination directory. Output bytes depend only on the
// data, never on clock or environment.

#include <cstdio>
#include <filesystem>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "../errors.hpp"

namespace subwave::io {

inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(std::string key, std::string value) {
        metadata.emplace_back(std::move(key), std::move(value));
    }
    void add_meta(std::string key, double value) {
        metadata.emplace_back(std::move(key), format_value(value));
    }
    void add_row(const std::vector<double>& vals) {
        std::vector<std::string> row;
        row.reserve(vals.size());
        for (double v : vals) row.push_back(format_value(v));
        rows.push_back(std::move(row));
    }
    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }

    std::string render() const {
        std::string out;
        for (const auto& [k, v] : metadata) {
            out += "# ";
            out += k;
            out += " = ";
            out += v;
            out += '\n';
        }
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out += ',';
            out += columns[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += row[i];
            }
            out += '\n';
        }
        return out;
    }
};

inline void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    fs::create_directories(dir, ec);
    const fs::path tmp = path.string() + ".tmp";
    std::FILE* f = std::fopen(tmp.string().c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + tmp.string());
    const std::size_t n = std::fwrite(bytes.data(), 1, bytes.size(), f);
    const bool flushed = std::fflush(f) == 0;
    const bool closed = std::fclose(f) == 0;
    if (n != bytes.size() || !flushed || !closed) {
        fs::remove(tmp, ec);
        throw IoError("short write: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot replace " + path.string());
    }
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    write_file_atomic(path, table.render());
}

} // namespace subwave::io
