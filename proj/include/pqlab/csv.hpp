#pragma once

// CSV emission: comma-separated, header row, LF endings, floats as shortest
// round-trip decimals. Writes are atomic (temp file + rename).

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "pqlab/errors.hpp"

namespace pqlab {

inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw validation_error("format_double failed");
    return std::string(buf, ptr);
}

struct csv_table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const {
        std::string out;
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += header[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += row[i];
            }
            out += '\n';
        }
        return out;
    }
};

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw validation_error("cannot open output file " + tmp.string());
        out << content;
        if (!out.flush()) throw validation_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw validation_error("rename to " + path.string() + " failed: " + ec.message());
}

}  // namespace pqlab
