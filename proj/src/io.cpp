#include "burgers/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace burgers::io {

std::string format_full(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("format_full: to_chars failed");
    return std::string(buf, p);
}

std::string format_sig(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string csv_table(const std::vector<CsvColumn>& columns, int digits) {
    if (columns.empty()) throw std::invalid_argument("csv_table: no columns");
    const auto rows = columns.front().values->size();
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].values->size() != rows)
            throw std::invalid_argument("csv_table: ragged columns");
        out += columns[c].name;
        out += (c + 1 < columns.size()) ? ',' : '\n';
    }
    for (Eigen::Index r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const double v = (*columns[c].values)[r];
            out += digits > 0 ? format_sig(v, digits) : format_full(v);
            out += (c + 1 < columns.size()) ? ',' : '\n';
        }
    return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns,
               int digits) {
    atomic_write(path, csv_table(columns, digits));
}

}  // namespace burgers::io
