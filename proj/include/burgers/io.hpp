#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace burgers::io {

// Shortest decimal string that round-trips to the same double.
std::string format_full(double v);

// Fixed significant-digit formatting for snapshot files.
std::string format_sig(double v, int digits);

// Write via a temporary file in the same directory plus rename, so readers
// never observe a partial file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

struct CsvColumn {
    std::string name;
    const Eigen::ArrayXd* values;
};

// digits <= 0 selects shortest round-trip formatting.
std::string csv_table(const std::vector<CsvColumn>& columns, int digits);

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns,
               int digits);

}  // namespace burgers::io
