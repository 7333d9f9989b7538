#ifndef MGSCHED_CSV_HPP
#define MGSCHED_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace mgsched::csv {

// RFC-4180 style, '.' decimal separator, header row.  Values are formatted
// with %.12g which is far below every tolerance used in this project.
std::string format_number(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_string(const Table& t);

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void write_table(const std::filesystem::path& path, const Table& t);
Table read_table(const std::filesystem::path& path);

} // namespace mgsched::csv

#endif
