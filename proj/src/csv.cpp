#include "mgsched/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mgsched/common.hpp"

namespace mgsched::csv {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string to_string(const Table& t) {
    std::ostringstream os;
    auto emit_row = [&os](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << row[i];
        }
        os << "\r\n";
    };
    emit_row(t.header);
    for (const auto& r : t.rows) emit_row(r);
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open for write: " + tmp.string());
        os << content;
        if (!os) throw Error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_table(const std::filesystem::path& path, const Table& t) {
    write_file_atomic(path, to_string(t));
}

Table read_table(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open: " + path.string());
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

} // namespace mgsched::csv
