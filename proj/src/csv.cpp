#include "rdfront/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rdfront {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out << ',';
        out << table.header[c];
    }
    out << '\n';
    const std::size_t rows = table.columns.empty() ? 0 : table.columns[0].size();
    for (const auto& col : table.columns)
        if (col.size() != rows)
            throw std::runtime_error("csv: ragged columns in " + path);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out << ',';
            out << format_g17(table.columns[c][r]);
        }
        out << '\n';
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot read " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    t.columns.assign(t.header.size(), {});
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t c = 0;
        while (std::getline(ls, cell, ',')) {
            if (c >= t.columns.size())
                throw std::runtime_error("csv: too many cells in " + path);
            t.columns[c++].push_back(std::stod(cell));
        }
        if (c != t.columns.size())
            throw std::runtime_error("csv: short row in " + path);
    }
    return t;
}

std::vector<double> chebyshev_grid(std::size_t n, double a, double b) {
    std::vector<double> g(n);
    const double pi = 3.14159265358979323846;
    for (std::size_t j = 0; j < n; ++j) {
        const double s = 0.5 * (1.0 - std::cos(pi * double(j) / double(n - 1)));
        g[j] = a + (b - a) * s;
    }
    g.front() = a;
    g.back() = b;
    return g;
}

}  // namespace rdfront
