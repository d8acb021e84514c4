#pragma once

#include <string>
#include <vector>

namespace rdfront {

// All CSV output: header row, comma-separated, 17 significant digits.
std::string format_g17(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // one vector per header entry
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Chebyshev-distributed grid on [a,b] (endpoint-clustered, ascending).
std::vector<double> chebyshev_grid(std::size_t n, double a, double b);

}  // namespace rdfront
