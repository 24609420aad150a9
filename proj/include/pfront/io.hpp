#pragma once

#include <string>
#include <vector>

#include "pfront/grid.hpp"

namespace pfront {

// Snapshot format (bit-exact): ASCII header lines
//   PFSNAP 1
//   nx ny
//   hx hy
//   x0 y0
//   t
// followed by nx*ny little-endian 64-bit floats, row-major (x outermost).
void write_snapshot(const std::string& path, const Field& f);
Field read_snapshot(const std::string& path);

// Profile export: "PFPROF 1", dimensions (nxi, nx, ny), xi grid, then the
// table as 64-bit floats (xi outermost, then x, then y).
struct ProfileTableData {
    int nxi = 0, nx = 0, ny = 0;
    std::vector<double> xi;
    std::vector<double> values;  // (k*nx + i)*ny + j
};
void write_profile(const std::string& path, const ProfileTableData& t);
ProfileTableData read_profile(const std::string& path);

// Minimal CSV writer: header once, then rows of %.17g-formatted doubles.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header);
    ~CsvWriter();
    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);

private:
    void* fp_;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path);  // includes header row

std::uint64_t file_fnv(const std::string& path);
bool file_exists(const std::string& path);

}  // namespace pfront
