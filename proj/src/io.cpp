#include "pfront/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pfront/util.hpp"

namespace pfront {

namespace {

// The formats are specified little-endian; this codebase targets LE hosts
// and asserts so at startup of any IO.
void require_le() {
    const std::uint16_t one = 1;
    unsigned char b;
    std::memcpy(&b, &one, 1);
    if (b != 1) throw IoError("snapshot formats require a little-endian host");
}

void write_doubles(std::FILE* fp, const double* p, std::size_t n) {
    if (std::fwrite(p, sizeof(double), n, fp) != n) throw IoError("short write");
}

void read_doubles(std::FILE* fp, double* p, std::size_t n) {
    if (std::fread(p, sizeof(double), n, fp) != n) throw IoError("short read");
}

std::string read_line(std::FILE* fp) {
    std::string s;
    int c;
    while ((c = std::fgetc(fp)) != EOF && c != '\n') s.push_back(static_cast<char>(c));
    return s;
}

}  // namespace

void write_snapshot(const std::string& path, const Field& f) {
    require_le();
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot open " + path);
    std::fprintf(fp, "PFSNAP 1\n%d %d\n%s %s\n%s %s\n%s\n", f.grid.nx, f.grid.ny,
                 fmt_double(f.grid.hx).c_str(), fmt_double(f.grid.hy).c_str(),
                 fmt_double(f.grid.x0).c_str(), fmt_double(f.grid.y0).c_str(),
                 fmt_double(f.time).c_str());
    write_doubles(fp, f.values.data(), f.values.size());
    std::fclose(fp);
}

Field read_snapshot(const std::string& path) {
    require_le();
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoError("cannot open " + path);
    if (read_line(fp) != "PFSNAP 1") {
        std::fclose(fp);
        throw IoError(path + ": not a PFSNAP 1 file");
    }
    Grid2D g;
    double t = 0;
    {
        std::istringstream l1(read_line(fp)), l2(read_line(fp)), l3(read_line(fp)), l4(read_line(fp));
        l1 >> g.nx >> g.ny;
        l2 >> g.hx >> g.hy;
        l3 >> g.x0 >> g.y0;
        l4 >> t;
        if (!l1 || !l2 || !l3 || !l4) {
            std::fclose(fp);
            throw IoError(path + ": bad snapshot header");
        }
    }
    Field f(g);
    f.time = t;
    read_doubles(fp, f.values.data(), f.values.size());
    std::fclose(fp);
    return f;
}

void write_profile(const std::string& path, const ProfileTableData& t) {
    require_le();
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot open " + path);
    std::fprintf(fp, "PFPROF 1\n%d %d %d\n", t.nxi, t.nx, t.ny);
    write_doubles(fp, t.xi.data(), t.xi.size());
    write_doubles(fp, t.values.data(), t.values.size());
    std::fclose(fp);
}

ProfileTableData read_profile(const std::string& path) {
    require_le();
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoError("cannot open " + path);
    if (read_line(fp) != "PFPROF 1") {
        std::fclose(fp);
        throw IoError(path + ": not a PFPROF 1 file");
    }
    ProfileTableData t;
    {
        std::istringstream l(read_line(fp));
        l >> t.nxi >> t.nx >> t.ny;
        if (!l || t.nxi <= 0 || t.nx <= 0 || t.ny <= 0) {
            std::fclose(fp);
            throw IoError(path + ": bad profile header");
        }
    }
    t.xi.resize(t.nxi);
    t.values.resize(static_cast<std::size_t>(t.nxi) * t.nx * t.ny);
    read_doubles(fp, t.xi.data(), t.xi.size());
    read_doubles(fp, t.values.data(), t.values.size());
    std::fclose(fp);
    return t;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot open " + path);
    std::fprintf(fp, "%s\n", header.c_str());
    fp_ = fp;
}

CsvWriter::~CsvWriter() {
    if (fp_) std::fclose(static_cast<std::FILE*>(fp_));
}

void CsvWriter::row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line.push_back(',');
        line += fmt_double(values[i]);
    }
    raw_row(line);
}

void CsvWriter::raw_row(const std::string& line) {
    std::fprintf(static_cast<std::FILE*>(fp_), "%s\n", line.c_str());
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        cells.push_back(cur);
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::uint64_t file_fnv(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw MissingArtifact(path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), fp)) > 0) h = fnv1a(buf, n, h);
    std::fclose(fp);
    return h;
}

bool file_exists(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (fp) std::fclose(fp);
    return fp != nullptr;
}

}  // namespace pfront
