#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pfront/errors.hpp"
#include "pfront/media.hpp"

namespace pfront {

struct Grid2D {
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;
    double x0 = 0.0, y0 = 0.0;  // global coordinates of index (0,0)

    double x(int i) const { return x0 + i * hx; }
    double y(int j) const { return y0 + j * hy; }
    double width() const { return (nx - 1) * hx; }
    double height() const { return (ny - 1) * hy; }

    void validate() const {
        if (nx < 3 || ny < 3) throw RejectedConfiguration("grid needs nx, ny >= 3");
        if (!(hx > 0.0) || !(hy > 0.0)) throw RejectedConfiguration("grid spacings must be positive");
    }
};

// points per period; throws unless h divides L exactly (integer points per period)
inline int points_per_period(double h, double L) {
    const double q = L / h;
    const long long n = std::llround(q);
    if (n < 1 || std::abs(q - static_cast<double>(n)) > 1e-9 * q)
        throw RejectedConfiguration("grid spacing must divide the cell period exactly");
    return static_cast<int>(n);
}

// Discrete scalar state on a rectangular window. Row-major with x outermost:
// values[i*ny + j] lives at (x0 + i hx, y0 + j hy).
struct Field {
    Grid2D grid;
    std::vector<double> values;
    double time = 0.0;

    Field() = default;
    Field(const Grid2D& g, double fill = 0.0) : grid(g), values(static_cast<std::size_t>(g.nx) * g.ny, fill) {
        grid.validate();
    }

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.ny + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.ny + j]; }

    template <class F>
    void fill_with(F&& fn) {
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) at(i, j) = fn(grid.x(i), grid.y(j));
    }

    double min_value() const {
        double m = values[0];
        for (double v : values) m = std::min(m, v);
        return m;
    }
    double max_value() const {
        double m = values[0];
        for (double v : values) m = std::max(m, v);
        return m;
    }
};

enum class SidePolicy { Clamp0, Clamp1, PeriodicWrap, LinearExtrapolate };

struct BoundaryPolicy {
    SidePolicy left = SidePolicy::Clamp0;
    SidePolicy right = SidePolicy::Clamp0;
    SidePolicy bottom = SidePolicy::Clamp1;
    SidePolicy top = SidePolicy::Clamp0;

    // Sheared wrap: when the x-sides are periodic, the ghost at x - W
    // reads the value at (x - W + W, y + shear_x * h) i.e. the wrap
    // identification is (x, y) ~ (x + W, y + shear_x * h). Both W and the
    // shear must be whole numbers of cell periods, so oblique pulsating
    // fronts wrap exactly. shear_y mirrors this for wrapped y-sides.
    int shear_x = 0;
    int shear_y = 0;

    static BoundaryPolicy upward_front() {
        return BoundaryPolicy{SidePolicy::PeriodicWrap, SidePolicy::PeriodicWrap, SidePolicy::Clamp1,
                              SidePolicy::Clamp0};
    }
};

inline SidePolicy parse_side_policy(const std::string& s) {
    if (s == "clamp-0") return SidePolicy::Clamp0;
    if (s == "clamp-1") return SidePolicy::Clamp1;
    if (s == "periodic-wrap") return SidePolicy::PeriodicWrap;
    if (s == "linear-extrapolate") return SidePolicy::LinearExtrapolate;
    throw ConfigError("unknown boundary policy: " + s);
}

}  // namespace pfront
