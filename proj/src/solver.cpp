#include "pfront/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "pfront/util.hpp"

namespace pfront {

namespace {

// padded index helpers: pad arrays are (nx+2) x (ny+2), interior at [1..nx]x[1..ny]
struct Pad {
    int nx, ny, pny;
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * pny + j; }
};

void fill_ghosts(std::vector<double>& a, const Pad& p, const BoundaryPolicy& bc) {
    const int nx = p.nx, ny = p.ny;
    auto side_value = [](SidePolicy pol, double edge, double next) {
        switch (pol) {
            case SidePolicy::Clamp0: return 0.0;
            case SidePolicy::Clamp1: return 1.0;
            case SidePolicy::LinearExtrapolate: return 2.0 * edge - next;
            default: return 0.0;
        }
    };
    auto far01 = [](SidePolicy pol) { return pol == SidePolicy::Clamp1 ? 1.0 : 0.0; };
    // left/right (x sides); wrapped sides may shear in j
    for (int j = 1; j <= ny; ++j) {
        if (bc.left == SidePolicy::PeriodicWrap) {
            const int js = j + bc.shear_x;
            a[p.idx(0, j)] = (js >= 1 && js <= ny) ? a[p.idx(nx, js)] : far01(js < 1 ? bc.bottom : bc.top);
        } else {
            a[p.idx(0, j)] = side_value(bc.left, a[p.idx(1, j)], a[p.idx(2, j)]);
        }
        if (bc.right == SidePolicy::PeriodicWrap) {
            const int js = j - bc.shear_x;
            a[p.idx(nx + 1, j)] = (js >= 1 && js <= ny) ? a[p.idx(1, js)] : far01(js < 1 ? bc.bottom : bc.top);
        } else {
            a[p.idx(nx + 1, j)] = side_value(bc.right, a[p.idx(nx, j)], a[p.idx(nx - 1, j)]);
        }
    }
    // bottom/top (y sides); wrapped sides may shear in i
    for (int i = 1; i <= nx; ++i) {
        if (bc.bottom == SidePolicy::PeriodicWrap) {
            const int is = i + bc.shear_y;
            a[p.idx(i, 0)] = (is >= 1 && is <= nx) ? a[p.idx(is, ny)] : far01(is < 1 ? bc.left : bc.right);
        } else {
            a[p.idx(i, 0)] = side_value(bc.bottom, a[p.idx(i, 1)], a[p.idx(i, 2)]);
        }
        if (bc.top == SidePolicy::PeriodicWrap) {
            const int is = i - bc.shear_y;
            a[p.idx(i, ny + 1)] = (is >= 1 && is <= nx) ? a[p.idx(is, 1)] : far01(is < 1 ? bc.left : bc.right);
        } else {
            a[p.idx(i, ny + 1)] = side_value(bc.top, a[p.idx(i, ny)], a[p.idx(i, ny - 1)]);
        }
    }
}

void check_periodic_admissible(const Grid2D& g, const ReactionField& r, const BoundaryPolicy& bc) {
    auto needs = [](SidePolicy a, SidePolicy b) {
        if ((a == SidePolicy::PeriodicWrap) != (b == SidePolicy::PeriodicWrap))
            throw RejectedConfiguration("periodic-wrap must be set on both opposing sides");
        return a == SidePolicy::PeriodicWrap;
    };
    if (needs(bc.left, bc.right)) {
        const double w = g.nx * g.hx;  // wrap period of the window
        const double q = w / r.cell().L1;
        if (std::abs(q - std::llround(q)) > 1e-9 * std::max(1.0, q))
            throw RejectedConfiguration("periodic-wrap x: window must span whole cell periods");
    }
    if (needs(bc.bottom, bc.top)) {
        const double h = g.ny * g.hy;
        const double q = h / r.cell().L2;
        if (std::abs(q - std::llround(q)) > 1e-9 * std::max(1.0, q))
            throw RejectedConfiguration("periodic-wrap y: window must span whole cell periods");
    }
}

}  // namespace

double cfl_dt(const Grid2D& grid, const ReactionField& reaction, double safety) {
    return safety / (2.0 / (grid.hx * grid.hx) + 2.0 / (grid.hy * grid.hy) + reaction.lipschitz_M());
}

void advance(Field& state, const ReactionField& reaction, double dt, long steps,
             const BoundaryPolicy& bc, int threads) {
    const Grid2D& g = state.grid;
    g.validate();
    check_periodic_admissible(g, reaction, bc);
    const double M = reaction.lipschitz_M();
    if (dt * (2.0 / (g.hx * g.hx) + 2.0 / (g.hy * g.hy) + M) > 1.0 + 1e-12)
        throw RejectedConfiguration("dt violates the monotonicity (CFL) condition");
    if (steps <= 0) return;

    const int nx = g.nx, ny = g.ny;
    const Pad p{nx, ny, ny + 2};
    std::vector<double> a(static_cast<std::size_t>(nx + 2) * (ny + 2), 0.0);
    std::vector<double> b(a.size(), 0.0);
    for (int i = 0; i < nx; ++i)
        std::memcpy(&a[p.idx(i + 1, 1)], &state.values[static_cast<std::size_t>(i) * ny], sizeof(double) * ny);

    const double ax = dt / (g.hx * g.hx);
    const double ay = dt / (g.hy * g.hy);
    const bool cubic = reaction.is_cubic();

    // threshold values per grid point; the hot loop never calls the evaluator
    std::vector<double> theta;
    if (cubic) {
        theta.resize(static_cast<std::size_t>(nx) * ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) theta[static_cast<std::size_t>(i) * ny + j] = reaction.theta(g.x(i), g.y(j));
    }

    for (long s = 0; s < steps; ++s) {
        fill_ghosts(a, p, bc);
        auto row_block = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t bi = lo; bi < hi; ++bi) {
                const int i = static_cast<int>(bi) + 1;
                const double* am = &a[p.idx(i - 1, 0)];
                const double* ac = &a[p.idx(i, 0)];
                const double* ap = &a[p.idx(i + 1, 0)];
                double* out = &b[p.idx(i, 0)];
                if (cubic) {
                    const double* th = &theta[(bi)*ny];
                    for (int j = 1; j <= ny; ++j) {
                        const double u = ac[j];
                        const double lap = ax * (am[j] + ap[j] - 2.0 * u) + ay * (ac[j - 1] + ac[j + 1] - 2.0 * u);
                        const double t = th[j - 1];
                        double fv;
                        if (u >= 0.0) {
                            if (u <= 1.0)
                                fv = u * (1.0 - u) * (u - t);
                            else
                                fv = -(1.0 - t) * (u - 1.0);
                        } else {
                            fv = -t * u;
                        }
                        out[j] = u + lap + dt * fv;
                    }
                } else {
                    const double xg = g.x(static_cast<int>(bi));
                    for (int j = 1; j <= ny; ++j) {
                        const double u = ac[j];
                        const double lap = ax * (am[j] + ap[j] - 2.0 * u) + ay * (ac[j - 1] + ac[j + 1] - 2.0 * u);
                        out[j] = u + lap + dt * reaction.f(xg, g.y(j - 1), u);
                    }
                }
            }
        };
        parallel_for(static_cast<std::size_t>(nx), threads, row_block);
        a.swap(b);
        if ((s & 63) == 63 || s + 1 == steps) {
            for (int i = 1; i <= nx; ++i)
                for (int j = 1; j <= ny; ++j)
                    if (!std::isfinite(a[p.idx(i, j)]))
                        throw NumericalBlowup("NaN at step " + std::to_string(s + 1));
        }
    }

    for (int i = 0; i < nx; ++i)
        std::memcpy(&state.values[static_cast<std::size_t>(i) * ny], &a[p.idx(i + 1, 1)], sizeof(double) * ny);
    state.time += static_cast<double>(steps) * dt;
}

void recentre(Field& state, int k1, int k2, const ReactionField& reaction, const BoundaryPolicy& bc) {
    if (k1 == 0 && k2 == 0) return;
    const Grid2D& g = state.grid;
    const int si = k1 == 0 ? 0 : static_cast<int>(std::llround(k1 * reaction.cell().L1 / g.hx));
    const int sj = k2 == 0 ? 0 : static_cast<int>(std::llround(k2 * reaction.cell().L2 / g.hy));
    if (k1 != 0 && std::abs(si * g.hx - k1 * reaction.cell().L1) > 1e-9)
        throw RejectedConfiguration("recentre: hx does not divide L1");
    if (k2 != 0 && std::abs(sj * g.hy - k2 * reaction.cell().L2) > 1e-9)
        throw RejectedConfiguration("recentre: hy does not divide L2");
    if (std::abs(si) >= g.nx || std::abs(sj) >= g.ny) throw InvalidShift("shift reaches across the window");
    if ((k1 != 0 && bc.left == SidePolicy::PeriodicWrap && bc.shear_x != 0) ||
        (k2 != 0 && bc.bottom == SidePolicy::PeriodicWrap && bc.shear_y != 0))
        throw InvalidShift("cannot recentre along a shear-wrapped axis");

    auto far_value = [](SidePolicy pol, double edge) {
        switch (pol) {
            case SidePolicy::Clamp0: return 0.0;
            case SidePolicy::Clamp1: return 1.0;
            default: return edge;  // wrap handled separately; extrapolate uses edge value
        }
    };

    Field out(g);
    out.time = state.time;
    out.grid.x0 = g.x0 + k1 * reaction.cell().L1;
    out.grid.y0 = g.y0 + k2 * reaction.cell().L2;
    const bool wrapx = bc.left == SidePolicy::PeriodicWrap;
    const bool wrapy = bc.bottom == SidePolicy::PeriodicWrap;
    for (int i = 0; i < g.nx; ++i) {
        int src_i = i + si;
        bool out_x = false;
        if (wrapx) {
            src_i = ((src_i % g.nx) + g.nx) % g.nx;
        } else if (src_i < 0 || src_i >= g.nx) {
            out_x = true;
        }
        for (int j = 0; j < g.ny; ++j) {
            int src_j = j + sj;
            bool out_y = false;
            if (wrapy) {
                src_j = ((src_j % g.ny) + g.ny) % g.ny;
            } else if (src_j < 0 || src_j >= g.ny) {
                out_y = true;
            }
            double v;
            if (out_x) {
                const int ic = std::clamp(src_i, 0, g.nx - 1);
                const int jc = std::clamp(out_y ? std::clamp(src_j, 0, g.ny - 1) : src_j, 0, g.ny - 1);
                v = far_value(src_i < 0 ? bc.left : bc.right, state.at(ic, jc));
            } else if (out_y) {
                const int jc = std::clamp(src_j, 0, g.ny - 1);
                v = far_value(src_j < 0 ? bc.bottom : bc.top, state.at(src_i, jc));
            } else {
                v = state.at(src_i, src_j);
            }
            out.at(i, j) = v;
        }
    }
    state = std::move(out);
}

FrontPosition front_position(const Field& state, double ex, double ey, double level) {
    if (!(level > 0.0 && level < 1.0)) throw RejectedConfiguration("front level must lie in (0,1)");
    const Grid2D& g = state.grid;
    if (!(state.min_value() < level && state.max_value() > level))
        throw FrontLeftWindow("state does not attain values on both sides of the level");
    const double norm = std::hypot(ex, ey);
    ex /= norm;
    ey /= norm;

    const bool scan_y = std::abs(ey) >= std::abs(ex);
    const int nlines = scan_y ? g.nx : g.ny;
    const int nalong = scan_y ? g.ny : g.nx;
    FrontPosition fp;
    fp.lines = nlines;
    double sum = 0.0, mn = 1e300, mx = -1e300;
    std::vector<double> crossings;
    for (int l = 0; l < nlines; ++l) {
        crossings.clear();
        for (int k = 0; k + 1 < nalong; ++k) {
            const double u0 = scan_y ? state.at(l, k) : state.at(k, l);
            const double u1 = scan_y ? state.at(l, k + 1) : state.at(k + 1, l);
            if ((u0 - level) * (u1 - level) < 0.0 || (u0 == level && u1 != level)) {
                const double w = (level - u0) / (u1 - u0);
                crossings.push_back((k + w) * (scan_y ? g.hy : g.hx));
            }
        }
        if (crossings.empty()) continue;
        const double c = crossings[(crossings.size() - 1) / 2];  // median (lower)
        const double px = scan_y ? g.x(l) : g.x0 + c;
        const double py = scan_y ? g.y0 + c : g.y(l);
        const double proj = px * ex + py * ey;
        sum += proj;
        mn = std::min(mn, proj);
        mx = std::max(mx, proj);
        ++fp.crossed;
    }
    if (fp.crossed * 10 < fp.lines * 9)
        throw FrontLeftWindow("no level crossing on more than 10% of scan lines");
    fp.position = sum / fp.crossed;
    fp.spread = mx - mn;
    return fp;
}

}  // namespace pfront
