#include "pfront/pulsating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfront/solver.hpp"

namespace pfront {

namespace {

struct RunGeometry {
    Grid2D grid;
    BoundaryPolicy bc;
    bool axis_y = true;    // propagation tracked along y (else x)
    double ex = 0.0, ey = 1.0;  // commensurate direction actually simulated
};

// Snap the requested direction to a lattice-commensurate one: the slope of
// the front line becomes a ratio of whole cell periods, which lets the
// across-axis wrap exactly (with a whole-period shear). The angular snap is
// tiny (max denominator 12) and is reported via the returned direction.
RunGeometry make_geometry(const ReactionField& r, double ex, double ey, const PulsatingConfig& cfg) {
    RunGeometry geo;
    geo.axis_y = std::abs(ey) >= std::abs(ex);
    const double L1 = r.cell().L1, L2 = r.cell().L2;
    const double h = cfg.h;
    const int pppx = points_per_period(h, L1);
    const int pppy = points_per_period(h, L2);

    const double e_along = geo.axis_y ? ey : ex;
    const double e_across = geo.axis_y ? ex : ey;
    const double L_along = geo.axis_y ? L2 : L1;
    const double L_across = geo.axis_y ? L1 : L2;
    const int sgn = e_along >= 0 ? 1 : -1;

    // best rational approximation of the across/along slope ratio:
    // e_across / e_along = k L_along / (m L_across)
    const double rho = e_across / e_along;
    int bk = 0, bm = 1;
    double berr = 1e300;
    for (int m = 1; m <= cfg.max_denominator; ++m) {
        const int k = static_cast<int>(std::lround(rho * m * L_across / L_along));
        const double err = std::abs(rho - k * L_along / (m * L_across));
        if (err < berr - 1e-15) {
            berr = err;
            bk = k;
            bm = m;
        }
        if (berr * m < 1e-4) break;  // prefer small windows once the snap is negligible
    }
    // commensurate direction
    const double ca = bk * L_along, cl = bm * L_across;  // across/along components (unnormalized)
    const double nn = std::hypot(ca, cl);
    const double e_ac = sgn * ca / nn, e_al = sgn * cl / nn;
    if (geo.axis_y) {
        geo.ex = e_ac;
        geo.ey = e_al;
    } else {
        geo.ex = e_al;
        geo.ey = e_ac;
    }

    const int nrep = std::max(1, static_cast<int>(std::ceil(cfg.window_across / (bm * L_across))));
    const double across = nrep * bm * L_across;
    const double tilt = std::abs(bk) * nrep * L_along;  // front-line drop across the window
    const double along0 = std::max(cfg.window_along, tilt + 2.0 * cfg.margin_along);
    const int nper_along = static_cast<int>(std::ceil(along0 / L_along));
    const double along = nper_along * L_along;

    // wrap identification: u(across + W, along) = u(across, along + shear*h)
    const int shear = -bk * nrep * (geo.axis_y ? pppy : pppx);

    Grid2D g;
    const int n_across = static_cast<int>(std::lround(across / h));
    const int n_along = static_cast<int>(std::lround(along / h)) + 1;
    g.hx = h;
    g.hy = h;
    if (geo.axis_y) {
        g.nx = n_across;
        g.ny = n_along;
        g.x0 = -std::floor(across / 2.0 / h) * h;
        g.y0 = -std::floor(along / 2.0 / h) * h;
        geo.bc.left = SidePolicy::PeriodicWrap;
        geo.bc.right = SidePolicy::PeriodicWrap;
        geo.bc.shear_x = shear;
        geo.bc.bottom = sgn > 0 ? SidePolicy::Clamp1 : SidePolicy::Clamp0;
        geo.bc.top = sgn > 0 ? SidePolicy::Clamp0 : SidePolicy::Clamp1;
    } else {
        g.ny = n_across;
        g.nx = n_along;
        g.y0 = -std::floor(across / 2.0 / h) * h;
        g.x0 = -std::floor(along / 2.0 / h) * h;
        geo.bc.bottom = SidePolicy::PeriodicWrap;
        geo.bc.top = SidePolicy::PeriodicWrap;
        geo.bc.shear_y = shear;
        geo.bc.left = sgn > 0 ? SidePolicy::Clamp1 : SidePolicy::Clamp0;
        geo.bc.right = sgn > 0 ? SidePolicy::Clamp0 : SidePolicy::Clamp1;
    }
    geo.grid = g;
    return geo;
}

double along_center_of_front(const Field& f, const RunGeometry& geo, const FrontPosition& fp) {
    // mean along-axis coordinate of the crossings, recovered from the
    // projection (every line crosses, so the across-mean is the window center)
    const Grid2D& g = f.grid;
    if (geo.axis_y) {
        const double xc = 0.5 * (g.x(0) + g.x(g.nx - 1));
        return (fp.position - xc * geo.ex) / geo.ey;
    }
    const double yc = 0.5 * (g.y(0) + g.y(g.ny - 1));
    return (fp.position - yc * geo.ey) / geo.ex;
}

}  // namespace

double PulsatingFront::sample(double xi, double x, double y) const {
    const double v = profile.value(xi, x, y);
    return std::clamp(v, 1e-12, 1.0 - 1e-12);
}

double PulsatingFront::sample_dxi(double xi, double x, double y) const {
    return profile.d(1, 0, 0, xi, x, y);
}

double sample_profile(const PulsatingFront& front, double xi, double x, double y) {
    return front.sample(xi, x, y);
}

void commensurate_direction(const ReactionField& reaction, const PulsatingConfig& cfg, double& ex,
                            double& ey) {
    const double nrm = std::hypot(ex, ey);
    if (!(nrm > 0)) throw RejectedConfiguration("direction must be nonzero");
    RunGeometry geo = make_geometry(reaction, ex / nrm, ey / nrm, cfg);
    ex = geo.ex;
    ey = geo.ey;
}

PulsatingFront compute_pulsating_front(const ReactionField& reaction, double ex, double ey,
                                       const PulsatingConfig& cfg) {
    const double nrm = std::hypot(ex, ey);
    if (!(nrm > 0)) throw RejectedConfiguration("direction must be nonzero");
    ex /= nrm;
    ey /= nrm;

    RunGeometry geo = make_geometry(reaction, ex, ey, cfg);
    ex = geo.ex;  // lattice-commensurate direction actually simulated
    ey = geo.ey;
    Field f(geo.grid);
    const double sq2 = std::sqrt(2.0);
    f.fill_with([&](double x, double y) { return 1.0 / (1.0 + std::exp((x * ex + y * ey) / sq2)); });

    const double dt = cfl_dt(geo.grid, reaction, cfg.cfl_safety);
    const long chunk = std::max<long>(1, std::lround(cfg.sample_dt / dt));
    const double L_along = geo.axis_y ? reaction.cell().L2 : reaction.cell().L1;

    std::vector<double> ts, ps;
    const double t_fit_end = cfg.burn_in + cfg.fit_span;
    const double t_end = t_fit_end + cfg.bin_span;

    const int ncx = points_per_period(cfg.h, reaction.cell().L1);
    const int ncy = points_per_period(cfg.h, reaction.cell().L2);
    const int nb = static_cast<int>(std::lround(2.0 * cfg.xi_halfwidth / cfg.bin_width));
    std::vector<double> bin_sum;
    std::vector<std::uint32_t> bin_cnt;
    double c_bin = 0.0;  // speed defining the xi coordinate while binning
    bool binning = false;

    auto bin_pass = [&](const Field& field) {
        const Grid2D& g = field.grid;
        const double t = field.time;
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i);
            const long gix = std::lround(x / g.hx);
            const int icx = static_cast<int>(((gix % ncx) + ncx) % ncx);
            for (int j = 0; j < g.ny; ++j) {
                const double y = g.y(j);
                const double xi = x * ex + y * ey - c_bin * t;
                const int k = static_cast<int>(std::floor((xi + cfg.xi_halfwidth) / cfg.bin_width));
                if (k < 0 || k >= nb) continue;
                const long giy = std::lround(y / g.hy);
                const int icy = static_cast<int>(((giy % ncy) + ncy) % ncy);
                const std::size_t idx = (static_cast<std::size_t>(k) * ncx + icx) * ncy + icy;
                bin_sum[idx] += field.at(i, j);
                bin_cnt[idx] += 1;
            }
        }
    };

    while (f.time < t_end - 0.5 * dt) {
        advance(f, reaction, dt, chunk, geo.bc, cfg.threads);
        FrontPosition fp;
        try {
            fp = front_position(f, ex, ey, 0.5);
        } catch (const FrontLeftWindow&) {
            throw PossiblyNoFront("front lost while evolving; the medium may admit no pulsating front");
        }
        ts.push_back(f.time);
        ps.push_back(fp.position);
        if (binning) bin_pass(f);

        // keep the front centered by whole-period shifts along the axis
        const double along_c = along_center_of_front(f, geo, fp);
        const double window_c =
            geo.axis_y ? (f.grid.y0 + 0.5 * f.grid.height()) : (f.grid.x0 + 0.5 * f.grid.width());
        const int k = static_cast<int>(std::floor((along_c - window_c) / L_along + 0.5));
        if (k != 0) {
            if (geo.axis_y)
                recentre(f, 0, k, reaction, geo.bc);
            else
                recentre(f, k, 0, reaction, geo.bc);
        }

        if (!binning && f.time >= t_fit_end - 0.5 * dt) {
            std::vector<double> tw, pw;
            for (std::size_t i = 0; i < ts.size(); ++i)
                if (ts[i] > cfg.burn_in) {
                    tw.push_back(ts[i]);
                    pw.push_back(ps[i]);
                }
            if (tw.size() < 8) throw SpeedUnresolved("too few samples in the fit span");
            c_bin = fit_line(tw, pw).slope;
            bin_sum.assign(static_cast<std::size_t>(nb) * ncx * ncy, 0.0);
            bin_cnt.assign(bin_sum.size(), 0);
            binning = true;
        }
    }

    std::vector<double> tw, pw;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] > cfg.burn_in) {
            tw.push_back(ts[i]);
            pw.push_back(ps[i]);
        }
    const double c = fit_line(tw, pw).slope;
    double wmin = 1e300, wmax = -1e300;
    const std::size_t wn = tw.size() / cfg.fit_windows;
    if (wn < 4) throw SpeedUnresolved("too few samples for windowed confidence");
    for (int w = 0; w < cfg.fit_windows; ++w) {
        std::vector<double> twi(tw.begin() + w * wn, tw.begin() + (w + 1) * wn);
        std::vector<double> pwi(pw.begin() + w * wn, pw.begin() + (w + 1) * wn);
        const double s = fit_line(twi, pwi).slope;
        wmin = std::min(wmin, s);
        wmax = std::max(wmax, s);
    }
    if (std::abs(c) < cfg.speed_floor)
        throw PossiblyNoFront("front speed below resolution; (H2) may fail for this medium");
    const double ci = (wmax - wmin) / std::abs(c);
    if (ci > cfg.ci_tol)
        throw SpeedUnresolved("speed confidence interval " + fmt_double(ci) + " exceeds gate");

    ProfileTableData table;
    table.nxi = nb;
    table.nx = ncx;
    table.ny = ncy;
    table.xi.resize(nb);
    for (int k = 0; k < nb; ++k) table.xi[k] = -cfg.xi_halfwidth + (k + 0.5) * cfg.bin_width;
    table.values.assign(bin_sum.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < bin_sum.size(); ++i)
        if (bin_cnt[i] > 0) table.values[i] = bin_sum[i] / bin_cnt[i];

    return refit_front(reaction, ex, ey, c, ci, table, cfg);
}

PulsatingFront refit_front(const ReactionField& reaction, double ex, double ey, double speed,
                           double speed_ci, const ProfileTableData& table,
                           const PulsatingConfig& cfg) {
    const double nrm = std::hypot(ex, ey);
    ex /= nrm;
    ey /= nrm;
    PulsatingFront pf;
    pf.ex = ex;
    pf.ey = ey;
    pf.speed = speed;
    pf.speed_ci = speed_ci;
    pf.grid_h = cfg.h;
    pf.table = table;
    pf.profile = fit_profile_model(table.xi, table.values, table.nx, table.ny, reaction.cell().L1,
                                   reaction.cell().L2, cfg.fourier_order, cfg.knot_spacing,
                                   cfg.tail_floor);

    // normalization shift: U(0,0,0) = 1/2
    double lo = pf.profile.xi_lo(), hi = pf.profile.xi_hi();
    const double ulo = pf.profile.value(lo, 0.0, 0.0), uhi = pf.profile.value(hi, 0.0, 0.0);
    if (!(ulo > 0.5 && uhi < 0.5))
        throw DiagnosticFailure("profile does not straddle the half level at the cell origin");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pf.profile.value(mid, 0.0, 0.0) > 0.5)
            lo = mid;
        else
            hi = mid;
    }
    pf.profile.set_shift(pf.profile.shift() + 0.5 * (lo + hi));

    // tail rates by log-linear regression on the averaged binned tails
    const int ncell = table.nx * table.ny;
    auto mean_at = [&](int k) {
        double s = 0.0;
        for (int c = 0; c < ncell; ++c) {
            const double v = table.values[static_cast<std::size_t>(k) * ncell + c];
            if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
            s += v;
        }
        return s / ncell;
    };
    std::vector<double> xs, ys;
    for (int k = 0; k < table.nxi; ++k) {
        const double m = mean_at(k);
        if (std::isfinite(m) && m > 0.002 && m < 0.05) {
            xs.push_back(table.xi[k]);
            ys.push_back(std::log(m));
        }
    }
    pf.mu1 = xs.size() >= 4 ? -fit_line(xs, ys).slope : 0.0;
    xs.clear();
    ys.clear();
    for (int k = 0; k < table.nxi; ++k) {
        const double m = mean_at(k);
        if (std::isfinite(m) && m > 0.95 && m < 0.998) {
            xs.push_back(table.xi[k]);
            ys.push_back(std::log(1.0 - m));
        }
    }
    pf.mu2 = xs.size() >= 4 ? fit_line(xs, ys).slope : 0.0;

    double r = 1e300;
    const double C = cfg.slope_halfwidth;
    for (int k = 0; k <= 100; ++k) {
        const double xi = -C + 2.0 * C * k / 100.0;
        for (int i = 0; i < table.nx; ++i)
            for (int j = 0; j < table.ny; ++j) {
                const double x = i * reaction.cell().L1 / table.nx;
                const double y = j * reaction.cell().L2 / table.ny;
                r = std::min(r, -pf.profile.d(1, 0, 0, xi, x, y));
            }
    }
    pf.slope_floor_r = r;
    return pf;
}

TailSlopeReport tail_and_slope_report(const PulsatingFront& front, double C) {
    if (front.xi_max() < C + 5.0 || front.xi_min() > -(C + 5.0))
        throw RejectedConfiguration("profile table does not cover |xi| <= C + 5");
    TailSlopeReport rep;
    rep.mu1 = front.mu1;
    rep.mu2 = front.mu2;
    double r = 1e300;
    const int nx = front.table.nx, ny = front.table.ny;
    for (int k = 0; k <= 200; ++k) {
        const double xi = -C + 2.0 * C * k / 200.0;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const double d = 1e-3;
                const double fd =
                    (front.profile.value(xi + d, static_cast<double>(i) / nx, static_cast<double>(j) / ny) -
                     front.profile.value(xi - d, static_cast<double>(i) / nx, static_cast<double>(j) / ny)) /
                    (2 * d);
                r = std::min(r, -fd);
            }
    }
    rep.r = r;
    if (!(rep.mu1 > 0.0) || !(rep.mu2 > 0.0) || !(rep.r > 0.0))
        throw DiagnosticFailure("nonpositive tail rate or slope floor: profile not converged");
    return rep;
}

double elliptic_residual_norm(const PulsatingFront& front, const ReactionField& reaction,
                              int nsamples, Rng& rng) {
    double ss = 0.0;
    const double lo = front.xi_min() + 0.5, hi = front.xi_max() - 0.5;
    for (int n = 0; n < nsamples; ++n) {
        const double xi = rng.uniform(lo, hi);
        const double x = rng.uniform(0.0, reaction.cell().L1);
        const double y = rng.uniform(0.0, reaction.cell().L2);
        const auto& P = front.profile;
        const double res = front.speed * P.d(1, 0, 0, xi, x, y) + P.d(2, 0, 0, xi, x, y) +
                           2.0 * (P.d(1, 1, 0, xi, x, y) * front.ex + P.d(1, 0, 1, xi, x, y) * front.ey) +
                           P.d(0, 2, 0, xi, x, y) + P.d(0, 0, 2, xi, x, y) +
                           reaction.f(x, y, P.value(xi, x, y));
        ss += res * res;
    }
    return std::sqrt(ss / nsamples);
}

DirectionField::DirectionField(std::vector<double> angles, std::vector<PulsatingFront> fronts)
    : angles_(std::move(angles)), fronts_(std::move(fronts)) {
    if (angles_.size() != fronts_.size() || angles_.size() < 2)
        throw RejectedConfiguration("direction field needs matching angle/front lists");
    for (std::size_t i = 1; i < angles_.size(); ++i)
        if (!(angles_[i] > angles_[i - 1]))
            throw RejectedConfiguration("direction field angles must be strictly sorted");

    // Fritsch-Carlson monotone cubic slopes for c(theta)
    const std::size_t n = angles_.size();
    std::vector<double> d(n - 1), hs(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        hs[i] = angles_[i + 1] - angles_[i];
        d[i] = (fronts_[i + 1].speed - fronts_[i].speed) / hs[i];
    }
    slopes_.assign(n, 0.0);
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            slopes_[i] = 0.0;
        } else {
            const double w1 = 2.0 * hs[i] + hs[i - 1];
            const double w2 = hs[i] + 2.0 * hs[i - 1];
            slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
}

int DirectionField::panel(double theta) const {
    if (!covers(theta)) throw OutOfAtlas("direction angle outside the sampled arc");
    auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
    int k = static_cast<int>(it - angles_.begin()) - 1;
    return std::clamp(k, 0, static_cast<int>(angles_.size()) - 2);
}

double DirectionField::speed(double theta) const {
    const int k = panel(theta);
    const double h = angles_[k + 1] - angles_[k];
    const double t = (theta - angles_[k]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * fronts_[k].speed + h * h10 * slopes_[k] + h01 * fronts_[k + 1].speed +
           h * h11 * slopes_[k + 1];
}

double DirectionField::dspeed(double theta) const {
    const int k = panel(theta);
    const double h = angles_[k + 1] - angles_[k];
    const double t = (theta - angles_[k]) / h;
    const double d00 = 6 * t * (t - 1) / h;
    const double d10 = (1 - t) * (1 - 3 * t);
    const double d01 = -6 * t * (t - 1) / h;
    const double d11 = t * (3 * t - 2);
    return d00 * fronts_[k].speed + d10 * slopes_[k] + d01 * fronts_[k + 1].speed + d11 * slopes_[k + 1];
}

double DirectionField::profile_d(int dxi, int dx, int dy, double theta, double xi, double x,
                                 double y) const {
    const int k = panel(theta);
    const double w = (theta - angles_[k]) / (angles_[k + 1] - angles_[k]);
    return (1.0 - w) * fronts_[k].profile.d(dxi, dx, dy, xi, x, y) +
           w * fronts_[k + 1].profile.d(dxi, dx, dy, xi, x, y);
}

DirectionField build_direction_field(const ReactionField& reaction, const std::vector<double>& angles,
                                     const PulsatingConfig& cfg) {
    if (angles.size() < 5) throw RejectedConfiguration("direction field needs >= 5 angles");
    std::vector<PulsatingFront> fronts(angles.size());
    std::exception_ptr failure;
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                PulsatingConfig c = cfg;
                c.threads = 1;
                fronts[i] = compute_pulsating_front(reaction, std::cos(angles[i]), std::sin(angles[i]), c);
            } catch (...) {
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (cfg.threads > 1)
        parallel_for(angles.size(), cfg.threads, work);
    else
        work(0, angles.size());
    if (failure) std::rethrow_exception(failure);
    // node on the lattice-snapped angles the fronts actually used
    std::vector<double> actual(angles.size());
    for (std::size_t i = 0; i < fronts.size(); ++i) actual[i] = std::atan2(fronts[i].ey, fronts[i].ex);
    return DirectionField(actual, std::move(fronts));
}

}  // namespace pfront
