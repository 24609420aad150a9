#include "pfront/profile_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace pfront {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// uniform cubic B-spline segment basis and derivatives on t in [0,1)
void bspline_basis(double t, int order, double b[4]) {
    const double t2 = t * t, t3 = t2 * t;
    switch (order) {
        case 0:
            b[0] = (1 - 3 * t + 3 * t2 - t3) / 6.0;
            b[1] = (4 - 6 * t2 + 3 * t3) / 6.0;
            b[2] = (1 + 3 * t + 3 * t2 - 3 * t3) / 6.0;
            b[3] = t3 / 6.0;
            break;
        case 1:
            b[0] = (-3 + 6 * t - 3 * t2) / 6.0;
            b[1] = (-12 * t + 9 * t2) / 6.0;
            b[2] = (3 + 6 * t - 9 * t2) / 6.0;
            b[3] = 3 * t2 / 6.0;
            break;
        default:
            b[0] = (6 - 6 * t) / 6.0;
            b[1] = (-12 + 18 * t) / 6.0;
            b[2] = (6 - 18 * t) / 6.0;
            b[3] = 6 * t / 6.0;
            break;
    }
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

BSpline1D BSpline1D::fit(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::vector<double>& ws, double lo, double hi, double knot_spacing,
                         double ridge) {
    if (xs.size() != ys.size() || xs.size() < 8) throw DiagnosticFailure("spline fit: too few samples");
    BSpline1D s;
    s.lo_ = lo;
    s.hi_ = hi;
    const int m = std::max(2, static_cast<int>(std::ceil((hi - lo) / knot_spacing)));
    s.dx_ = (hi - lo) / m;
    const int ncoef = m + 3;

    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(ncoef, ncoef);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ncoef);
    double b[4];
    for (std::size_t n = 0; n < xs.size(); ++n) {
        const double x = xs[n];
        if (x < lo || x > hi) continue;
        const double w = ws.empty() ? 1.0 : ws[n];
        if (w <= 0.0) continue;
        double u = (x - lo) / s.dx_;
        int k = std::min(static_cast<int>(u), m - 1);
        bspline_basis(u - k, 0, b);
        for (int a = 0; a < 4; ++a) {
            rhs[k + a] += w * b[a] * ys[n];
            for (int c = 0; c < 4; ++c) N(k + a, k + c) += w * b[a] * b[c];
        }
    }
    for (int a = 0; a < ncoef; ++a) N(a, a) += ridge;
    // mild second-difference penalty keeps weakly supported control points tame
    for (int a = 0; a + 2 < ncoef; ++a) {
        const double lam = 1e-7;
        N(a, a) += lam;
        N(a + 1, a + 1) += 4 * lam;
        N(a + 2, a + 2) += lam;
        N(a, a + 1) += -2 * lam;
        N(a + 1, a) += -2 * lam;
        N(a + 1, a + 2) += -2 * lam;
        N(a + 2, a + 1) += -2 * lam;
        N(a, a + 2) += lam;
        N(a + 2, a) += lam;
    }
    Eigen::VectorXd c = N.ldlt().solve(rhs);
    s.coef_.assign(c.data(), c.data() + ncoef);
    return s;
}

double BSpline1D::eval_inside(double x, int order) const {
    const int m = static_cast<int>(coef_.size()) - 3;
    double u = (x - lo_) / dx_;
    int k = std::clamp(static_cast<int>(std::floor(u)), 0, m - 1);
    double b[4];
    bspline_basis(u - k, order, b);
    double v = 0.0;
    for (int a = 0; a < 4; ++a) v += coef_[k + a] * b[a];
    const double scale = order == 0 ? 1.0 : (order == 1 ? 1.0 / dx_ : 1.0 / (dx_ * dx_));
    return v * scale;
}

double BSpline1D::value(double x) const {
    if (x < lo_) return eval_inside(lo_, 0) + eval_inside(lo_, 1) * (x - lo_);
    if (x > hi_) return eval_inside(hi_, 0) + eval_inside(hi_, 1) * (x - hi_);
    return eval_inside(x, 0);
}

double BSpline1D::deriv1(double x) const {
    if (x < lo_) return eval_inside(lo_, 1);
    if (x > hi_) return eval_inside(hi_, 1);
    return eval_inside(x, 1);
}

double BSpline1D::deriv2(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    return eval_inside(x, 2);
}

void CellFourier::eval(double x, double y, int ax, int ay, double* out) const {
    const int n = 2 * order_ + 1;
    double fx[16], fy[16];
    auto fill = [](double coord, double L, int order, int d, double* f) {
        const double w = kTwoPi / L;
        f[0] = d == 0 ? 1.0 : 0.0;
        for (int k = 1; k <= order; ++k) {
            const double a = w * k;
            const double c = std::cos(a * coord), s = std::sin(a * coord);
            double ck, sk;
            switch (d) {
                case 0: ck = c; sk = s; break;
                case 1: ck = -a * s; sk = a * c; break;
                default: ck = -a * a * c; sk = -a * a * s; break;
            }
            f[2 * k - 1] = ck;
            f[2 * k] = sk;
        }
    };
    fill(x, L1_, order_, ax, fx);
    fill(y, L2_, order_, ay, fy);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out[a * n + b] = fx[a] * fy[b];
}

double ProfileModel::zeta(int dxi, int dx, int dy, double q, double x, double y) const {
    const int nm = basis_.count();
    double t[81];
    basis_.eval(x, y, dx, dy, t);
    double v = 0.0;
    for (int m = 0; m < nm; ++m) {
        const double sm = dxi == 0 ? splines_[m].value(q)
                                   : (dxi == 1 ? splines_[m].deriv1(q) : splines_[m].deriv2(q));
        v += sm * t[m];
    }
    return v;
}

double ProfileModel::d(int dxi, int dx, int dy, double xi, double x, double y) const {
    const double q = xi + shift_;
    const int total = dxi + dx + dy;
    const double z = zeta(0, 0, 0, q, x, y);
    const double U = logistic(z);
    if (total == 0) return U;
    const double s1 = U * (1.0 - U);  // s'(z)
    if (total == 1) return s1 * zeta(dxi, dx, dy, q, x, y);
    const double s2 = s1 * (1.0 - 2.0 * U);  // s''(z)
    // split the second-order request into its two first-order factors
    double za, zb;
    if (dxi == 2) {
        za = zb = zeta(1, 0, 0, q, x, y);
    } else if (dx == 2) {
        za = zb = zeta(0, 1, 0, q, x, y);
    } else if (dy == 2) {
        za = zb = zeta(0, 0, 1, q, x, y);
    } else if (dxi == 1 && dx == 1) {
        za = zeta(1, 0, 0, q, x, y);
        zb = zeta(0, 1, 0, q, x, y);
    } else if (dxi == 1 && dy == 1) {
        za = zeta(1, 0, 0, q, x, y);
        zb = zeta(0, 0, 1, q, x, y);
    } else {
        za = zeta(0, 1, 0, q, x, y);
        zb = zeta(0, 0, 1, q, x, y);
    }
    const double zab = zeta(dxi, dx, dy, q, x, y);
    return s2 * za * zb + s1 * zab;
}

ProfileModel fit_profile_model(const std::vector<double>& xi, const std::vector<double>& tab,
                               int ncx, int ncy, double L1, double L2, int order,
                               double knot_spacing, double tail_floor) {
    const int nb = static_cast<int>(xi.size());
    const int ncell = ncx * ncy;
    if (nb < 16) throw DiagnosticFailure("profile fit: too few xi bins");

    ProfileModel pm;
    pm.basis_ = CellFourier(order, L1, L2);
    const int nm = pm.basis_.count();

    std::vector<double> T(static_cast<std::size_t>(ncell) * nm);
    std::vector<double> Tnorm(nm, 0.0);
    {
        std::vector<double> t(nm);
        for (int i = 0; i < ncx; ++i)
            for (int j = 0; j < ncy; ++j) {
                pm.basis_.eval(i * L1 / ncx, j * L2 / ncy, 0, 0, t.data());
                for (int m = 0; m < nm; ++m) {
                    T[static_cast<std::size_t>(i * ncy + j) * nm + m] = t[m];
                    Tnorm[m] += t[m] * t[m];
                }
            }
    }

    // per-bin logit projections; bins outside the trusted band are dropped
    const double ucut = std::max(3e-5, tail_floor / 25.0);
    std::vector<double> proj(static_cast<std::size_t>(nb) * nm,
                             std::numeric_limits<double>::quiet_NaN());
    std::vector<double> wbin(nb, 0.0);
    std::vector<char> bin_ok(nb, 0);
    for (int k = 0; k < nb; ++k) {
        double mean = 0.0;
        bool ok = true;
        for (int c = 0; c < ncell && ok; ++c) {
            const double v = tab[static_cast<std::size_t>(k) * ncell + c];
            if (!std::isfinite(v)) ok = false;
            mean += v;
        }
        mean /= ncell;
        if (!ok || mean < ucut || mean > 1.0 - ucut) continue;
        bin_ok[k] = 1;
        wbin[k] = mean * (1.0 - mean);
        wbin[k] *= wbin[k];  // logit-noise weighting
        for (int m = 0; m < nm; ++m) {
            double acc = 0.0;
            for (int c = 0; c < ncell; ++c) {
                const double v =
                    std::clamp(tab[static_cast<std::size_t>(k) * ncell + c], 1e-7, 1.0 - 1e-7);
                acc += std::log(v / (1.0 - v)) * T[static_cast<std::size_t>(c) * nm + m];
            }
            proj[static_cast<std::size_t>(k) * nm + m] = acc / Tnorm[m];
        }
    }

    // largest valid contiguous run around the half-level bin
    int kc = -1;
    double best = 1e300;
    for (int k = 0; k < nb; ++k) {
        if (!bin_ok[k]) continue;
        const double dev = std::abs(proj[static_cast<std::size_t>(k) * nm]);
        if (dev < best) {
            best = dev;
            kc = k;
        }
    }
    if (kc < 0) throw DiagnosticFailure("profile fit: no populated bins");
    int klo = kc, khi = kc;
    while (klo > 0 && bin_ok[klo - 1]) --klo;
    while (khi + 1 < nb && bin_ok[khi + 1]) ++khi;
    if (khi - klo < 12) throw DiagnosticFailure("profile fit: resolved span too short");

    pm.lo_ = xi[klo];
    pm.hi_ = xi[khi];

    pm.splines_.resize(nm);
    std::vector<double> xs, ys, ws;
    for (int m = 0; m < nm; ++m) {
        xs.clear();
        ys.clear();
        ws.clear();
        for (int k = klo; k <= khi; ++k) {
            if (!bin_ok[k]) continue;
            xs.push_back(xi[k]);
            ys.push_back(proj[static_cast<std::size_t>(k) * nm + m]);
            ws.push_back(wbin[k]);
        }
        pm.splines_[m] = BSpline1D::fit(xs, ys, ws, pm.lo_, pm.hi_, knot_spacing);
    }

    pm.mu_r_ = std::max(0.0, -pm.splines_[0].deriv1(pm.hi_));
    pm.mu_l_ = std::max(0.0, -pm.splines_[0].deriv1(pm.lo_));
    return pm;
}

}  // namespace pfront
