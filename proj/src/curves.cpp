#include "pfront/curves.hpp"

#include <algorithm>
#include <cmath>

namespace pfront {

namespace {

// quintic smoothstep and derivatives on [0,1]
double smooth5(double t, int order) {
    switch (order) {
        case 0: return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
        case 1: return t * t * (30.0 + t * (-60.0 + 30.0 * t));
        case 2: return t * (60.0 + t * (-180.0 + 120.0 * t));
        default: return 60.0 + t * (-360.0 + 360.0 * t);
    }
}

double sech(double x) { return 1.0 / std::cosh(x); }

// d^n/dx^n sech(x), n <= 3
double sech_d(double x, int order) {
    const double s = sech(x), t = std::tanh(x);
    switch (order) {
        case 0: return s;
        case 1: return -s * t;
        case 2: return s * (1.0 - 2.0 * s * s);
        default: return -s * t * (1.0 - 6.0 * s * s);
    }
}

}  // namespace

double InterfaceCurve::base(double x, int order) const {
    // slope ramps from bm1 to bm2 over [-w, w] through the quintic smoothstep;
    // the slope-domain blend keeps the curvature strictly one-signed, which a
    // value-domain blend of line and arc does not. Both asymptote lines pass
    // through the origin.
    const double W = w_;
    if (x <= -W) {
        if (order == 0) return bm1_ * x;
        if (order == 1) return bm1_;
        return 0.0;
    }
    if (x >= W) {
        if (order == 0) return bm2_ * x;
        if (order == 1) return bm2_;
        return 0.0;
    }
    const double t = (x + W) / (2.0 * W);
    const double dm = bm2_ - bm1_;
    switch (order) {
        case 0: {
            const double T = t * t * t * t * (2.5 + t * (-3.0 + t));  // integral of smooth5
            return bm1_ * x + dm * 2.0 * W * T;
        }
        case 1: return bm1_ + dm * smooth5(t, 0);
        case 2: return dm * smooth5(t, 1) / (2.0 * W);
        default: return dm * smooth5(t, 2) / (4.0 * W * W);
    }
}

double InterfaceCurve::d(double x, int order) const {
    return sign_ * (base(x, order) + rho_ * sech_d(x, order));
}

double InterfaceCurve::dev_left(double x) const {
    // base'(x) - m1 without cancellation
    double ramp;
    if (x <= -w_)
        ramp = 0.0;
    else if (x >= w_)
        ramp = bm2_ - bm1_;
    else
        ramp = (bm2_ - bm1_) * smooth5((x + w_) / (2.0 * w_), 0);
    return ramp + rho_ * sech_d(x, 1);
}

double InterfaceCurve::dev_right(double x) const {
    double ramp;
    if (x <= -w_)
        ramp = bm2_ - bm1_;
    else if (x >= w_)
        ramp = 0.0;
    else
        ramp = (bm2_ - bm1_) * (1.0 - smooth5((x + w_) / (2.0 * w_), 0));
    return ramp - rho_ * sech_d(x, 1);
}

InterfaceCurve build_interface_curve(CurveKind kind, double a1, double a2, double rho,
                                     double radius, double moll_frac) {
    if (!(rho >= 0.0)) throw InvalidCurve("sech amplitude must be nonnegative");
    if (!(radius > 0.1)) throw InvalidCurve("incircle radius too small");
    InterfaceCurve c;
    c.kind_ = kind;
    c.r_ = radius;

    double m1, m2;  // slopes of the internal convex base (m1 < m2)
    switch (kind) {
        case CurveKind::ConvexV: {
            const double alpha = a1, beta = a2;
            if (!(0 < alpha && alpha < beta && beta < 3.14159265358979323846))
                throw InvalidCurve("convex curve needs 0 < alpha < beta < pi");
            m1 = -1.0 / std::tan(alpha);
            m2 = -1.0 / std::tan(beta);
            c.sign_ = 1.0;
            c.ang_left_ = alpha;
            c.ang_right_ = beta;
            break;
        }
        case CurveKind::ConcaveLeft: {
            const double alpha = a1, alpha1 = a2;
            if (!(0 < alpha1 && alpha1 < alpha && alpha < 3.14159265358979323846))
                throw InvalidCurve("concave-left curve needs 0 < alpha1 < alpha < pi");
            m1 = 1.0 / std::tan(alpha);   // -(-cot alpha)
            m2 = 1.0 / std::tan(alpha1);  // -(-cot alpha1)
            c.sign_ = -1.0;
            c.ang_left_ = alpha;
            c.ang_right_ = alpha1;
            break;
        }
        default: {
            const double beta = a1, beta1 = a2;
            if (!(0 < beta && beta < beta1 && beta1 < 3.14159265358979323846))
                throw InvalidCurve("concave-right curve needs 0 < beta < beta1 < pi");
            m1 = 1.0 / std::tan(beta1);
            m2 = 1.0 / std::tan(beta);
            c.sign_ = -1.0;
            c.ang_left_ = beta1;
            c.ang_right_ = beta;
            break;
        }
    }
    if (!(m1 < m2)) throw InvalidCurve("degenerate asymptote slopes");
    c.bm1_ = m1;
    c.bm2_ = m2;
    c.mL_ = c.sign_ * m1;
    c.mR_ = c.sign_ * m2;

    // incircle of y = m1 x and y = m2 x sizes the transition region: the ramp
    // halfwidth is the tangency halfspread, floored so the straight pieces
    // start beyond the inflection of sech (|x| ~ 0.881), where the sech term
    // has the curvature sign that keeps psi strictly convex/concave
    const double s1 = std::sqrt(m1 * m1 + 1.0), s2 = std::sqrt(m2 * m2 + 1.0);
    const double ucx = (s1 - s2) / (m2 - m1);
    const double ucy = m1 * ucx + s1;
    const double uxt1 = (ucx + m1 * ucy) / (1.0 + m1 * m1);
    const double uxt2 = (ucx + m2 * ucy) / (1.0 + m2 * m2);
    if (!(uxt1 < uxt2)) throw InvalidCurve("tangency points out of order");
    c.cx_ = radius * ucx;
    c.cy_ = radius * ucy;
    c.xt1_ = radius * uxt1;
    c.xt2_ = radius * uxt2;
    c.w_ = std::max(0.5 * (c.xt2_ - c.xt1_), 1.15 + moll_frac * radius);

    // convexity of the full psi, shrinking rho if the sech term spoils it
    c.rho_ = rho;
    const double quant = c.sign_;
    for (int attempt = 0;; ++attempt) {
        bool ok = true;
        for (double x = -60.0; x <= 60.0 && ok; x += 0.01)
            if (quant * c.d2psi(x) <= (c.rho_ > 0 ? 0.0 : -1e-12)) ok = false;
        if (ok) break;
        if (attempt >= 5) throw InvalidCurve("curvature sign lost after mollification");
        c.rho_ *= 0.6;
    }

    // scanned (K_1) constants against sech
    double k1 = 1e300, k2 = 1e300, K = 0.0;
    for (double x = -60.0; x <= 60.0; x += 0.005) {
        const double sh = sech(x);
        if (x < 0) {
            const double dl = c.dev_left(x) / sh;
            k1 = std::min(k1, dl);
            K = std::max(K, dl);
        } else {
            const double dr = c.dev_right(x) / sh;
            k2 = std::min(k2, dr);
            K = std::max(K, dr);
        }
        K = std::max(K, std::max(std::abs(c.d2psi(x)), std::abs(c.d3psi(x))) / sh);
    }
    c.k1_ = k1;
    c.k2_ = k2;
    c.K1_ = K;
    if (c.rho_ > 0.0 && !(k1 > 0.0 && k2 > 0.0))
        throw InvalidCurve("asymptote approach is not sech-bounded from below");
    return c;
}

}  // namespace pfront
