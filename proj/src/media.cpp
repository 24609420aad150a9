#include "pfront/media.hpp"

#include <algorithm>
#include <cmath>

namespace pfront {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kQuant = 67108864.0;  // 2^26 cell subdivisions

// Exact-periodic fraction of one period: both x and x + k*L map to the same
// quantized index, so pattern values repeat bit-for-bit.
double frac_quantized(double x, double L) {
    const double s = x / L * kQuant;
    if (!(std::abs(s) < 4.4e15)) throw InvalidMedium("coordinate too large for periodic reduction");
    long long q = std::llround(s);
    long long m = q % (1LL << 26);
    if (m < 0) m += (1LL << 26);
    return static_cast<double>(m) * 0x1.0p-26;
}

}  // namespace

double ReactionField::pattern_value(double x, double y) const {
    const double fx = frac_quantized(x, spec_.cell.L1);
    const double fy = frac_quantized(y, spec_.cell.L2);
    switch (spec_.pattern) {
        case ThresholdPattern::Constant: return 0.0;
        case ThresholdPattern::SinSin:
            return std::sin(kTwoPi * spec_.kx * fx) * std::sin(kTwoPi * spec_.ky * fy);
        case ThresholdPattern::SinY: return std::sin(kTwoPi * spec_.ky * fy);
        case ThresholdPattern::SinX: return std::sin(kTwoPi * spec_.kx * fx);
    }
    return 0.0;
}

double ReactionField::theta(double x, double y) const {
    return spec_.theta0 + spec_.theta_amp * pattern_value(x, y);
}

double ReactionField::f(double x, double y, double u) const {
    if (spec_.kind == ReactionKind::Tabulated) return tab_f(x, y, u);
    const double th = theta(x, y);
    if (u < 0.0) return -th * u;
    if (u > 1.0) return -(1.0 - th) * (u - 1.0);
    return u * (1.0 - u) * (u - th);
}

double ReactionField::f_u(double x, double y, double u) const {
    if (spec_.kind == ReactionKind::Tabulated) {
        const double du = 1e-6;
        return (tab_f(x, y, u + du) - tab_f(x, y, u - du)) / (2.0 * du);
    }
    const double th = theta(x, y);
    if (u < 0.0) return -th;
    if (u > 1.0) return -(1.0 - th);
    return -3.0 * u * u + 2.0 * (1.0 + th) * u - th;
}

double ReactionField::tab_f(double x, double y, double u) const {
    const auto& s = spec_;
    const double fx = frac_quantized(x, s.cell.L1) * s.tab_nx;
    const double fy = frac_quantized(y, s.cell.L2) * s.tab_ny;
    int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
    const double wx = fx - ix, wy = fy - iy;
    const int ix1 = (ix + 1) % s.tab_nx, iy1 = (iy + 1) % s.tab_ny;

    const double uc = std::clamp(u, s.tab_ulo, s.tab_uhi);
    const double fu = (uc - s.tab_ulo) / (s.tab_uhi - s.tab_ulo) * (s.tab_nu - 1);
    int iu = std::min(static_cast<int>(fu), s.tab_nu - 2);
    const double wu = fu - iu;

    auto at = [&](int a, int b, int c) { return s.tab_values[(a * s.tab_ny + b) * s.tab_nu + c]; };
    auto plane = [&](int c) {
        return (1 - wx) * ((1 - wy) * at(ix, iy, c) + wy * at(ix, iy1, c)) +
               wx * ((1 - wy) * at(ix1, iy, c) + wy * at(ix1, iy1, c));
    };
    double v = (1 - wu) * plane(iu) + wu * plane(iu + 1);
    if (u < s.tab_ulo || u > s.tab_uhi) {
        // continue linearly with the edge slope
        const double du = (s.tab_uhi - s.tab_ulo) / (s.tab_nu - 1);
        if (u < s.tab_ulo) {
            const double slope = (plane(1) - plane(0)) / du;
            v = plane(0) + slope * (u - s.tab_ulo);
        } else {
            const double slope = (plane(s.tab_nu - 1) - plane(s.tab_nu - 2)) / du;
            v = plane(s.tab_nu - 1) + slope * (u - s.tab_uhi);
        }
    }
    return v;
}

ReactionField build_reaction(const MediumSpec& spec) {
    if (!(spec.cell.L1 > 0.0) || !(spec.cell.L2 > 0.0))
        throw InvalidMedium("cell periods must be positive");
    ReactionField r;
    r.spec_ = spec;
    if (spec.kind == ReactionKind::HomogeneousCubic) r.spec_.pattern = ThresholdPattern::Constant;
    if (spec.kind == ReactionKind::Tabulated) {
        if (spec.tab_nx < 2 || spec.tab_ny < 2 || spec.tab_nu < 4 ||
            spec.tab_values.size() != static_cast<std::size_t>(spec.tab_nx) * spec.tab_ny * spec.tab_nu)
            throw InvalidMedium("tabulated medium: bad table dimensions");
        if (spec.tab_ulo > 0.0 || spec.tab_uhi < 1.0)
            throw InvalidMedium("tabulated medium: u-range must contain [0,1]");
    }

    // scan the cell for the threshold range / derivative margins
    const int n = 64;
    double fu0_min = 1e300, fu1_min = 1e300, m_max = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = (i + 0.5) / n * spec.cell.L1;
            const double y = (j + 0.5) / n * spec.cell.L2;
            if (r.is_cubic()) {
                const double th = r.theta(x, y);
                if (!(th > 0.0 && th < 1.0))
                    throw InvalidMedium("threshold leaves (0,1): theta=" + std::to_string(th));
            }
            fu0_min = std::min(fu0_min, -r.f_u(x, y, 0.0));
            fu1_min = std::min(fu1_min, -r.f_u(x, y, 1.0));
            for (int k = 0; k <= 50; ++k) {
                const double u = -2.0 + 5.0 * k / 50.0;
                m_max = std::max(m_max, std::abs(r.f_u(x, y, u)));
            }
        }
    }
    if (fu0_min <= 0.0 || fu1_min <= 0.0)
        throw InvalidMedium("0 and 1 are not stable zeroes on the sampled cell");
    r.lambda_ = 0.5 * std::min(fu0_min, fu1_min);
    r.M_ = m_max;

    // largest sigma <= 0.49 with -f_u >= lambda on [-2, sigma] and [1-sigma, 3]
    const int nu = 981;
    double sigma = 0.0;
    for (int k = 1; k <= nu; ++k) {
        const double s = 0.49 * k / nu;
        bool ok = true;
        for (int i = 0; i < 16 && ok; ++i) {
            const double x = (i + 0.5) / 16.0 * spec.cell.L1;
            for (int j = 0; j < 16 && ok; ++j) {
                const double y = (j + 0.5) / 16.0 * spec.cell.L2;
                // the extension is monotone beyond [0,1]; the binding points
                // are the inner interval ends
                if (-r.f_u(x, y, s) < r.lambda_ || -r.f_u(x, y, 1.0 - s) < r.lambda_) ok = false;
            }
        }
        if (!ok) break;
        sigma = s;
    }
    if (sigma <= 0.0) throw InvalidMedium("no sigma margin found (medium not bistable enough)");
    r.sigma_ = sigma;
    return r;
}

AssumptionReport verify_assumptions(const ReactionField& reaction, int res_xy, int res_u) {
    if (res_xy < 8) throw RejectedConfiguration("verify_assumptions: need >= 8 points per period");
    if (res_u < 32) throw RejectedConfiguration("verify_assumptions: need >= 32 points in u");

    AssumptionReport rep;
    const auto& cell = reaction.cell();
    // H1: midpoint rule over one cell x [0,1]
    double acc = 0.0;
    for (int i = 0; i < res_xy; ++i) {
        const double x = (i + 0.5) / res_xy * cell.L1;
        for (int j = 0; j < res_xy; ++j) {
            const double y = (j + 0.5) / res_xy * cell.L2;
            double su = 0.0;
            for (int k = 0; k < res_u; ++k) {
                const double u = (k + 0.5) / res_u;
                su += reaction.f(x, y, u);
            }
            acc += su / res_u;
        }
    }
    rep.integral_H1 = acc / (res_xy * static_cast<double>(res_xy)) * cell.L1 * cell.L2;
    rep.sign = rep.integral_H1 > rep.quad_tolerance ? 1 : (rep.integral_H1 < -rep.quad_tolerance ? -1 : 0);
    rep.passes["H1"] = std::abs(rep.integral_H1) > rep.quad_tolerance;

    // margin scans: lambda at the stable zeroes, then the sigma band, then M
    double fu0_min = 1e300, fu1_min = 1e300, m_max = 0.0;
    for (int i = 0; i < res_xy; ++i) {
        const double x = (i + 0.5) / res_xy * cell.L1;
        for (int j = 0; j < res_xy; ++j) {
            const double y = (j + 0.5) / res_xy * cell.L2;
            fu0_min = std::min(fu0_min, -reaction.f_u(x, y, 0.0));
            fu1_min = std::min(fu1_min, -reaction.f_u(x, y, 1.0));
            for (int k = 0; k <= res_u; ++k) {
                const double u = -2.0 + 5.0 * k / res_u;
                m_max = std::max(m_max, std::abs(reaction.f_u(x, y, u)));
            }
        }
    }
    rep.lambda_measured = 0.5 * std::min(fu0_min, fu1_min);
    rep.M_measured = m_max;

    double sigma = 0.0;
    for (int k = 1; k <= res_u; ++k) {
        const double s = 0.49 * k / res_u;
        bool ok = true;
        for (int i = 0; i < res_xy && ok; ++i) {
            const double x = (i + 0.5) / res_xy * cell.L1;
            for (int j = 0; j < res_xy && ok; ++j) {
                const double y = (j + 0.5) / res_xy * cell.L2;
                if (-reaction.f_u(x, y, s) < rep.lambda_measured ||
                    -reaction.f_u(x, y, 1.0 - s) < rep.lambda_measured)
                    ok = false;
            }
        }
        if (!ok) break;
        sigma = s;
    }
    rep.sigma_measured = sigma;
    rep.passes["F3-lambda"] = rep.lambda_measured > 0.0;
    rep.passes["F3-sigma"] = sigma > 0.0 && sigma < 0.5;
    rep.passes["lipschitz"] = std::isfinite(m_max);
    return rep;
}

}  // namespace pfront
