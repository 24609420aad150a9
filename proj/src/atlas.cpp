#include "pfront/atlas.hpp"

#include <algorithm>
#include <cmath>

namespace pfront {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SpeedCurveResult build_speed_curve(const ReactionField& reaction, int n_angles, double arc_lo,
                                   double arc_hi, const PulsatingConfig& cfg) {
    if (n_angles < 9) throw RejectedConfiguration("speed curve needs >= 9 angles");
    if (!(arc_lo > 0.0 && arc_hi < kPi && arc_lo < arc_hi))
        throw RejectedConfiguration("arc must lie strictly inside (0, pi)");

    SpeedCurveResult out;
    out.curve.requested = n_angles;
    std::vector<double> req(n_angles);
    for (int i = 0; i < n_angles; ++i)
        req[i] = arc_lo + (arc_hi - arc_lo) * i / (n_angles - 1.0);

    std::vector<PulsatingFront> fronts(n_angles);
    std::vector<char> ok(n_angles, 0);
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                PulsatingConfig c = cfg;
                c.threads = 1;
                fronts[i] = compute_pulsating_front(reaction, std::cos(req[i]), std::sin(req[i]), c);
                ok[i] = 1;
            } catch (const Error&) {
                ok[i] = 0;
            }
        }
    };
    if (cfg.threads > 1)
        parallel_for(req.size(), cfg.threads, work);
    else
        work(0, req.size());

    auto& cur = out.curve;
    for (int i = 0; i < n_angles; ++i) {
        if (!ok[i]) {
            cur.failed_angles.push_back(req[i]);
            continue;
        }
        const double actual = std::atan2(fronts[i].ey, fronts[i].ex);
        cur.theta.push_back(actual);
        cur.c.push_back(fronts[i].speed);
        cur.g.push_back(fronts[i].speed / std::sin(actual));
        out.fronts.push_back(std::move(fronts[i]));
    }
    if (static_cast<int>(cur.failed_angles.size()) * 10 > 3 * n_angles)
        throw CurveUnusable("more than 30% of the requested angles failed");

    const std::size_t n = cur.theta.size();
    cur.gprime.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 == n ? i : i + 1;
        cur.gprime[i] = (cur.g[b] - cur.g[a]) / (cur.theta[b] - cur.theta[a]);
    }
    cur.c_interp = MonotoneCubic(cur.theta, cur.c);
    return out;
}

std::vector<AnglePair> find_angle_pairs(const SpeedCurve& curve, int level_grid,
                                        double match_tol_rel) {
    const std::size_t n = curve.theta.size();
    if (n < 3) throw NoPairs("speed curve too sparse");
    std::size_t imin = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (curve.g[i] < curve.g[imin]) imin = i;
    if (imin == 0 || imin + 1 == n)
        throw NoPairs("g has no strict interior minimum on the sampled arc");
    const double gmin = curve.g[imin];
    const double cap = std::min(curve.g.front(), curve.g.back());
    if (!(cap > gmin)) throw NoPairs("g does not rise toward the arc ends");

    auto bisect = [&](double lo, double hi, double level, bool rising) {
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            const bool above = curve.g_at(mid) > level;
            if (above == rising)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    };

    std::vector<AnglePair> pairs;
    for (int l = 0; l < level_grid; ++l) {
        const double level = gmin + (cap - gmin) * (l + 0.5) / level_grid;
        double alpha = 0.0, beta = 0.0;
        bool found_a = false, found_b = false;
        // leftmost crossing on a decreasing branch, rightmost on a rising one
        for (std::size_t i = 0; i + 1 < n && !found_a; ++i)
            if (curve.g[i] >= level && curve.g[i + 1] < level) {
                alpha = bisect(curve.theta[i], curve.theta[i + 1], level, false);
                found_a = true;
            }
        for (std::size_t i = n - 1; i > 0 && !found_b; --i)
            if (curve.g[i] >= level && curve.g[i - 1] < level) {
                beta = bisect(curve.theta[i - 1], curve.theta[i], level, true);
                found_b = true;
            }
        if (!found_a || !found_b || !(alpha < beta)) continue;

        AnglePair p;
        p.alpha = alpha;
        p.beta = beta;
        p.c_ab = 0.5 * (curve.g_at(alpha) + curve.g_at(beta));
        if (std::abs(curve.g_at(alpha) - curve.g_at(beta)) > match_tol_rel * p.c_ab) continue;
        p.gp_alpha = curve.gprime_at(alpha);
        p.gp_beta = curve.gprime_at(beta);
        p.slope_ok = p.gp_alpha < 0.0 && p.gp_beta > 0.0;
        double margin = 1e300;
        const int scan = 400;
        for (int s = 1; s < scan; ++s) {
            const double th = alpha + (beta - alpha) * s / scan;
            margin = std::min(margin, p.c_ab - curve.g_at(th));
        }
        p.interior_strict = margin;
        if (p.valid()) pairs.push_back(p);
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const AnglePair& a, const AnglePair& b) { return a.c_ab < b.c_ab; });
    return pairs;
}

TripleSpeeds triple_junction(double c_alpha, double c_theta, double c_beta, double alpha,
                             double theta, double beta, double angle_floor) {
    if (!(0 < alpha && alpha < theta && theta < beta && beta < kPi))
        throw InvalidAngles("need 0 < alpha < theta < beta < pi");
    if (std::abs(theta - alpha) < angle_floor || std::abs(beta - theta) < angle_floor)
        throw InvalidAngles("junction angles too close to degeneracy");
    TripleSpeeds t;
    t.c1 = (c_alpha * std::sin(theta) - c_theta * std::sin(alpha)) / std::sin(theta - alpha);
    t.c2 = (c_alpha * std::cos(theta) - c_theta * std::cos(alpha)) / std::sin(alpha - theta);
    t.ch1 = (c_beta * std::sin(theta) - c_theta * std::sin(beta)) / std::sin(theta - beta);
    t.ch2 = (c_beta * std::cos(theta) - c_theta * std::cos(beta)) / std::sin(beta - theta);
    return t;
}

std::optional<AxisSolution> axis_condition(const DirectionField& speeds, double e1x, double e1y,
                                           double e2x, double e2y) {
    const double n1 = std::hypot(e1x, e1y), n2 = std::hypot(e2x, e2y);
    e1x /= n1;
    e1y /= n1;
    e2x /= n2;
    e2y /= n2;
    const double th1 = std::atan2(e1y, e1x);
    const double th2 = std::atan2(e2y, e2x);
    const double c1 = speeds.speed(th1);
    const double c2 = speeds.speed(th2);

    // c1 (e2 . e0) - c2 (e1 . e0) = 0 is linear in e0
    const double A = c1 * e2x - c2 * e1x;
    const double B = c1 * e2y - c2 * e1y;
    double e0x = B, e0y = -A;
    const double nn = std::hypot(e0x, e0y);
    if (!(nn > 1e-14)) return std::nullopt;
    e0x /= nn;
    e0y /= nn;
    if (e1x * e0x + e1y * e0y < 0) {
        e0x = -e0x;
        e0y = -e0y;
    }
    const double d1 = e1x * e0x + e1y * e0y;
    const double d2 = e2x * e0x + e2y * e0y;
    if (!(d1 > 1e-9 && d2 > 1e-9)) return std::nullopt;

    AxisSolution sol;
    sol.e0x = e0x;
    sol.e0y = e0y;
    sol.c = c1 / d1;
    sol.residual = std::abs(c1 / d1 - c2 / d2);

    // empirical band: strict interior advantage between the two arms
    const double lo = std::min(th1, th2), hi = std::max(th1, th2);
    double margin = 1e300;
    const int scan = 200;
    for (int s = 1; s < scan; ++s) {
        const double th = lo + (hi - lo) * s / scan;
        const double den = std::cos(th) * e0x + std::sin(th) * e0y;
        if (den <= 1e-9) {
            margin = -1e300;
            break;
        }
        margin = std::min(margin, sol.c - speeds.speed(th) / den);
    }
    sol.interior_margin = margin;
    if (!(margin > 0.0)) return std::nullopt;
    return sol;
}

}  // namespace pfront
