#include "pfront/barriers.hpp"

#include <algorithm>
#include <cmath>

namespace pfront {

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

double front_phase(const PulsatingFront& f, double t, double x, double y) {
    return x * f.ex + y * f.ey - f.speed * t;
}

// profile value along the curve normal at scaled abscissa qx
struct CurveFrame {
    double theta;   // normal angle
    double xi;      // signed distance coordinate
    double root;    // sqrt(psi'^2 + 1)
};

CurveFrame curve_frame(const InterfaceCurve& curve, double q, double c_ab, double t, double x,
                       double y) {
    CurveFrame f;
    const double v = curve.dpsi(q * x);
    f.root = std::sqrt(v * v + 1.0);
    f.theta = std::atan2(1.0 / f.root, -v / f.root);
    f.xi = (y - c_ab * t - curve.psi(q * x) / q) / f.root;
    return f;
}

}  // namespace

BarrierEvaluator make_u_minus(std::shared_ptr<const PulsatingFront> a,
                              std::shared_ptr<const PulsatingFront> b) {
    BarrierEvaluator e;
    e.name = "U-";
    e.expected = BarrierEvaluator::Sign::Sub;
    e.value = [a, b](double t, double x, double y) {
        return std::max(a->sample(front_phase(*a, t, x, y), x, y),
                        b->sample(front_phase(*b, t, x, y), x, y));
    };
    e.slope_floor_k = std::min(a->slope_floor_r * std::abs(a->speed),
                               b->slope_floor_r * std::abs(b->speed));
    return e;
}

BarrierEvaluator make_u_minus3(std::shared_ptr<const PulsatingFront> a,
                               std::shared_ptr<const PulsatingFront> b,
                               std::shared_ptr<const PulsatingFront> c) {
    BarrierEvaluator e;
    e.name = "U-3";
    e.expected = BarrierEvaluator::Sign::Sub;
    e.value = [a, b, c](double t, double x, double y) {
        return std::max({a->sample(front_phase(*a, t, x, y), x, y),
                         b->sample(front_phase(*b, t, x, y), x, y),
                         c->sample(front_phase(*c, t, x, y), x, y)});
    };
    e.slope_floor_k = std::min({a->slope_floor_r * std::abs(a->speed),
                                b->slope_floor_r * std::abs(b->speed),
                                c->slope_floor_r * std::abs(c->speed)});
    return e;
}

BarrierEvaluator make_u_plus(std::shared_ptr<const DirectionField> dirfield,
                             std::shared_ptr<const InterfaceCurve> curve, double eps, double q,
                             double c_ab) {
    if (!(eps > 0.0) || !(q > 0.0)) throw RejectedConfiguration("U+ needs eps > 0 and scale q > 0");
    if (!dirfield->covers(curve->angle_left()) || !dirfield->covers(curve->angle_right()))
        throw OutOfAtlas("curve normals leave the sampled direction arc");
    BarrierEvaluator e;
    e.name = "U+";
    e.expected = BarrierEvaluator::Sign::Super;
    auto df = dirfield;
    auto cv = curve;
    e.value = [df, cv, eps, q, c_ab](double t, double x, double y) {
        const CurveFrame f = curve_frame(*cv, q, c_ab, t, x, y);
        return df->profile(f.theta, f.xi, x, y) + eps * sech(q * x);
    };
    // the claim quantity behind the supersolution sign: the apparent normal
    // speed of the level set exceeds the local front speed
    e.aux_name = "cab_over_root_minus_c";
    e.aux = [df, cv, q, c_ab](double t, double x, double y) {
        (void)t;
        (void)y;
        const double v = cv->dpsi(q * x);
        const double root = std::sqrt(v * v + 1.0);
        const double theta = std::atan2(1.0 / root, -v / root);
        return c_ab / root - df->speed(theta);
    };
    double rmin = 1e300, e2min = 1e300;
    for (const auto& fr : dirfield->fronts()) {
        rmin = std::min(rmin, fr.slope_floor_r);
        e2min = std::min(e2min, std::abs(fr.ey));
    }
    e.slope_floor_k = 0.9 * rmin * c_ab * e2min;
    return e;
}

BarrierEvaluator make_lower_barrier(int which, std::shared_ptr<const DirectionField> dirfield,
                                    std::shared_ptr<const InterfaceCurve> curve, double eps,
                                    double q, double c_ab, const SpeedCurve& speeds) {
    if (which != 1 && which != 2) throw RejectedConfiguration("lower barrier index must be 1 or 2");
    if (!(eps > 0.0) || !(q > 0.0)) throw RejectedConfiguration("lower barrier needs eps, q > 0");
    const bool left = which == 1;
    if ((left && curve->kind() != CurveKind::ConcaveLeft) ||
        (!left && curve->kind() != CurveKind::ConcaveRight))
        throw RejectedConfiguration("lower barrier curve kind mismatch");

    // auxiliary-angle condition: g stays above g(anchor) strictly inside the
    // auxiliary arc ((alpha1, alpha) for the left barrier, (beta, beta1) right)
    const double anchor = left ? curve->angle_left() : curve->angle_right();
    const double aux_end = left ? curve->angle_right() : curve->angle_left();
    const double g_anchor = speeds.g_at(anchor);
    const double lo = std::min(anchor, aux_end), hi = std::max(anchor, aux_end);
    for (int s = 1; s < 64; ++s) {
        const double th = lo + (hi - lo) * s / 64.0;
        if (speeds.g_at(th) <= g_anchor)
            throw InvalidAuxiliaryAngle("g does not stay above g(anchor) on the auxiliary arc");
    }
    if (!dirfield->covers(lo) || !dirfield->covers(hi))
        throw OutOfAtlas("auxiliary arc leaves the sampled direction field");

    BarrierEvaluator e;
    e.name = left ? "U1-" : "U2-";
    e.expected = BarrierEvaluator::Sign::Sub;
    auto df = dirfield;
    auto cv = curve;
    e.value = [df, cv, eps, q, c_ab](double t, double x, double y) {
        const CurveFrame f = curve_frame(*cv, q, c_ab, t, x, y);
        return df->profile(f.theta, f.xi, x, y) - eps * sech(q * x);
    };
    double rmin = 1e300, e2min = 1e300;
    for (const auto& fr : dirfield->fronts()) {
        rmin = std::min(rmin, fr.slope_floor_r);
        e2min = std::min(e2min, std::abs(fr.ey));
    }
    e.slope_floor_k = 0.9 * rmin * c_ab * e2min;
    return e;
}

BarrierEvaluator time_shift(const BarrierEvaluator& base, double delta, double omega, double lambda,
                            BarrierEvaluator::Sign sign, double sigma) {
    if (!(delta >= 0.0 && delta < 0.5 * sigma)) throw InvalidShift("time shift needs delta < sigma/2");
    if (!(omega > 0.0) || !(lambda > 0.0)) throw InvalidShift("time shift needs omega, lambda > 0");
    if (!(base.slope_floor_k > 0.0))
        throw InvalidShift("base barrier reports no positive slope floor");
    BarrierEvaluator e;
    e.name = base.name + (sign == BarrierEvaluator::Sign::Sub ? "-shift-sub" : "-shift-super");
    e.expected = sign;
    auto bval = base.value;
    auto bsm = base.smooth_at;
    const bool sub = sign == BarrierEvaluator::Sign::Sub;
    e.value = [bval, delta, omega, lambda, sub](double t, double x, double y) {
        const double bump = delta * std::exp(-lambda * t);
        const double shift = omega * bump - omega * delta;
        return sub ? bval(t + shift, x, y) - bump : bval(t - shift, x, y) + bump;
    };
    e.smooth_at = bsm;
    e.slope_floor_k = base.slope_floor_k;
    e.validity_t_max = base.validity_t_max;
    return e;
}

BarrierEvaluator make_v_minus(std::shared_ptr<const PulsatingFront> front_theta, double delta,
                              double omega, double tau0) {
    if (!(delta > 0.0 && omega > 0.0)) throw RejectedConfiguration("v- needs delta, omega > 0");
    BarrierEvaluator e;
    e.name = "v-";
    e.expected = BarrierEvaluator::Sign::Sub;
    auto f = front_theta;
    e.value = [f, delta, omega, tau0](double t, double x, double y) {
        const double xi = front_phase(*f, t, x, y) - omega * std::exp(-delta * t) + omega + tau0;
        return f->sample(xi, x, y) - delta * std::exp(-delta * t);
    };
    e.slope_floor_k = f->slope_floor_r * std::abs(f->speed);
    return e;
}

MergingUpper make_merging_upper(std::shared_ptr<const DirectionField> dirfield,
                                const TripleSpeeds& triple,
                                std::shared_ptr<const InterfaceCurve> curve_at,
                                std::shared_ptr<const InterfaceCurve> curve_tb, double rho,
                                double eps, double q) {
    if (!(eps > 0.0) || !(q > 0.0) || !(rho >= 0.0))
        throw RejectedConfiguration("merging barrier needs eps, q > 0 and rho >= 0");
    if (!(triple.c1 > 0.0) || !(triple.ch1 < 0.0))
        throw InvalidTriple("junction speeds must satisfy c1 > 0 > ch1");

    const double c1 = triple.c1, c2 = triple.c2, h1 = triple.ch1, h2 = triple.ch2;
    auto df = dirfield;
    auto ca = curve_at;
    auto cb = curve_tb;

    // psi_1(t,x) = phi_1(x - c1 t) + rho sech(x - c1 t) + rho sech(x - ch1 t),
    // evaluated at (q t, q x) and used through y = psi/q; branch 2 mirrors it
    auto eval_branch = [df, rho, q](const InterfaceCurve& base, double own_c, double other_c,
                                    double cy, double t, double x, double y) {
        const double qt = q * t;
        const double xo = q * x - own_c * qt;
        const double xu = q * x - other_c * qt;
        const double psi = base.psi(xo) + rho * sech(xo) + rho * sech(xu);
        const double dpsi =
            base.dpsi(xo) - rho * sech(xo) * std::tanh(xo) - rho * sech(xu) * std::tanh(xu);
        const double root = std::sqrt(dpsi * dpsi + 1.0);
        const double theta = std::atan2(1.0 / root, -dpsi / root);
        const double xi = (y - cy * t - psi / q) / root;
        return df->profile(theta, xi, x, y);
    };

    BarrierEvaluator e;
    e.name = "U~+";
    e.expected = BarrierEvaluator::Sign::Super;
    e.value = [df, ca, cb, eval_branch, c1, c2, h1, h2, eps, q](double t, double x, double y) {
        const double split = 0.5 * (c1 + h1) * t;
        const double bump = eps * sech(q * (x - c1 * t)) + eps * sech(q * (x - h1 * t));
        if (x <= split) return eval_branch(*ca, c1, h1, c2, t, x, y) + bump;
        return eval_branch(*cb, h1, c1, h2, t, x, y) + bump;
    };
    // the inequality behind the supersolution sign, evaluated by centered
    // differences of the branch coordinate:
    //   v . grad xi - xi_t - c_{e(t,x)}  with v the active junction velocity
    e.aux_name = "junction_advect_margin";
    auto xi_of = [ca, cb, rho, q, c1, c2, h1, h2](double t, double x, double y) {
        const bool leftb = x <= 0.5 * (c1 + h1) * t;
        const InterfaceCurve& base = leftb ? *ca : *cb;
        const double own = leftb ? c1 : h1;
        const double other = leftb ? h1 : c1;
        const double cy = leftb ? c2 : h2;
        const double xo = q * (x - own * t);
        const double xu = q * (x - other * t);
        const double psi = base.psi(xo) + rho * sech(xo) + rho * sech(xu);
        const double dpsi =
            base.dpsi(xo) - rho * sech(xo) * std::tanh(xo) - rho * sech(xu) * std::tanh(xu);
        return (y - cy * t - psi / q) / std::sqrt(dpsi * dpsi + 1.0);
    };
    e.aux = [ca, cb, df, xi_of, rho, q, c1, c2, h1, h2](double t, double x, double y) {
        const bool leftb = x <= 0.5 * (c1 + h1) * t;
        const InterfaceCurve& base = leftb ? *ca : *cb;
        const double own = leftb ? c1 : h1;
        const double other = leftb ? h1 : c1;
        const double xo = q * (x - own * t);
        const double xu = q * (x - other * t);
        const double dpsi =
            base.dpsi(xo) - rho * sech(xo) * std::tanh(xo) - rho * sech(xu) * std::tanh(xu);
        const double root2 = std::sqrt(dpsi * dpsi + 1.0);
        const double theta = std::atan2(1.0 / root2, -dpsi / root2);
        // in fixed-frame coordinates the junction advection is already inside
        // the time derivative: the claim quantity is -xi_t - c_e
        const double d = 1e-4;
        const double xit = (xi_of(t + d, x, y) - xi_of(t - d, x, y)) / (2 * d);
        return -xit - df->speed(theta);
    };

    // validity horizon: latest t at which the two branch formulas agree at the
    // split line, backed off by one junction transit time
    MergingUpper out;
    double t_ok = 0.0;
    bool found = false;
    for (double t = -1.0; t >= -400.0; t -= 1.0) {
        const double split = 0.5 * (c1 + h1) * t;
        double mismatch = 0.0;
        const double yc = (c2 + h2) * 0.5 * t;
        for (double dy = -10.0; dy <= 10.0; dy += 0.25) {
            const double a = eval_branch(*ca, c1, h1, c2, t, split, yc + dy);
            const double b = eval_branch(*cb, h1, c1, h2, t, split, yc + dy);
            mismatch = std::max(mismatch, std::abs(a - b));
        }
        if (mismatch <= 1e-6) {
            t_ok = t;
            out.splice_mismatch = mismatch;
            found = true;
            break;
        }
    }
    if (!found) throw InvalidTriple("branch formulas never agree at the splice line");
    const double transit = 1.0 / (q * (c1 - h1));
    out.t_neg = t_ok - transit;
    const double t_neg = out.t_neg;
    e.validity_t_max = t_neg;
    const double split_guard = 1.0 / q;
    e.smooth_at = [t_neg, c1, h1, split_guard](double t, double x, double y) {
        (void)y;
        if (t > t_neg) return false;
        return std::abs(x - 0.5 * (c1 + h1) * t) > split_guard;
    };
    auto raw = e.value;
    e.value = [raw, t_neg](double t, double x, double y) {
        if (t > t_neg) throw OutsideValidity("merging barrier queried past its horizon");
        return raw(t, x, y);
    };
    out.barrier = std::move(e);
    return out;
}

ResidualReport residual_certify(const BarrierEvaluator& barrier, const ReactionField& reaction,
                                const SamplePlan& plan, double fd_step, int threads) {
    if (!(fd_step > 0.0)) throw RejectedConfiguration("fd step must be positive");
    ResidualReport rep;
    rep.fd_step = fd_step;
    rep.aux_name = barrier.aux_name;

    // seeded sample coordinates, drawn up-front so the reduction is ordered
    std::vector<double> ts(plan.samples), xs(plan.samples), ys(plan.samples);
    {
        Rng rng(plan.seed);
        long placed = 0;
        long guard = 0;
        while (placed < plan.samples && guard < plan.samples * 50) {
            ++guard;
            const double t = rng.uniform(plan.t0, plan.t1);
            const double x = rng.uniform(plan.x0, plan.x1);
            const double base = plan.follow ? plan.follow(t, x) : plan.drift * t;
            const double y = base + rng.uniform(-plan.depth, plan.depth);
            if (barrier.smooth_at && !barrier.smooth_at(t, x, y)) continue;
            if (t + 2.0 * fd_step > barrier.validity_t_max) continue;
            ts[placed] = t;
            xs[placed] = x;
            ys[placed] = y;
            ++placed;
        }
        if (placed < plan.samples)
            throw RejectedConfiguration("sample plan rejected too many points (guards too tight)");
    }

    auto residual_at = [&](double t, double x, double y, double d) {
        const auto& u = barrier.value;
        const double c = u(t, x, y);
        const double ut = (u(t + d, x, y) - u(t - d, x, y)) / (2.0 * d);
        const double uxx = (u(t, x + d, y) + u(t, x - d, y) - 2.0 * c) / (d * d);
        const double uyy = (u(t, x, y + d) + u(t, x, y - d) - 2.0 * c) / (d * d);
        return ut - uxx - uyy - reaction.f(x, y, c);
    };

    std::vector<double> res(plan.samples), res_half(plan.samples), auxv;
    if (barrier.aux) auxv.assign(plan.samples, 0.0);
    parallel_for(static_cast<std::size_t>(plan.samples), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            res[i] = residual_at(ts[i], xs[i], ys[i], fd_step);
            res_half[i] = residual_at(ts[i], xs[i], ys[i], 0.5 * fd_step);
            if (barrier.aux) auxv[i] = barrier.aux(ts[i], xs[i], ys[i]);
        }
    });

    double rmin = 1e300, rmax = -1e300, dmax = 0.0;
    long worst = 0;
    for (long i = 0; i < plan.samples; ++i) {
        if (res[i] < rmin) rmin = res[i];
        if (res[i] > rmax) rmax = res[i];
        dmax = std::max(dmax, std::abs(res[i] - res_half[i]));
        const bool bad = barrier.expected == BarrierEvaluator::Sign::Super ? res[i] < res[worst]
                                                                          : res[i] > res[worst];
        if (bad) worst = i;
        if (barrier.aux) rep.aux_min = std::min(rep.aux_min, auxv[i]);
    }
    rep.min_residual = rmin;
    rep.max_residual = rmax;
    rep.samples = plan.samples;
    rep.slack = std::max(2.0 * (4.0 / 3.0) * dmax, 1e-10);
    rep.worst_t = ts[worst];
    rep.worst_x = xs[worst];
    rep.worst_y = ys[worst];
    for (long i = 0; i < plan.samples; ++i) {
        const bool viol = barrier.expected == BarrierEvaluator::Sign::Super ? res[i] < -rep.slack
                                                                            : res[i] > rep.slack;
        if (viol) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

ParamSearchResult search_barrier_params(const std::function<BarrierEvaluator(double, double)>& make,
                                        const ReactionField& reaction, double sigma,
                                        const SamplePlan& plan, double fd_step, int threads) {
    SamplePlan thin = plan;
    thin.samples = std::max<long>(2000, plan.samples / 10);
    const double eps_cap = 0.4999 * sigma;
    for (double eps : {eps_cap / 16, eps_cap / 8, eps_cap / 4, eps_cap / 2, eps_cap}) {
        for (double q : {0.5, 0.35, 0.25, 0.18, 0.12, 0.08, 0.05}) {
            BarrierEvaluator b;
            try {
                b = make(eps, q);
            } catch (const Error&) {
                continue;
            }
            auto probe = residual_certify(b, reaction, thin, fd_step, threads);
            if (!probe.pass) continue;
            auto full = residual_certify(b, reaction, plan, fd_step, threads);
            if (full.pass) return {eps, q, full};
        }
    }
    throw DiagnosticFailure("no (eps, scale) pair certifies the residual sign");
}

}  // namespace pfront
