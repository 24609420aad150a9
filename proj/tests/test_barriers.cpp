#include "doctest.h"

#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "pfront/barriers.hpp"

using namespace pfront;

namespace {

constexpr double kPi = 3.14159265358979323846;

ReactionField& homog() {
    static ReactionField r = [] {
        MediumSpec s;
        s.kind = ReactionKind::HomogeneousCubic;
        s.theta0 = 0.25;
        return build_reaction(s);
    }();
    return r;
}

PulsatingConfig coarse() {
    PulsatingConfig c;
    c.h = 0.2;
    c.window_along = 30.0;
    c.window_across = 4.0;
    c.burn_in = 10.0;
    c.fit_span = 16.0;
    c.bin_span = 10.0;
    c.xi_halfwidth = 11.0;
    return c;
}

// shared fixture: one homogeneous atlas spanning [0.3, pi - 0.3]
struct Fixture {
    std::shared_ptr<DirectionField> df;
    SpeedCurve curve;
    std::shared_ptr<PulsatingFront> fa, fb, ft;
    double alpha = kPi / 6, beta = 5 * kPi / 6, c_ab = 0.0;

    Fixture() {
        auto res = build_speed_curve(homog(), 13, 0.3, kPi - 0.3, coarse());
        curve = res.curve;
        df = std::make_shared<DirectionField>(res.curve.theta, res.fronts);
        // pair angles snapped to the solver lattice so the curve asymptotes
        // match the front phases exactly
        double ex = std::cos(alpha), ey = std::sin(alpha);
        commensurate_direction(homog(), coarse(), ex, ey);
        alpha = std::atan2(ey, ex);
        ex = std::cos(beta);
        ey = std::sin(beta);
        commensurate_direction(homog(), coarse(), ex, ey);
        beta = std::atan2(ey, ex);
        fa = std::make_shared<PulsatingFront>(
            compute_pulsating_front(homog(), std::cos(alpha), std::sin(alpha), coarse()));
        fb = std::make_shared<PulsatingFront>(
            compute_pulsating_front(homog(), std::cos(beta), std::sin(beta), coarse()));
        ft = std::make_shared<PulsatingFront>(compute_pulsating_front(homog(), 0.0, 1.0, coarse()));
        c_ab = 0.5 * (fa->speed / std::sin(alpha) + fb->speed / std::sin(beta));
    }
};

Fixture& fix() {
    static Fixture f;
    return f;
}

SamplePlan plan_for(const InterfaceCurve& cv, double q, double c_ab, long n, std::uint64_t seed) {
    SamplePlan p;
    p.t0 = -8.0;
    p.t1 = 8.0;
    p.x0 = -30.0;
    p.x1 = 30.0;
    p.depth = 7.0;
    p.samples = n;
    p.seed = seed;
    p.follow = [&cv, q, c_ab](double t, double x) { return c_ab * t + cv.psi(q * x) / q; };
    return p;
}

}  // namespace

TEST_CASE("U- composition") {
    auto& F = fix();
    auto um = make_u_minus(F.fa, F.fb);

    // deep behind both fronts: close to 1
    CHECK(um(0.0, 0.0, -25.0) >= 1.0 - 2e-2);
    // far on the alpha branch the beta front has died out
    const double t = 1.0;
    for (double y = -8.0; y <= 8.0; y += 1.0) {
        const double x = -30.0;
        const double ua = F.fa->sample(x * F.fa->ex + y * F.fa->ey - F.fa->speed * t, x, y);
        CHECK(std::abs(um(t, x, y) - ua) <= 1e-3);
    }
    // max is commutative
    auto um2 = make_u_minus(F.fb, F.fa);
    CHECK(um(0.3, 1.2, -0.7) == um2(0.3, 1.2, -0.7));
}

TEST_CASE("U+ geometry, bump, and ordering over U-") {
    auto& F = fix();
    auto cv = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConvexV, F.alpha, F.beta, 0.25));
    const double eps = 0.02, q = 0.15;
    auto up = make_u_plus(F.df, cv, eps, q, F.c_ab);
    auto um = make_u_minus(F.fa, F.fb);

    // far on the alpha side the supersolution tracks the alpha front within 2 eps
    for (double y = -40.0; y <= -20.0; y += 2.5) {
        const double x = -38.0, t = 0.0;
        const double ua = F.fa->sample(x * F.fa->ex + y * F.fa->ey, x, y);
        CHECK(std::abs(up(t, x, y) - ua) <= 2 * eps);
    }
    // the apex carries the full bump above the blended profile
    {
        const double t = 0.5, x = 0.0;
        const double y = F.c_ab * t + cv->psi(0.0) / q;  // xi = 0 at the curve
        const double prof = up(t, x, y) - eps;  // sech(0) = 1
        CHECK(prof > 0.35);
        CHECK(prof < 0.65);
    }
    // U+ >= U- on a 200 x 200 x 5 sample grid
    double worst = 1e300;
    for (int it = 0; it < 5; ++it) {
        const double t = -4.0 + 2.0 * it;
        for (int i = 0; i < 200; ++i)
            for (int j = 0; j < 200; ++j) {
                const double x = -32.0 + 64.0 * i / 199.0;
                const double y = F.c_ab * t + cv->psi(q * x) / q + (-30.0 + 60.0 * j / 199.0);
                worst = std::min(worst, up(t, x, y) - um(t, x, y));
            }
    }
    CHECK(worst >= -1e-9);
}

TEST_CASE("lower barriers sit below the matching front") {
    auto& F = fix();
    const double alpha1 = 0.35, beta1 = kPi - 0.35;
    auto c1 = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConcaveLeft, F.alpha, alpha1, 0.25));
    auto c2 = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConcaveRight, F.beta, beta1, 0.25));
    const double eps = 0.02, q = 0.15;
    auto u1 = make_lower_barrier(1, F.df, c1, eps, q, F.c_ab, F.curve);
    auto u2 = make_lower_barrier(2, F.df, c2, eps, q, F.c_ab, F.curve);

    Rng rng(404);
    for (int n = 0; n < 4000; ++n) {
        const double t = rng.uniform(-5.0, 5.0);
        const double x = rng.uniform(-35.0, 35.0);
        const double y = F.c_ab * t + c1->psi(q * x) / q + rng.uniform(-12.0, 12.0);
        const double ua = F.fa->sample(x * F.fa->ex + y * F.fa->ey - F.fa->speed * t, x, y);
        CHECK(u1(t, x, y) <= ua + 1e-9);
        const double y2 = F.c_ab * t + c2->psi(q * x) / q + rng.uniform(-12.0, 12.0);
        const double ub = F.fb->sample(x * F.fb->ex + y2 * F.fb->ey - F.fb->speed * t, x, y2);
        CHECK(u2(t, x, y2) <= ub + 1e-9);
    }

    // tracks the alpha front within 2 eps far left
    for (double y = -40.0; y <= -20.0; y += 2.5) {
        const double x = -38.0;
        const double ua = F.fa->sample(x * F.fa->ex + y * F.fa->ey, x, y);
        CHECK(std::abs(u1(0.0, x, y) - ua) <= 2 * eps);
    }

    // value decreases as eps increases
    auto u1b = make_lower_barrier(1, F.df, c1, 2 * eps, q, F.c_ab, F.curve);
    CHECK(u1b(0.0, 0.5, c1->psi(0.0) / q) < u1(0.0, 0.5, c1->psi(0.0) / q));

    // auxiliary arc violating the g-condition is rejected: on the homogeneous
    // curve g rises toward the ends, so anchoring at beta with beta1 toward
    // pi/2 violates g > g(anchor)
    auto bad = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConcaveLeft, 2.2, 1.8, 0.25));
    CHECK_THROWS_AS(make_lower_barrier(1, F.df, bad, eps, q, F.c_ab, F.curve),
                    InvalidAuxiliaryAngle);
}

TEST_CASE("sandwich ordering of the explicit formulas") {
    auto& F = fix();
    auto cvx = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConvexV, F.alpha, F.beta, 0.25));
    auto ccl = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConcaveLeft, F.alpha, 0.35, 0.25));
    auto ccr = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConcaveRight, F.beta, kPi - 0.35, 0.25));
    const double eps = 0.02, q = 0.12;
    auto up = make_u_plus(F.df, cvx, eps, q, F.c_ab);
    auto u1 = make_lower_barrier(1, F.df, ccl, eps, q, F.c_ab, F.curve);
    auto u2 = make_lower_barrier(2, F.df, ccr, eps, q, F.c_ab, F.curve);
    auto um = make_u_minus(F.fa, F.fb);

    Rng rng(11);
    double w1 = 1e300, w2 = 1e300, w3 = 1e300;
    for (int n = 0; n < 20000; ++n) {
        const double t = rng.uniform(-5.0, 5.0);
        const double x = rng.uniform(-35.0, 35.0);
        const double y = F.c_ab * t + cvx->psi(q * x) / q + rng.uniform(-14.0, 14.0);
        w1 = std::min(w1, um(t, x, y) - u1(t, x, y));
        w2 = std::min(w2, um(t, x, y) - u2(t, x, y));
        w3 = std::min(w3, up(t, x, y) - um(t, x, y));
    }
    CHECK(w1 >= -1e-9);
    CHECK(w2 >= -1e-9);
    CHECK(w3 >= -1e-9);
}

TEST_CASE("time shift wrapper") {
    auto& F = fix();
    auto um = make_u_minus(F.fa, F.fb);
    const double sigma = homog().sigma();
    const double delta = 0.4 * sigma, omega = 3.0, lambda = homog().lambda();
    auto sub = time_shift(um, delta, omega, lambda, BarrierEvaluator::Sign::Sub, sigma);

    // t = 0: plain value minus delta
    CHECK(sub(0.0, 1.0, 2.0) == doctest::Approx(um(0.0, 1.0, 2.0) - delta).epsilon(1e-12));
    // large t: wrapper converges to the base
    CHECK(std::abs(sub(200.0, 1.0, 72.0) - um(200.0, 1.0, 72.0)) <= 1e-9);
    // delta = 0 is the identity
    auto id = time_shift(um, 0.0, omega, lambda, BarrierEvaluator::Sign::Sub, sigma);
    CHECK(id(0.7, -1.0, 3.0) == um(0.7, -1.0, 3.0));
    // invalid shifts
    CHECK_THROWS_AS(time_shift(um, 0.6 * sigma, omega, lambda, BarrierEvaluator::Sign::Sub, sigma),
                    InvalidShift);
}

TEST_CASE("exact traveling wave has zero residual within slack") {
    BarrierEvaluator exact;
    exact.name = "oracle-wave";
    exact.expected = BarrierEvaluator::Sign::Super;
    const double c = oracle::cubic_speed(0.25);
    exact.value = [c](double t, double, double y) { return oracle::cubic_profile(y - c * t); };
    SamplePlan p;
    p.t0 = -5;
    p.t1 = 5;
    p.x0 = -5;
    p.x1 = 5;
    p.depth = 8.0;
    p.drift = c;
    p.samples = 20000;
    p.seed = 2;
    auto rep = residual_certify(exact, homog(), p, 0.05);
    CHECK(rep.pass);
    CHECK(std::abs(rep.min_residual) <= rep.slack);
    CHECK(std::abs(rep.max_residual) <= rep.slack);

    exact.expected = BarrierEvaluator::Sign::Sub;
    auto rep2 = residual_certify(exact, homog(), p, 0.05);
    CHECK(rep2.pass);
}

TEST_CASE("U+ residual sign certifies with searched parameters") {
    auto& F = fix();
    auto cv = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConvexV, F.alpha, F.beta, 0.25));
    auto mk = [&](double eps, double q) { return make_u_plus(F.df, cv, eps, q, F.c_ab); };
    SamplePlan p;
    p.samples = 20000;
    p.seed = 7;
    p.t0 = -8;
    p.t1 = 8;
    p.x0 = -30;
    p.x1 = 30;
    p.depth = 7.0;
    // follow is bound per-candidate inside the search via a generic locator
    const double qf = 0.1;
    p.follow = [cv, &F, qf](double t, double x) { return F.c_ab * t + cv->psi(qf * x) / qf; };
    auto found = search_barrier_params(mk, homog(), homog().sigma(), p, 0.05);
    CHECK(found.report.pass);
    CHECK(found.report.min_residual >= -found.report.slack);
    CHECK(found.report.aux_min > 0.0);  // claim quantity positive at all samples

    // verdict stable under halving the FD steps
    auto again = residual_certify(mk(found.eps, found.q), homog(), p, 0.025);
    CHECK(again.pass == found.report.pass);
}

TEST_CASE("lower barrier residual certifies") {
    auto& F = fix();
    auto ccl = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConcaveLeft, F.alpha, 0.35, 0.25));
    auto mk = [&](double eps, double q) {
        return make_lower_barrier(1, F.df, ccl, eps, q, F.c_ab, F.curve);
    };
    SamplePlan p;
    p.samples = 20000;
    p.seed = 8;
    p.t0 = -8;
    p.t1 = 8;
    p.x0 = -30;
    p.x1 = 30;
    p.depth = 7.0;
    const double qf = 0.1;
    p.follow = [ccl, &F, qf](double t, double x) { return F.c_ab * t + ccl->psi(qf * x) / qf; };
    auto found = search_barrier_params(mk, homog(), homog().sigma(), p, 0.05);
    CHECK(found.report.pass);
    CHECK(found.report.max_residual <= found.report.slack);
}

TEST_CASE("merging upper barrier") {
    auto& F = fix();
    const double theta = kPi / 2;
    const double ca = F.curve.c_interp.value(F.alpha);
    const double ct = F.curve.c_interp.value(theta);
    const double cb = F.curve.c_interp.value(F.beta);
    auto tj = triple_junction(ca, ct, cb, F.alpha, theta, F.beta);
    REQUIRE(tj.c1 > 0.0);
    REQUIRE(tj.ch1 < 0.0);

    auto base1 = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConvexV, F.alpha, theta, 0.0));
    auto base2 = std::make_shared<InterfaceCurve>(
        build_interface_curve(CurveKind::ConvexV, theta, F.beta, 0.0));
    const double eps = 0.02, q = 0.1, rho = 0.4;
    auto mu = make_merging_upper(F.df, tj, base1, base2, rho, eps, q);
    CHECK(mu.t_neg < 0.0);

    // once the junctions are far apart, both branches reduce to the theta
    // front near the splice
    const double Tfar = -24.0 / (q * (tj.c1 - tj.ch1));
    const double split = 0.5 * (tj.c1 + tj.ch1) * Tfar;
    for (double dy = -4.0; dy <= 4.0; dy += 0.5) {
        const double y = ct * Tfar / std::sin(theta) + dy;
        const double ut =
            F.ft->sample(split * std::cos(theta) + y * std::sin(theta) - ct * Tfar, split, y);
        CHECK(std::abs(mu.barrier(Tfar, split, y) - ut) <= 1e-3);
        // and the two branch formulas agree across the splice
        const double left = mu.barrier(Tfar, split - 1e-7, y);
        const double right = mu.barrier(Tfar, split + 1e-7, y);
        CHECK(std::abs(left - right) <= 1e-5);
    }

    // dominates all three pulsating fronts
    Rng rng(99);
    double worst = 1e300;
    for (int n = 0; n < 8000; ++n) {
        const double t = mu.t_neg - rng.uniform(0.0, 20.0);
        const double x = rng.uniform(tj.ch1 * t - 25.0, tj.c1 * t + 25.0);
        const double yc = t * F.c_ab;  // between the junction heights
        const double y = yc + rng.uniform(-20.0, 20.0);
        const double m3 = std::max({F.fa->sample(x * F.fa->ex + y * F.fa->ey - ca * t, x, y),
                                    F.ft->sample(x * std::cos(theta) + y * std::sin(theta) - ct * t, x, y),
                                    F.fb->sample(x * F.fb->ex + y * F.fb->ey - cb * t, x, y)});
        worst = std::min(worst, mu.barrier(t, x, y) - m3);
    }
    CHECK(worst >= -2e-3);

    // residual certifies as a supersolution away from the splice; the bump
    // amplitude admissible here is much smaller than for the V-barrier, so
    // search a small grid
    const double sigma = homog().sigma();
    bool certified = false;
    ResidualReport best;
    for (double e2 : {sigma / 16, sigma / 8, sigma / 4}) {
        for (double q2 : {0.15, 0.1, 0.06}) {
            auto cand = make_merging_upper(F.df, tj, base1, base2, rho, e2, q2);
            SamplePlan p;
            p.samples = 20000;
            p.seed = 9;
            p.t0 = cand.t_neg - 20.0;
            p.t1 = cand.t_neg;
            p.x0 = -40.0;
            p.x1 = 40.0;
            p.depth = 7.0;
            p.follow = [&tj, base1, base2, q2, rho](double t, double x) {
                const double split = 0.5 * (tj.c1 + tj.ch1) * t;
                const double own = x <= split ? tj.c1 : tj.ch1;
                const double cy = x <= split ? tj.c2 : tj.ch2;
                const InterfaceCurve& cvb = x <= split ? *base1 : *base2;
                const double xo = q2 * (x - own * t);
                return cy * t + (cvb.psi(xo) + rho / std::cosh(xo)) / q2;
            };
            auto rep = residual_certify(cand.barrier, homog(), p, 0.05);
            best = rep;
            if (rep.pass && rep.aux_min > -1e-6) {
                certified = true;
                break;
            }
        }
        if (certified) break;
    }
    INFO("min=", best.min_residual, " slack=", best.slack, " aux=", best.aux_min);
    CHECK(certified);

    // beyond the validity horizon the evaluator refuses
    CHECK_THROWS_AS(mu.barrier(mu.t_neg + 1.0, 0.0, 0.0), OutsideValidity);
}

TEST_CASE("planar time-decaying subsolution") {
    auto& F = fix();
    auto vm = make_v_minus(F.ft, 0.02, 2.0, 1.0);
    // behaves like a shifted theta front minus the decaying bump at t = 0
    const double v0 = vm(0.0, 0.3, -1.0);
    const double u0 = F.ft->sample(-1.0 - 2.0 + 2.0 + 1.0, 0.3, -1.0) - 0.02;
    CHECK(v0 == doctest::Approx(u0).epsilon(1e-12));
    CHECK_THROWS_AS(make_v_minus(F.ft, -0.1, 2.0, 0.0), RejectedConfiguration);
}
