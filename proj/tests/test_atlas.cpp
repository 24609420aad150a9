#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pfront/atlas.hpp"

using namespace pfront;

namespace {

constexpr double kPi = 3.14159265358979323846;

ReactionField homog(double a = 0.25) {
    MediumSpec s;
    s.kind = ReactionKind::HomogeneousCubic;
    s.theta0 = a;
    return build_reaction(s);
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

const SpeedCurveResult& homog_curve() {
    static SpeedCurveResult res = build_speed_curve(homog(), 13, 0.3, kPi - 0.3, coarse());
    return res;
}

}  // namespace

TEST_CASE("speed curve matches c/sin(theta) for the homogeneous medium") {
    const auto& res = homog_curve();
    const auto& cur = res.curve;
    REQUIRE(cur.failed_angles.empty());
    const double c = oracle::cubic_speed(0.25);

    CHECK(cur.g_at(kPi / 2) == doctest::Approx(c).epsilon(0.02));
    CHECK(cur.g_at(kPi / 6) == doctest::Approx(2.0 * c).epsilon(0.02));
    CHECK(cur.g_at(kPi / 4) == doctest::Approx(c * std::sqrt(2.0)).epsilon(0.02));

    // g' vanishes at the symmetry point and g is mirror symmetric
    CHECK(std::abs(cur.gprime_at(kPi / 2)) <= 0.05 * c);
    for (double th = 0.4; th < kPi / 2; th += 0.1)
        CHECK(cur.g_at(th) == doctest::Approx(cur.g_at(kPi - th)).epsilon(0.02));

    // g blows up like 1/sin toward the arc ends
    for (double th = 0.35; th < kPi / 2 - 0.2; th += 0.1) {
        CHECK(cur.g_at(th) > cur.g_at(th + 0.1));
        CHECK(cur.g_at(th) * std::sin(th) == doctest::Approx(c).epsilon(0.03));
    }
}

TEST_CASE("angle pairs on the homogeneous curve") {
    const auto& cur = homog_curve().curve;
    auto pairs = find_angle_pairs(cur, 24);
    REQUIRE(!pairs.empty());
    const double c = oracle::cubic_speed(0.25);

    // every returned pair is validated
    for (const auto& p : pairs) {
        CHECK(p.gp_alpha < 0.0);
        CHECK(p.gp_beta > 0.0);
        CHECK(p.interior_strict > 0.0);
        CHECK(std::abs(cur.g_at(p.alpha) - cur.g_at(p.beta)) <= 0.005 * p.c_ab);
        CHECK(p.alpha < p.beta);
    }
    // sorted by level
    for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i].c_ab >= pairs[i - 1].c_ab);

    // the pair at level 2c sits at (pi/6, 5pi/6) within one angle-grid step
    const double grid_step = (cur.theta.back() - cur.theta.front()) / (cur.theta.size() - 1.0);
    double best = 1e9;
    AnglePair bestp;
    for (const auto& p : pairs)
        if (std::abs(p.c_ab - 2 * c) < best) {
            best = std::abs(p.c_ab - 2 * c);
            bestp = p;
        }
    CHECK(std::abs(bestp.alpha - kPi / 6) <= grid_step);
    CHECK(std::abs(bestp.beta - 5 * kPi / 6) <= grid_step);

    // symmetric curve: beta = pi - alpha
    CHECK(bestp.beta == doctest::Approx(kPi - bestp.alpha).epsilon(0.02));
}

TEST_CASE("no pairs without an interior minimum") {
    SpeedCurve fake;
    fake.theta = {0.4, 0.6, 0.8, 1.0, 1.2};
    fake.c = {0.1, 0.2, 0.3, 0.4, 0.5};  // g monotonically rising: no minimum bracketed
    for (std::size_t i = 0; i < fake.theta.size(); ++i) fake.g.push_back(fake.c[i] / std::sin(fake.theta[i]));
    fake.gprime.assign(5, 0.0);
    fake.c_interp = MonotoneCubic(fake.theta, fake.c);
    CHECK_THROWS_AS(find_angle_pairs(fake, 8), NoPairs);
}

TEST_CASE("triple junction formulas") {
    // direct substitution: c_alpha = c_theta = 1, alpha = pi/4, theta = pi/2
    auto t = triple_junction(1.0, 1.0, 1.0, kPi / 4, kPi / 2, 3 * kPi / 4);
    CHECK(t.c1 == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
    CHECK(t.ch1 == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-12));

    // the junction velocity rides both fronts
    const double ca = 0.37, ct = 0.29, cb = 0.41;
    const double al = 0.6, th = 1.4, be = 2.5;
    auto u = triple_junction(ca, ct, cb, al, th, be);
    CHECK(u.c1 * std::cos(al) + u.c2 * std::sin(al) == doctest::Approx(ca).epsilon(1e-12));
    CHECK(u.c1 * std::cos(th) + u.c2 * std::sin(th) == doctest::Approx(ct).epsilon(1e-12));
    CHECK(u.ch1 * std::cos(be) + u.ch2 * std::sin(be) == doctest::Approx(cb).epsilon(1e-12));
    CHECK(u.ch1 * std::cos(th) + u.ch2 * std::sin(th) == doctest::Approx(ct).epsilon(1e-12));

    // signs at a valid triple: g(alpha) = g(beta) > g(theta)
    const auto& cur = homog_curve().curve;
    auto pairs = find_angle_pairs(cur, 24);
    const auto& p = pairs.back();
    auto tj = triple_junction(cur.c_interp.value(p.alpha), cur.c_interp.value(kPi / 2),
                              cur.c_interp.value(p.beta), p.alpha, kPi / 2, p.beta);
    CHECK(tj.c1 > 0.0);
    CHECK(tj.ch1 < 0.0);

    CHECK_THROWS_AS(triple_junction(1, 1, 1, 0.5, 0.5, 2.0), InvalidAngles);
    CHECK_THROWS_AS(triple_junction(1, 1, 1, 0.5, 0.50005, 2.0), InvalidAngles);
}

TEST_CASE("axis condition") {
    const auto& res = homog_curve();
    DirectionField df(res.curve.theta, res.fronts);

    // symmetric directions force the bisector
    const double a = 1.2, b = kPi - 1.2;
    auto sol = axis_condition(df, std::cos(a), std::sin(a), std::cos(b), std::sin(b));
    REQUIRE(sol.has_value());
    CHECK(std::abs(sol->e0x) <= 1e-9);
    CHECK(sol->e0y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol->residual <= 1e-6 * sol->c);
    CHECK(sol->c == doctest::Approx(df.speed(a) / std::sin(a)).epsilon(1e-9));
    CHECK(sol->interior_margin > 0.0);

    // asymmetric but admissible
    auto sol2 = axis_condition(df, std::cos(0.6), std::sin(0.6), std::cos(2.8), std::sin(2.8));
    REQUIRE(sol2.has_value());
    const double d1 = std::cos(0.6) * sol2->e0x + std::sin(0.6) * sol2->e0y;
    const double d2 = std::cos(2.8) * sol2->e0x + std::sin(2.8) * sol2->e0y;
    CHECK(df.speed(0.6) / d1 == doctest::Approx(df.speed(2.8) / d2).epsilon(1e-6));

    // directions outside the sampled arc propagate out-of-atlas
    CHECK_THROWS_AS(axis_condition(df, std::cos(0.1), std::sin(0.1), 0.0, 1.0), OutOfAtlas);
}
