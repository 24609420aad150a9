#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pfront/pulsating.hpp"
#include "pfront/solver.hpp"

using namespace pfront;

namespace {

ReactionField homog(double a = 0.25) {
    MediumSpec s;
    s.kind = ReactionKind::HomogeneousCubic;
    s.theta0 = a;
    return build_reaction(s);
}

ReactionField sinsin() {
    MediumSpec s;
    s.kind = ReactionKind::CubicPeriodic;
    s.pattern = ThresholdPattern::SinSin;
    s.theta0 = 0.25;
    s.theta_amp = 0.1;
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

}  // namespace

TEST_CASE("homogeneous front speed and profile against the closed form") {
    auto r = homog();
    auto cfg = coarse();
    auto pf = compute_pulsating_front(r, 0.0, 1.0, cfg);
    CHECK(pf.speed == doctest::Approx(oracle::cubic_speed(0.25)).epsilon(0.02));

    // normalization pins the half level
    CHECK(pf.profile.value(0.0, 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sample_profile(pf, 0.0, 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-9));

    // profile matches the closed-form wave through the bulk
    for (double xi = -4.0; xi <= 4.01; xi += 0.5)
        CHECK(pf.sample(xi, 0.3, 0.8) == doctest::Approx(oracle::cubic_profile(xi)).epsilon(0.02));

    // periodic wrap in the cell arguments
    CHECK(pf.sample(1.3, 0.4 + 1.0, 0.7) == doctest::Approx(pf.sample(1.3, 0.4, 0.7)).epsilon(1e-12));

    // tails
    CHECK(pf.mu1 == doctest::Approx(oracle::cubic_tail_rate()).epsilon(0.05));
    CHECK(pf.mu2 == doctest::Approx(oracle::cubic_tail_rate()).epsilon(0.05));
    const double far = pf.sample(pf.xi_max() + 10.0, 0.0, 0.0);
    CHECK(far <= 1e-3);
    CHECK(far > 0.0);

    // slope floor at C = 2 equals the boundary slope of the closed form
    auto rep = tail_and_slope_report(pf, 2.0);
    CHECK(rep.r == doctest::Approx(-oracle::cubic_profile_slope(2.0)).epsilon(0.05));
    CHECK(rep.r > 0.0);

    // profile non-increasing in xi up to binning tolerance
    for (double xi = -8.0; xi <= 8.0; xi += 0.1) {
        CHECK(pf.sample(xi + 0.1, 0.5, 0.5) <= pf.sample(xi, 0.5, 0.5) + 1e-3);
    }
}

TEST_CASE("oblique direction equals axis direction for homogeneous media") {
    auto r = homog();
    auto cfg = coarse();
    auto py = compute_pulsating_front(r, 0.0, 1.0, cfg);
    auto px = compute_pulsating_front(r, 1.0, 0.0, cfg);
    auto pq = compute_pulsating_front(r, std::cos(1.0), std::sin(1.0), cfg);
    CHECK(px.speed == doctest::Approx(py.speed).epsilon(0.01));
    CHECK(pq.speed == doctest::Approx(py.speed).epsilon(0.015));
}

TEST_CASE("periodic medium front moves with the sign of the integral") {
    auto r = sinsin();
    auto cfg = coarse();
    auto pf = compute_pulsating_front(r, 0.0, 1.0, cfg);
    CHECK(pf.speed > 0.0);

    // flipping u -> 1-u flips the speed sign (within fit noise)
    MediumSpec flip;
    flip.kind = ReactionKind::CubicPeriodic;
    flip.pattern = ThresholdPattern::SinSin;
    flip.theta0 = 0.75;  // theta -> 1 - theta mirrors the cubic
    flip.theta_amp = -0.1;
    auto rf = build_reaction(flip);
    auto pff = compute_pulsating_front(rf, 0.0, 1.0, cfg);
    CHECK(pff.speed < 0.0);
    CHECK(std::abs(pff.speed + pf.speed) <= 0.03 * std::abs(pf.speed));
}

TEST_CASE("pulsation identity after burn-in") {
    auto r = sinsin();
    PulsatingConfig cfg = coarse();
    auto pf = compute_pulsating_front(r, 0.0, 1.0, cfg);
    const double c = pf.speed;

    // two independent runs: u(t + L2/c, x, y + L2) == u(t, x, y) on the interior
    Grid2D g{static_cast<int>(std::lround(4.0 / cfg.h)),
             static_cast<int>(std::lround(30.0 / cfg.h)) + 1, cfg.h, cfg.h, 0.0, -15.0};
    auto bc = BoundaryPolicy::upward_front();
    Field f(g);
    f.fill_with([&](double, double y) { return 1.0 / (1.0 + std::exp(y / std::sqrt(2.0))); });
    const double dt = cfl_dt(g, r);
    const double t1 = 16.0;
    advance(f, r, dt, std::lround(t1 / dt), bc);
    Field a = f;  // time t1
    const double period = r.cell().L2 / c;
    advance(f, r, dt, std::lround(period / dt), bc);

    double worst = 0.0;
    const int sj = static_cast<int>(std::lround(r.cell().L2 / cfg.h));
    for (int i = 0; i < g.nx; ++i)
        for (int j = 8; j + sj < g.ny - 8; ++j)
            worst = std::max(worst, std::abs(f.at(i, j + sj) - a.at(i, j)));
    CHECK(worst <= 2e-2);
}

TEST_CASE("elliptic residual of the fitted profile shrinks under refinement") {
    auto r = homog();
    auto c2 = coarse();  // h = 0.2
    PulsatingConfig c1 = c2;
    c1.h = 0.1;
    auto p2 = compute_pulsating_front(r, 0.0, 1.0, c2);
    auto p1 = compute_pulsating_front(r, 0.0, 1.0, c1);
    Rng rng(5);
    const double r2 = elliptic_residual_norm(p2, r, 4000, rng);
    const double r1 = elliptic_residual_norm(p1, r, 4000, rng);
    CHECK(r1 <= 0.5 * r2 + 5e-4);
}

TEST_CASE("direction field interpolation") {
    auto r = homog();
    auto cfg = coarse();
    const double pi = 3.14159265358979323846;
    std::vector<double> angles{pi / 6, pi / 3, pi / 2, 2 * pi / 3, 5 * pi / 6};
    auto df = build_direction_field(r, angles, cfg);

    // anchors exact
    for (std::size_t k = 0; k < angles.size(); ++k) {
        CHECK(df.speed(angles[k]) == df.fronts()[k].speed);
        CHECK(df.profile(angles[k], 0.7, 0.2, 0.9) == df.fronts()[k].profile.value(0.7, 0.2, 0.9));
    }

    // isotropy: interpolated speed constant within 2%
    const double c0 = df.speed(pi / 2);
    for (double th = pi / 6; th <= 5 * pi / 6 + 1e-9; th += pi / 24)
        CHECK(df.speed(th) == doctest::Approx(c0).epsilon(0.02));

    // dc/dtheta at midpoints agrees with centered differences of basis speeds
    for (std::size_t k = 1; k + 1 < angles.size(); ++k) {
        const double fd =
            (df.fronts()[k + 1].speed - df.fronts()[k - 1].speed) / (angles[k + 1] - angles[k - 1]);
        const double scale = std::abs(c0);
        CHECK(std::abs(df.dspeed(angles[k]) - fd) <= 0.1 * scale + 0.1 * std::abs(fd));
    }

    // interpolated profile stays in (0,1)
    Rng rng(31);
    for (int n = 0; n < 2000; ++n) {
        const double th = rng.uniform(pi / 6, 5 * pi / 6);
        const double v = df.profile(th, rng.uniform(-15, 15), rng.uniform(0, 1), rng.uniform(0, 1));
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }

    CHECK_THROWS_AS(df.speed(0.1), OutOfAtlas);
    CHECK_THROWS_AS(build_direction_field(r, {pi / 4, pi / 2, 3 * pi / 4}, cfg), RejectedConfiguration);
}

TEST_CASE("replay path refits identically from the stored table") {
    auto r = homog();
    auto cfg = coarse();
    auto pf = compute_pulsating_front(r, 0.0, 1.0, cfg);
    auto pf2 = refit_front(r, pf.ex, pf.ey, pf.speed, pf.speed_ci, pf.table, cfg);
    CHECK(pf2.profile.value(0.37, 0.21, 0.84) == pf.profile.value(0.37, 0.21, 0.84));
    CHECK(pf2.mu1 == pf.mu1);
    CHECK(pf2.slope_floor_r == pf.slope_floor_r);
}
