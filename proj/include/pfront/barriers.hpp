#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "pfront/atlas.hpp"
#include "pfront/curves.hpp"
#include "pfront/pulsating.hpp"

namespace pfront {

// A pure space-time function with a declared residual sign. Values are
// compositions of pulsating-front profiles with interface geometry, so
// evaluation is thread-safe and allocation-free.
struct BarrierEvaluator {
    enum class Sign { Super, Sub };

    std::string name;
    Sign expected = Sign::Super;
    std::function<double(double, double, double)> value;  // (t, x, y)
    // guards FD sampling away from splices / validity horizons; empty = all ok
    std::function<bool(double, double, double)> smooth_at;
    // optional pointwise claim quantity reported alongside the residual
    std::string aux_name;
    std::function<double(double, double, double)> aux;
    // slope metadata: a positive floor on u_t in the interface band, required
    // by the time-shift wrapper
    double slope_floor_k = 0.0;
    double validity_t_max = std::numeric_limits<double>::infinity();

    double operator()(double t, double x, double y) const { return value(t, x, y); }
};

// max of the two pulsating-front compositions (the standard subsolution)
BarrierEvaluator make_u_minus(std::shared_ptr<const PulsatingFront> a,
                              std::shared_ptr<const PulsatingFront> b);

// three-front variant used by the merging experiment
BarrierEvaluator make_u_minus3(std::shared_ptr<const PulsatingFront> a,
                               std::shared_ptr<const PulsatingFront> b,
                               std::shared_ptr<const PulsatingFront> c);

// supersolution riding the convex curve y = psi(qx)/q with the direction
// field evaluated along the curve normal, plus the eps*sech(qx) bump
BarrierEvaluator make_u_plus(std::shared_ptr<const DirectionField> dirfield,
                             std::shared_ptr<const InterfaceCurve> curve, double eps, double q,
                             double c_ab);

// subsolutions riding the concave curves (K_4)/(K_5); `which` is 1 or 2.
// The speed curve is consulted to verify the auxiliary-angle condition
// g > g(anchor) on the auxiliary arc.
BarrierEvaluator make_lower_barrier(int which, std::shared_ptr<const DirectionField> dirfield,
                                    std::shared_ptr<const InterfaceCurve> curve, double eps,
                                    double q, double c_ab, const SpeedCurve& speeds);

// exponential-in-time shifted sub/supersolution wrapper
BarrierEvaluator time_shift(const BarrierEvaluator& base, double delta, double omega, double lambda,
                            BarrierEvaluator::Sign sign, double sigma);

// the planar subsolution of the necessity argument:
//   U_theta(x cos + y sin - c t - omega e^{-delta t} + omega + tau0) - delta e^{-delta t}
BarrierEvaluator make_v_minus(std::shared_ptr<const PulsatingFront> front_theta, double delta,
                              double omega, double tau0);

// time-dependent two-junction supersolution of the merging construction;
// valid for t <= t_neg (estimated at build time from the splice mismatch)
struct MergingUpper {
    BarrierEvaluator barrier;
    double t_neg = 0.0;            // validity horizon
    double splice_mismatch = 0.0;  // branch disagreement at the horizon
};
MergingUpper make_merging_upper(std::shared_ptr<const DirectionField> dirfield,
                                const TripleSpeeds& triple,
                                std::shared_ptr<const InterfaceCurve> curve_at,
                                std::shared_ptr<const InterfaceCurve> curve_tb, double rho,
                                double eps, double q);

struct SamplePlan {
    double t0 = -10.0, t1 = 0.0;
    double x0 = -30.0, x1 = 30.0;
    double depth = 8.0;     // sampled band around the interface, along y
    double drift = 0.0;     // interface drift rate (samples follow it)
    // optional interface locator: samples sit at y = follow(t,x) +- depth;
    // when empty, y = drift * t +- depth
    std::function<double(double, double)> follow;
    long samples = 100000;
    std::uint64_t seed = 1;
};

struct ResidualReport {
    double min_residual = 0.0;
    double max_residual = 0.0;
    double slack = 0.0;          // FD truncation estimate (Richardson)
    double fd_step = 0.0;
    long samples = 0;
    long violations = 0;         // beyond the slack, against the declared sign
    double worst_t = 0.0, worst_x = 0.0, worst_y = 0.0;
    double aux_min = std::numeric_limits<double>::infinity();
    std::string aux_name;
    bool pass = false;
};

// centered-difference residual L u = u_t - Lap u - f(x,y,u) over a seeded
// sample plan; deterministic for a given plan
ResidualReport residual_certify(const BarrierEvaluator& barrier, const ReactionField& reaction,
                                const SamplePlan& plan, double fd_step, int threads = 1);

// Constructive replacement for the non-computable constants behind the
// eps/scale choice: the smallest eps on a log grid admitting some scale q
// that certifies, searched with a thinned plan and confirmed on the full one.
struct ParamSearchResult {
    double eps = 0.0;
    double q = 0.0;
    ResidualReport report;
};

ParamSearchResult search_barrier_params(const std::function<BarrierEvaluator(double, double)>& make,
                                        const ReactionField& reaction, double sigma,
                                        const SamplePlan& plan, double fd_step, int threads = 1);

}  // namespace pfront
