#pragma once

#include <optional>
#include <vector>

#include "pfront/pulsating.hpp"

namespace pfront {

// Sampled theta -> (c, g = c/sin(theta), g') over an arc of (0, pi), with the
// reference axis (0,1): direction(theta) = (cos theta, sin theta).
struct SpeedCurve {
    std::vector<double> theta;   // actual lattice-snapped angles, sorted
    std::vector<double> c;
    std::vector<double> g;
    std::vector<double> gprime;  // centered differences on the sampled grid
    std::vector<double> failed_angles;
    int requested = 0;

    MonotoneCubic c_interp;  // exact at nodes

    double g_at(double th) const { return c_interp.value(th) / std::sin(th); }
    double gprime_at(double th) const {
        const double s = std::sin(th);
        return (c_interp.deriv(th) * s - c_interp.value(th) * std::cos(th)) / (s * s);
    }
};

struct SpeedCurveResult {
    SpeedCurve curve;
    std::vector<PulsatingFront> fronts;  // fronts for the succeeded angles
};

SpeedCurveResult build_speed_curve(const ReactionField& reaction, int n_angles, double arc_lo,
                                   double arc_hi, const PulsatingConfig& cfg);

// A validated pair g(alpha) = g(beta) = c_ab with the slope and interior
// strictness conditions of the existence theorem.
struct AnglePair {
    double alpha = 0.0, beta = 0.0;
    double c_ab = 0.0;
    double gp_alpha = 0.0, gp_beta = 0.0;  // interpolated g' at the pair angles
    double interior_strict = 0.0;          // min of c_ab - g(theta) on (alpha, beta)
    bool slope_ok = false;

    bool valid() const { return slope_ok && interior_strict > 0.0; }
};

std::vector<AnglePair> find_angle_pairs(const SpeedCurve& curve, int level_grid,
                                        double match_tol_rel = 0.005);

// Junction drift for the (alpha,theta) and (beta,theta) polyline corners.
struct TripleSpeeds {
    double c1 = 0.0, c2 = 0.0;    // (alpha,theta) corner velocity
    double ch1 = 0.0, ch2 = 0.0;  // (beta,theta) corner velocity
};

TripleSpeeds triple_junction(double c_alpha, double c_theta, double c_beta, double alpha,
                             double theta, double beta, double angle_floor = 1e-3);

// Rotated-axis condition: a drift direction e0 with
//   c_{e1} / (e1 . e0) = c_{e2} / (e2 . e0) = c_e1e2 > 0.
// The equality is solved in closed form; the empirically admissible band is
// the interior strictness check against the sampled curve.
struct AxisSolution {
    double e0x = 0.0, e0y = 1.0;
    double c = 0.0;               // common value c_e1e2
    double interior_margin = 0.0; // min of c - c_th/(e_th . e0) between the arms
    double residual = 0.0;        // |lhs - rhs| of the defining equation
};

std::optional<AxisSolution> axis_condition(const DirectionField& speeds, double e1x, double e1y,
                                           double e2x, double e2y);

}  // namespace pfront
