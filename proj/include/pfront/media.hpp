#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pfront/errors.hpp"

namespace pfront {

struct PeriodicCell {
    double L1 = 1.0;  // x-period
    double L2 = 1.0;  // y-period
};

enum class ReactionKind { HomogeneousCubic, CubicPeriodic, Tabulated };

// Built-in periodic threshold patterns. theta(x,y) = theta0 + amp * pattern.
enum class ThresholdPattern {
    Constant,   // theta0
    SinSin,     // sin(2*pi*kx*x/L1) * sin(2*pi*ky*y/L2)
    SinY,       // sin(2*pi*ky*y/L2)
    SinX,       // sin(2*pi*kx*x/L1)
};

struct MediumSpec {
    ReactionKind kind = ReactionKind::HomogeneousCubic;
    PeriodicCell cell;
    double theta0 = 0.25;
    double theta_amp = 0.0;
    int kx = 1;
    int ky = 1;
    ThresholdPattern pattern = ThresholdPattern::Constant;
    // tabulated media: f sampled on a regular (x,y,u) lattice over one cell
    // and u in [u_lo, u_hi] (must contain [0,1]); trilinear interpolation.
    int tab_nx = 0, tab_ny = 0, tab_nu = 0;
    double tab_ulo = -0.5, tab_uhi = 1.5;
    std::vector<double> tab_values;  // index (ix*tab_ny + iy)*tab_nu + iu
};

// The periodic bistable reaction f(x,y,u), its u-derivative and the measured
// assumption constants. Cell coordinates are quantized to 2^-26 of the period
// before the threshold pattern is evaluated, which makes the periodic
// identification f(x + k L1, y + m L2, u) = f(x, y, u) exact in floating point.
class ReactionField {
public:
    ReactionKind kind() const { return spec_.kind; }
    const PeriodicCell& cell() const { return spec_.cell; }
    const MediumSpec& spec() const { return spec_; }

    double lambda() const { return lambda_; }
    double sigma() const { return sigma_; }
    double lipschitz_M() const { return M_; }

    double theta(double x, double y) const;
    double f(double x, double y, double u) const;
    double f_u(double x, double y, double u) const;

    // evaluators are pure; safe for unrestricted concurrent reads
    bool is_cubic() const { return spec_.kind != ReactionKind::Tabulated; }

    friend ReactionField build_reaction(const MediumSpec& spec);

private:
    MediumSpec spec_;
    double lambda_ = 0.0;
    double sigma_ = 0.0;
    double M_ = 0.0;

    double pattern_value(double x, double y) const;
    double tab_f(double x, double y, double u) const;
};

struct AssumptionReport {
    double integral_H1 = 0.0;
    double quad_tolerance = 1e-8;
    double lambda_measured = 0.0;
    double sigma_measured = 0.0;
    double M_measured = 0.0;
    int sign = 0;  // sign the front speeds must share
    std::map<std::string, bool> passes;

    bool all_pass() const {
        for (const auto& kv : passes)
            if (!kv.second) return false;
        return true;
    }
};

ReactionField build_reaction(const MediumSpec& spec);

// Quadrature of f over one cell x [0,1] (midpoint rule) plus scans of f_u
// confirming the margin constants. resolution: points per period per axis
// (>= 8) and in u (>= 32).
AssumptionReport verify_assumptions(const ReactionField& reaction, int res_xy, int res_u);

}  // namespace pfront
