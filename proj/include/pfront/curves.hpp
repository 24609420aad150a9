#pragma once

#include <cmath>

#include "pfront/errors.hpp"

namespace pfront {

enum class CurveKind {
    ConvexV,       // slopes rise from -cot(alpha) to -cot(beta); psi'' > 0
    ConcaveLeft,   // slopes fall from -cot(alpha) to -cot(alpha1), alpha1 < alpha; psi'' < 0
    ConcaveRight,  // slopes fall from -cot(beta1) to -cot(beta), beta1 > beta; psi'' < 0
};

// Smooth curve with two straight asymptotes: line - circular arc - line,
// mollified at the tangency points by a quintic blend, plus a sech term
// (+rho for convex, -rho for concave) that makes the asymptote approach
// rates sech-bounded from below. Evaluators up to the third derivative.
class InterfaceCurve {
public:
    double psi(double x) const { return d(x, 0); }
    double dpsi(double x) const { return d(x, 1); }
    double d2psi(double x) const { return d(x, 2); }
    double d3psi(double x) const { return d(x, 3); }

    CurveKind kind() const { return kind_; }
    double angle_left() const { return ang_left_; }    // normal angle as x -> -inf
    double angle_right() const { return ang_right_; }  // normal angle as x -> +inf
    double slope_left() const { return mL_; }
    double slope_right() const { return mR_; }
    double rho() const { return rho_; }

    // scanned (K_1)-style constants: asymptote-approach ratio bounds and the
    // curvature envelope, all against sech(x)
    double k1() const { return k1_; }
    double k2() const { return k2_; }
    double K1() const { return K1_; }

    // slope deviations off the asymptotes, computed piecewise so the far-tail
    // values do not cancel against the asymptote slope:
    //   dev_left  = sgn * (psi' - mL) >= 0, dev_right = sgn * (mR - psi') >= 0
    // with sgn = +1 for the convex kind and -1 for the concave kinds
    double dev_left(double x) const;
    double dev_right(double x) const;

    friend InterfaceCurve build_interface_curve(CurveKind kind, double a1, double a2, double rho,
                                                double radius, double moll_frac);

private:
    double d(double x, int order) const;
    double base(double x, int order) const;  // convex line-arc-line, mollified

    CurveKind kind_ = CurveKind::ConvexV;
    double ang_left_ = 0.0, ang_right_ = 0.0;
    double mL_ = 0.0, mR_ = 0.0;  // asymptote slopes of psi
    double bm1_ = 0.0, bm2_ = 0.0;  // slopes of the internal convex base
    double sign_ = 1.0;             // psi = sign*base + sign*rho*sech
    double rho_ = 0.0;
    double cx_ = 0.0, cy_ = 0.0, r_ = 1.0;  // incircle
    double xt1_ = 0.0, xt2_ = 0.0;          // tangency points
    double w_ = 0.1;                        // mollification half-width
    double k1_ = 0.0, k2_ = 0.0, K1_ = 0.0;
};

// ConvexV: a1 = alpha, a2 = beta with 0 < alpha < beta < pi.
// ConcaveLeft: a1 = alpha, a2 = alpha1 with 0 < alpha1 < alpha.
// ConcaveRight: a1 = beta, a2 = beta1 with beta < beta1 < pi.
// rho >= 0; rho = 0 builds the bare line-arc-line (used as a base by the
// merging barrier, which adds its own traveling sech terms).
InterfaceCurve build_interface_curve(CurveKind kind, double a1, double a2, double rho,
                                     double radius = 2.0, double moll_frac = 0.2);

}  // namespace pfront
