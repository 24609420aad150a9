#pragma once

#include <cmath>
#include <vector>

#include "pfront/errors.hpp"

namespace pfront {

// Uniform cubic B-spline with least-squares fit; C2 inside its span and
// continued linearly outside it (safe extrapolation).
class BSpline1D {
public:
    BSpline1D() = default;

    static BSpline1D fit(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::vector<double>& ws, double lo, double hi, double knot_spacing,
                         double ridge = 1e-9);

    double value(double x) const;
    double deriv1(double x) const;
    double deriv2(double x) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool empty() const { return coef_.empty(); }

private:
    double eval_inside(double x, int order) const;
    double lo_ = 0.0, hi_ = 0.0, dx_ = 1.0;
    std::vector<double> coef_;
};

// Tensor trigonometric basis on one periodic cell, orders 0..order per axis.
class CellFourier {
public:
    CellFourier() = default;
    CellFourier(int order, double L1, double L2) : order_(order), L1_(L1), L2_(L2) {}

    int order() const { return order_; }
    int count() const { const int n = 2 * order_ + 1; return n * n; }

    // d/dx^ax d/dy^ay of each basis function, ax, ay in {0,1,2}
    void eval(double x, double y, int ax, int ay, double* out) const;

private:
    int order_ = 0;
    double L1_ = 1.0, L2_ = 1.0;
};

// Smooth profile evaluator U(xi, x, y) stored in logit form:
//   U = s(z),  s(z) = 1/(1+e^-z),  z(xi,x,y) = sum_m z_m(xi) T_m(x,y),
// with cubic splines z_m and L-periodic trig modes T_m. The logit of a
// bistable front is close to linear in xi, so the spline error stays small
// and the continuation beyond the data range is an exact exponential tail.
// Values lie strictly inside (0,1) by construction.
class ProfileModel {
public:
    ProfileModel() = default;

    // mixed partial d^dxi/dxi d^dx/dx d^dy/dy, total order <= 2
    double d(int dxi, int dx, int dy, double xi, double x, double y) const;
    double value(double xi, double x, double y) const { return d(0, 0, 0, xi, x, y); }

    double xi_lo() const { return lo_ - shift_; }
    double xi_hi() const { return hi_ - shift_; }
    double mu_right() const { return mu_r_; }
    double mu_left() const { return mu_l_; }
    double shift() const { return shift_; }
    void set_shift(double s) { shift_ = s; }

    friend ProfileModel fit_profile_model(const std::vector<double>& xi,
                                          const std::vector<double>& tab, int ncx, int ncy,
                                          double L1, double L2, int order, double knot_spacing,
                                          double tail_floor);

private:
    double zeta(int dxi, int dx, int dy, double q, double x, double y) const;
    CellFourier basis_;
    std::vector<BSpline1D> splines_;
    double lo_ = 0.0, hi_ = 0.0;
    double mu_r_ = 1.0, mu_l_ = 1.0;  // |dz/dxi| at the span ends
    double shift_ = 0.0;
};

// Fit the model to a binned table tab[(k*ncx + i)*ncy + j] on xi bin centers;
// NaN entries mark missing bins. tail_floor sets how deep into the tails the
// logit data is trusted.
ProfileModel fit_profile_model(const std::vector<double>& xi, const std::vector<double>& tab,
                               int ncx, int ncy, double L1, double L2, int order,
                               double knot_spacing, double tail_floor);

}  // namespace pfront
