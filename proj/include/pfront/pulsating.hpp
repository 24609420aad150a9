#pragma once

#include <optional>
#include <vector>

#include "pfront/grid.hpp"
#include "pfront/io.hpp"
#include "pfront/media.hpp"
#include "pfront/profile_model.hpp"
#include "pfront/util.hpp"

namespace pfront {

struct PulsatingConfig {
    double h = 0.1;              // grid spacing (must divide both periods)
    double cfl_safety = 1.0;
    double window_along = 40.0;  // extent along the propagation axis
    double window_across = 6.0;  // extent across it
    double margin_along = 13.0;  // clamp margin beyond the tilt span
    double burn_in = 15.0;
    double fit_span = 24.0;      // speed-fit duration
    double bin_span = 12.0;      // profile-binning duration (after the fit)
    int fit_windows = 4;
    double ci_tol = 0.02;        // relative speed confidence gate
    double sample_dt = 0.25;     // front-position sampling cadence
    double bin_width = 0.05;
    double xi_halfwidth = 12.0;
    int fourier_order = 1;
    double knot_spacing = 0.8;
    double tail_floor = 2.5e-3;
    double speed_floor = 5e-3;   // |c| below this flags possibly-no-front
    double slope_halfwidth = 2.0;  // C for the stored slope floor
    int max_denominator = 12;    // lattice snap for the shear-wrapped window
    int threads = 1;
};

struct TailSlopeReport {
    double mu1 = 0.0;  // decay rate toward 0 (xi -> +inf)
    double mu2 = 0.0;  // decay rate toward 1 (xi -> -inf)
    double r = 0.0;    // min of -d_xi U over |xi| <= C
};

// A computed pulsating front: direction, fitted effective speed, smooth
// profile with U_e(0,0,0) = 1/2, plus tail metadata. Immutable after
// construction; safe for concurrent reads.
class PulsatingFront {
public:
    double ex = 0.0, ey = 1.0;
    double speed = 0.0;
    double speed_ci = 0.0;  // relative spread of window slopes
    ProfileModel profile;
    double mu1 = 0.0, mu2 = 0.0;
    double slope_floor_r = 0.0;
    double grid_h = 0.0;

    // raw binned table for export/replay
    ProfileTableData table;

    // profile sample with tail continuation, clamped into (0,1)
    double sample(double xi, double x, double y) const;
    double sample_dxi(double xi, double x, double y) const;

    double xi_min() const { return profile.xi_lo(); }
    double xi_max() const { return profile.xi_hi(); }
};

PulsatingFront compute_pulsating_front(const ReactionField& reaction, double ex, double ey,
                                       const PulsatingConfig& cfg);

// The lattice-commensurate direction the solver would actually use for e;
// downstream geometry (interface curves, pair angles) is built from snapped
// directions so barrier asymptotes match the front phases exactly.
void commensurate_direction(const ReactionField& reaction, const PulsatingConfig& cfg, double& ex,
                            double& ey);

// Rebuild a front from stored artifacts (bit-exact replay path).
PulsatingFront refit_front(const ReactionField& reaction, double ex, double ey, double speed,
                           double speed_ci, const ProfileTableData& table,
                           const PulsatingConfig& cfg);

double sample_profile(const PulsatingFront& front, double xi, double x, double y);

TailSlopeReport tail_and_slope_report(const PulsatingFront& front, double C);

// residual of the profile equation
//   c dU/dxi + d2U/dxi2 + 2 (grad_xy dU/dxi) . e + Lap_xy U + f(x,y,U) = 0
// sampled on the resolved span; a convergence diagnostic
double elliptic_residual_norm(const PulsatingFront& front, const ReactionField& reaction,
                              int nsamples, Rng& rng);

// Basis fronts at sampled angles with monotone-cubic speed interpolation and
// angle-linear profile blending. Angles are measured so that direction(theta)
// = (cos theta, sin theta).
class DirectionField {
public:
    DirectionField() = default;
    DirectionField(std::vector<double> angles, std::vector<PulsatingFront> fronts);

    bool covers(double theta) const {
        return !angles_.empty() && theta >= angles_.front() - 1e-12 && theta <= angles_.back() + 1e-12;
    }
    double theta_min() const { return angles_.front(); }
    double theta_max() const { return angles_.back(); }
    const std::vector<double>& angles() const { return angles_; }
    const std::vector<PulsatingFront>& fronts() const { return fronts_; }

    double speed(double theta) const;
    double dspeed(double theta) const;  // dc/dtheta of the interpolant

    // blended profile and its partial derivatives (orders <= 2 each)
    double profile_d(int dxi, int dx, int dy, double theta, double xi, double x, double y) const;
    double profile(double theta, double xi, double x, double y) const {
        return profile_d(0, 0, 0, theta, xi, x, y);
    }

private:
    int panel(double theta) const;
    std::vector<double> angles_;
    std::vector<PulsatingFront> fronts_;
    std::vector<double> slopes_;  // monotone-cubic node slopes for c(theta)
};

DirectionField build_direction_field(const ReactionField& reaction, const std::vector<double>& angles,
                                     const PulsatingConfig& cfg);

}  // namespace pfront
