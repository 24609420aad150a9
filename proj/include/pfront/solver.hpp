#pragma once

#include "pfront/grid.hpp"
#include "pfront/media.hpp"

namespace pfront {

// Forward Euler with the 5-point Laplacian:
//   u <- u + dt * (Lap_h u + f(x, y, u))
// Monotone under the step restriction dt * (2/hx^2 + 2/hy^2 + M) <= 1, which
// is enforced; componentwise-ordered inputs stay ordered and [0,1] data stays
// in [0,1] for bistable media.
void advance(Field& state, const ReactionField& reaction, double dt, long steps,
             const BoundaryPolicy& bc, int threads = 1);

// Largest monotone step for this grid/medium, with a small safety factor.
double cfl_dt(const Grid2D& grid, const ReactionField& reaction, double safety = 1.0);

// Translate the window by whole periods (k1*L1, k2*L2), preserving global
// coordinates; vacated cells take the far-field value of the active boundary
// policy on the vacated side. Periodic axes rotate exactly.
void recentre(Field& state, int k1, int k2, const ReactionField& reaction, const BoundaryPolicy& bc);

struct FrontPosition {
    double position = 0.0;  // mean crossing projected on the direction
    double spread = 0.0;    // max - min crossing (interface-width diagnostic)
    int lines = 0;          // scan lines considered
    int crossed = 0;        // lines with at least one crossing
};

// Locate the u = level set by scanning grid lines along the dominant axis of
// `direction`; crossings found by linear interpolation, ties resolved by the
// median crossing.
FrontPosition front_position(const Field& state, double ex, double ey, double level);

}  // namespace pfront
