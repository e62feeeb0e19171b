#ifndef HYPFILL_HALFPLANE_HPP
#define HYPFILL_HALFPLANE_HPP

#include <vector>

#include "hypfill/errors.hpp"

namespace hypfill {

// Closed-form playground: the upper half-plane with the hyperbolic metric.
// Along the vertical geodesic t -> (0, e^t) the Busemann function is
// -log y, the height analogue is b itself, and the eps = 1 density e^{-b}
// equals y, whose length element is Euclidean.  Everything here is an
// independent numeric oracle: distances in closed form, Busemann by
// truncation, lengths by quadrature — no graph machinery involved.
struct HalfPlanePoint {
    double x = 0.0;
    double y = 1.0;  // must be positive
};

/// arccosh(1 + (dx^2 + dy^2) / (2 y_p y_q)); throws InputError off the
/// half-plane.
double hyp_distance(const HalfPlanePoint& p, const HalfPlanePoint& q);

/// d((0, e^t), p) - t.  Nonincreasing in t, converges to -log p.y.
double busemann_numeric(const HalfPlanePoint& p, double t);

/// Length of the piecewise-hyperbolic-geodesic path through `points` under
/// the density rho(x, y) = y: composite midpoint quadrature in the unit
/// (hyperbolic arclength) parametrization of each segment, panel count
/// doubled until successive values differ by < tol.
double uniformized_polyline_length(const std::vector<HalfPlanePoint>& points,
                                   double tol = 1e-8);

}  // namespace hypfill

#endif
