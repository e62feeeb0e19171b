#include "hypfill/halfplane.hpp"

#include <cmath>

namespace hypfill {

namespace {

void require_upper(const HalfPlanePoint& p) {
    if (!(p.y > 0.0)) throw InputError("point is not in the upper half-plane");
}

// Midpoint rule with panel doubling.  f is smooth on [lo, hi].
template <typename F>
double refine_midpoint(F f, double lo, double hi, double tol) {
    double prev = 0.0;
    for (long long m = 8; m <= (1LL << 26); m *= 2) {
        const double h = (hi - lo) / static_cast<double>(m);
        double acc = 0.0;
        for (long long i = 0; i < m; ++i)
            acc += f(lo + (static_cast<double>(i) + 0.5) * h);
        acc *= h;
        if (m > 8 && std::abs(acc - prev) < tol) return acc;
        prev = acc;
    }
    throw OracleError("quadrature failed to converge");
}

}  // namespace

double hyp_distance(const HalfPlanePoint& p, const HalfPlanePoint& q) {
    require_upper(p);
    require_upper(q);
    const double dx = p.x - q.x, dy = p.y - q.y;
    return std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y));
}

double busemann_numeric(const HalfPlanePoint& p, double t) {
    return hyp_distance({0.0, std::exp(t)}, p) - t;
}

double uniformized_polyline_length(const std::vector<HalfPlanePoint>& points,
                                   double tol) {
    if (points.size() < 2)
        throw InputError("polyline needs at least two points");
    for (const auto& p : points) require_upper(p);
    double total = 0.0;
    for (size_t i = 0; i + 1 < points.size(); ++i) {
        const HalfPlanePoint p = points[i], q = points[i + 1];
        const double scale = std::max({1.0, std::abs(p.x), std::abs(q.x), p.y, q.y});
        if (std::abs(p.x - q.x) < 1e-13 * scale) {
            // Vertical geodesic: gamma(s) = (x, y_p e^{+-s}), density y.
            const double S = std::abs(std::log(q.y / p.y));
            if (S == 0.0) continue;
            const double y0 = std::min(p.y, q.y);
            total += refine_midpoint([&](double s) { return y0 * std::exp(s); },
                                     0.0, S, tol);
        } else {
            // Circle orthogonal to the axis: center c, radius R.  With the
            // angle theta in (0, pi), hyperbolic arclength is
            // s = log tan(theta/2) and the density along the arc is
            // y = R sin(theta(s)) = R sech(s).
            const double c =
                (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) /
                (2.0 * (q.x - p.x));
            const double R = std::hypot(p.x - c, p.y);
            auto s_of = [&](const HalfPlanePoint& pt) {
                const double theta = std::atan2(pt.y, pt.x - c);
                return std::log(std::tan(theta / 2.0));
            };
            double s1 = s_of(p), s2 = s_of(q);
            if (s1 > s2) std::swap(s1, s2);
            total += refine_midpoint(
                [&](double s) { return R / std::cosh(s); }, s1, s2, tol);
        }
    }
    return total;
}

}  // namespace hypfill
