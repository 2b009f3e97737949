#include "chessflow/billiard.hpp"

#include <stdexcept>

namespace chessflow {

BoundaryPoint half_step(const Domain& domain, const ChessParams& params, const BoundaryPoint& p,
                        int sign) {
    return cast_chord(domain, p, sign, params);
}

BoundaryPoint step(const Domain& domain, const ChessParams& params, const BoundaryPoint& p) {
    const BoundaryPoint mid = half_step(domain, params, p, +1);
    return half_step(domain, params, mid, -1);
}

double forward_displacement(double s_from, double s_to) {
    const double d = s_to - s_from;
    return d > 0.0 ? d : d + 1.0;
}

namespace {

// Advances one mapping and updates the lap counter. The lift increment of a
// mapping is the counterclockwise displacement of the composed map, in (0, 1].
template <typename OnPoint>
std::optional<StepFailure> iterate(const Domain& domain, const ChessParams& params,
                                   const BoundaryPoint& p0, std::size_t n, std::int64_t& laps,
                                   BoundaryPoint& current, std::size_t& completed, OnPoint&& on_point) {
    current = p0;
    laps = 0;
    completed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        BoundaryPoint next;
        try {
            next = step(domain, params, current);
        } catch (const GeometryError& e) {
            return StepFailure{e.kind(), i, e.what()};
        }
        if (next.s <= current.s) ++laps;
        current = next;
        completed = i + 1;
        on_point(current, laps);
    }
    return std::nullopt;
}

}  // namespace

OrbitResult orbit(const Domain& domain, const ChessParams& params, const BoundaryPoint& p0,
                  std::size_t n) {
    if (n < 1) throw std::invalid_argument("orbit needs at least one iteration");
    if (n > kMaxStoredOrbit) {
        throw std::invalid_argument("orbit too long to store; use advance_lift for streaming runs");
    }
    OrbitResult result;
    result.orbit.points.reserve(n + 1);
    result.orbit.lift.reserve(n + 1);
    result.orbit.points.push_back(p0);
    result.orbit.lift.push_back(p0.s);

    std::int64_t laps = 0;
    BoundaryPoint current;
    std::size_t completed = 0;
    result.failure = iterate(domain, params, p0, n, laps, current, completed,
                             [&](const BoundaryPoint& p, std::int64_t l) {
                                 result.orbit.points.push_back(p);
                                 result.orbit.lift.push_back(static_cast<double>(l) + p.s);
                             });
    return result;
}

LiftSummary advance_lift(const Domain& domain, const ChessParams& params, const BoundaryPoint& p0,
                         std::size_t n) {
    LiftSummary summary;
    summary.start = p0;
    summary.failure = iterate(domain, params, p0, n, summary.laps, summary.end, summary.steps,
                              [](const BoundaryPoint&, std::int64_t) {});
    return summary;
}

}  // namespace chessflow
