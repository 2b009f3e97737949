#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chessflow/geometry.hpp"

namespace chessflow {

/// Largest orbit kept point-by-point; longer runs go through advance_lift.
inline constexpr std::size_t kMaxStoredOrbit = 1'000'000;

/// The orbit p0, b(p0), ..., b^n(p0) with its monotone lift.
/// lift[i] mod 1 == points[i].s; lift[0] == points[0].s.
struct Orbit {
    std::vector<BoundaryPoint> points;
    std::vector<double> lift;
};

/// A chord error raised while computing point `step + 1` of an orbit.
struct StepFailure {
    GeometryErrorKind kind;
    std::size_t step;
    std::string message;
};

struct OrbitResult {
    Orbit orbit;                          ///< completed prefix
    std::optional<StepFailure> failure;   ///< set when the orbit was cut short
};

/// Running lift of an orbit without storing its points.
struct LiftSummary {
    BoundaryPoint start;
    BoundaryPoint end;
    std::size_t steps = 0;   ///< completed mappings
    std::int64_t laps = 0;   ///< whole turns around the boundary
    std::optional<StepFailure> failure;

    /// lift[steps] - lift[0].
    double displacement() const noexcept { return static_cast<double>(laps) + (end.s - start.s); }
};

/// One chord of the map; same contract as cast_chord.
BoundaryPoint half_step(const Domain& domain, const ChessParams& params, const BoundaryPoint& p,
                        int sign);

/// b(p, lambda): a chord of slope +rho followed by a chord of slope -rho.
BoundaryPoint step(const Domain& domain, const ChessParams& params, const BoundaryPoint& p);

/// Counterclockwise displacement from s_from to s_to, in (0, 1].
double forward_displacement(double s_from, double s_to);

/// Iterates n >= 1 mappings (n <= kMaxStoredOrbit), storing every point.
/// Geometry errors end the orbit early; the prefix is returned with the failure.
OrbitResult orbit(const Domain& domain, const ChessParams& params, const BoundaryPoint& p0,
                  std::size_t n);

/// Streaming variant of orbit: tracks only the current point and lap count.
LiftSummary advance_lift(const Domain& domain, const ChessParams& params, const BoundaryPoint& p0,
                         std::size_t n);

}  // namespace chessflow
