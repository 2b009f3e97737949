#pragma once
/**
 * @file geometry.hpp
 * @brief Convex planar domains, their arc-length boundary parameterization, and
 *        characteristic chords of slope +-sqrt(1-lambda^2)/lambda.
 *
 * Every domain is stored as a closed counterclockwise chain of boundary pieces
 * (straight segments and quarter-circle arcs). The parameter s in [0,1) is the
 * fraction of the perimeter measured counterclockwise from the lexicographically
 * smallest boundary point (for polygons that point is a vertex).
 *
 * Tolerances:
 *   - user-supplied points must lie within kInputTolerance of the boundary;
 *   - internal consistency (vertex hits, distinct chord endpoints) uses
 *     kConsistencyTolerance.
 */

#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include "chessflow/errors.hpp"

namespace chessflow {

inline constexpr double kInputTolerance = 1e-6;
inline constexpr double kConsistencyTolerance = 1e-9;
inline constexpr double kParallelTolerance = 1e-12;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

/// A point on the boundary with both its parameter and Cartesian position.
struct BoundaryPoint {
    double s{0.0};
    Vec2 xy{};
};

/// Frequency parameter of the forcing and the derived characteristic slope.
class ChessParams {
public:
    /// Throws GeometryError(DegenerateLambda) unless 0 < lambda < 1.
    explicit ChessParams(double lambda);

    double lambda() const noexcept { return lambda_; }
    /// sqrt(1-lambda^2)/lambda.
    double rho() const noexcept { return rho_; }
    /// Unit direction of the chord with the given slope sign: (lambda, sign*sqrt(1-lambda^2)).
    Vec2 direction(int sign) const noexcept { return {lambda_, sign > 0 ? mu_ : -mu_}; }

private:
    double lambda_;
    double mu_;
    double rho_;
};

struct UnitSquareSpec {};
struct PolygonSpec {
    std::vector<Vec2> vertices;
};
struct TiltedSquareSpec {
    double angle = 0.0;
};
struct TrapezoidSpec {
    double bottom_width = 1.0;
    double top_width = 1.0;
    double height = 1.0;
};
struct RoundedSquareSpec {
    double corner_radius = 0.1;
};

using DomainSpec =
    std::variant<UnitSquareSpec, PolygonSpec, TiltedSquareSpec, TrapezoidSpec, RoundedSquareSpec>;

/// Straight boundary piece from `a` to `b`.
struct SegmentPiece {
    Vec2 a;
    Vec2 b;
};

/// Counterclockwise circular arc of `sweep` radians starting at angle `start`.
struct ArcPiece {
    Vec2 center;
    double radius;
    double start;
    double sweep;
};

using BoundaryPiece = std::variant<SegmentPiece, ArcPiece>;

/// Immutable convex domain. Safe to share across threads.
class Domain {
public:
    static Domain unit_square();
    /// Vertices must be counterclockwise and strictly convex.
    static Domain polygon(std::vector<Vec2> vertices);
    /// Unit square rotated counterclockwise by `angle` radians about (1/2, 1/2).
    static Domain tilted_square(double angle);
    /// Isosceles trapezoid with its bottom edge on y = 0 starting at the origin.
    static Domain trapezoid(double bottom_width, double top_width, double height);
    /// Unit square whose corners are replaced by quarter circles of `corner_radius`.
    static Domain rounded_square(double corner_radius);
    static Domain from_spec(const DomainSpec& spec);

    const DomainSpec& spec() const noexcept { return spec_; }
    double perimeter() const noexcept { return perimeter_; }
    std::span<const BoundaryPiece> pieces() const noexcept { return pieces_; }
    /// True corners of the boundary (tangent discontinuities). Empty for rounded squares.
    std::span<const Vec2> corners() const noexcept { return corners_; }
    Vec2 anchor() const noexcept { return anchor_; }

    /// Signed depth of `p` inside the domain: positive inside, zero on the
    /// boundary, negative outside. Equals the distance to the boundary for
    /// interior points.
    double interior_depth(const Vec2& p) const;

private:
    Domain(DomainSpec spec, std::vector<BoundaryPiece> pieces, std::vector<Vec2> corners);

    DomainSpec spec_;
    std::vector<BoundaryPiece> pieces_;
    std::vector<double> piece_start_;  // cumulative arc length at the start of each piece
    std::vector<double> piece_length_;
    std::vector<Vec2> corners_;
    std::vector<Vec2> edge_directions_;  // unit directions of straight pieces
    Vec2 anchor_{};
    double perimeter_ = 0.0;

    friend BoundaryPoint boundary_point(const Domain&, double);
    friend double arc_parameter(const Domain&, const Vec2&);
    friend BoundaryPoint cast_chord(const Domain&, const BoundaryPoint&, int, const ChessParams&);
};

/// Point at fraction `s` of the perimeter counterclockwise from the anchor.
/// `s` is wrapped into [0,1).
BoundaryPoint boundary_point(const Domain& domain, double s);

/// Inverse of boundary_point. Throws GeometryError(PointNotOnBoundary) when
/// `point` is further than kInputTolerance from the boundary.
double arc_parameter(const Domain& domain, const Vec2& point);

/// Travels from `p` along the line of slope sign*rho to the other boundary
/// intersection.
///
/// Errors (GeometryError):
///   - EdgeParallel when some straight boundary edge is parallel to the chord;
///   - VertexHit when the landing point is within kConsistencyTolerance of a
///     corner, or when `p` is a corner and the line only touches the domain there;
///   - Tangency when the line touches a smooth part of the boundary only at `p`.
BoundaryPoint cast_chord(const Domain& domain, const BoundaryPoint& p, int sign,
                         const ChessParams& params);

/// Cyclic distance between two boundary parameters, in [0, 1/2].
double cyclic_distance(double s1, double s2);

}  // namespace chessflow
