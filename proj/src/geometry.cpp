#include "chessflow/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

namespace chessflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Slack on segment parameters when deciding whether a line crosses an edge.
constexpr double kSegmentSlack = 1e-12;
constexpr double kArcSlack = 1e-12;

double piece_length(const BoundaryPiece& piece) {
    if (const auto* seg = std::get_if<SegmentPiece>(&piece)) return distance(seg->a, seg->b);
    const auto& arc = std::get<ArcPiece>(piece);
    return arc.radius * arc.sweep;
}

Vec2 evaluate(const BoundaryPiece& piece, double length, double local) {
    if (const auto* seg = std::get_if<SegmentPiece>(&piece)) {
        const double u = length > 0.0 ? local / length : 0.0;
        return seg->a + (seg->b - seg->a) * u;
    }
    const auto& arc = std::get<ArcPiece>(piece);
    const double angle = arc.start + local / arc.radius;
    return {arc.center.x + arc.radius * std::cos(angle), arc.center.y + arc.radius * std::sin(angle)};
}

double wrap_unit(double s) {
    s -= std::floor(s);
    if (s >= 1.0) s = 0.0;
    return s;
}

// Angle of `v` relative to `start`, reduced into [0, 2pi).
double relative_angle(const Vec2& v, double start) {
    double rel = std::atan2(v.y, v.x) - start;
    rel = std::fmod(rel, kTwoPi);
    if (rel < 0.0) rel += kTwoPi;
    return rel;
}

std::vector<Vec2> checked_convex_ccw(std::vector<Vec2> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) {
        throw GeometryError(GeometryErrorKind::InvalidDomain, "polygon needs at least 3 vertices");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
        const Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        if (!(norm(e1) > 0.0)) {
            throw GeometryError(GeometryErrorKind::InvalidDomain, "polygon has a repeated vertex");
        }
        if (!(cross(e1, e2) > 0.0)) {
            std::ostringstream os;
            os << "polygon is not strictly convex and counterclockwise at vertex " << (i + 1) % n;
            throw GeometryError(GeometryErrorKind::InvalidDomain, os.str());
        }
    }
    // Strict convexity at every vertex still admits a star polygon winding twice.
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
        const Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        turning += std::atan2(cross(e1, e2), dot(e1, e2));
    }
    if (std::abs(turning - kTwoPi) > 1e-6) {
        throw GeometryError(GeometryErrorKind::InvalidDomain, "polygon boundary is not simple");
    }
    // Rotate so the lexicographically smallest vertex comes first.
    const auto smallest = std::min_element(vertices.begin(), vertices.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::rotate(vertices.begin(), smallest, vertices.end());
    return vertices;
}

std::vector<BoundaryPiece> polygon_pieces(const std::vector<Vec2>& vertices) {
    std::vector<BoundaryPiece> pieces;
    pieces.reserve(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        pieces.emplace_back(SegmentPiece{vertices[i], vertices[(i + 1) % vertices.size()]});
    }
    return pieces;
}

}  // namespace

ChessParams::ChessParams(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        std::ostringstream os;
        os << "lambda must lie in (0,1), got " << lambda;
        throw GeometryError(GeometryErrorKind::DegenerateLambda, os.str());
    }
    mu_ = std::sqrt(1.0 - lambda * lambda);
    rho_ = mu_ / lambda;
}

Domain::Domain(DomainSpec spec, std::vector<BoundaryPiece> pieces, std::vector<Vec2> corners)
    : spec_(std::move(spec)), pieces_(std::move(pieces)), corners_(std::move(corners)) {
    double total = 0.0;
    for (const auto& piece : pieces_) {
        const double len = piece_length(piece);
        piece_start_.push_back(total);
        piece_length_.push_back(len);
        total += len;
        if (const auto* seg = std::get_if<SegmentPiece>(&piece)) {
            const Vec2 e = seg->b - seg->a;
            edge_directions_.push_back(e * (1.0 / norm(e)));
        }
    }
    perimeter_ = total;
    if (!(perimeter_ > 0.0) || !std::isfinite(perimeter_)) {
        throw GeometryError(GeometryErrorKind::InvalidDomain, "perimeter must be finite and positive");
    }
    anchor_ = evaluate(pieces_.front(), piece_length_.front(), 0.0);
}

Domain Domain::unit_square() {
    return Domain(UnitSquareSpec{}, polygon_pieces({{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
                  {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

Domain Domain::polygon(std::vector<Vec2> vertices) {
    auto ordered = checked_convex_ccw(std::move(vertices));
    auto pieces = polygon_pieces(ordered);
    return Domain(PolygonSpec{ordered}, std::move(pieces), ordered);
}

Domain Domain::tilted_square(double angle) {
    if (!std::isfinite(angle)) {
        throw GeometryError(GeometryErrorKind::InvalidDomain, "tilt angle must be finite");
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    std::vector<Vec2> vertices;
    for (const Vec2& v : {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}}) {
        const Vec2 d = v - Vec2{0.5, 0.5};
        vertices.push_back({0.5 + c * d.x - s * d.y, 0.5 + s * d.x + c * d.y});
    }
    auto ordered = checked_convex_ccw(std::move(vertices));
    auto pieces = polygon_pieces(ordered);
    return Domain(TiltedSquareSpec{angle}, std::move(pieces), ordered);
}

Domain Domain::trapezoid(double bottom_width, double top_width, double height) {
    if (!(bottom_width > 0.0 && top_width > 0.0 && height > 0.0) ||
        !std::isfinite(bottom_width + top_width + height)) {
        throw GeometryError(GeometryErrorKind::InvalidDomain,
                            "trapezoid widths and height must be finite and positive");
    }
    const double inset = 0.5 * (bottom_width - top_width);
    auto ordered = checked_convex_ccw({{0.0, 0.0},
                                       {bottom_width, 0.0},
                                       {inset + top_width, height},
                                       {inset, height}});
    auto pieces = polygon_pieces(ordered);
    return Domain(TrapezoidSpec{bottom_width, top_width, height}, std::move(pieces), ordered);
}

Domain Domain::rounded_square(double r) {
    if (!(r > 0.0 && r < 0.5)) {
        throw GeometryError(GeometryErrorKind::InvalidDomain, "corner radius must lie in (0, 1/2)");
    }
    constexpr double pi = std::numbers::pi;
    const double far = 1.0 - r;
    // Starts at (0, r), the lexicographically smallest boundary point.
    std::vector<BoundaryPiece> pieces{
        ArcPiece{{r, r}, r, pi, pi / 2},
        SegmentPiece{{r, 0.0}, {far, 0.0}},
        ArcPiece{{far, r}, r, 1.5 * pi, pi / 2},
        SegmentPiece{{1.0, r}, {1.0, far}},
        ArcPiece{{far, far}, r, 0.0, pi / 2},
        SegmentPiece{{far, 1.0}, {r, 1.0}},
        ArcPiece{{r, far}, r, 0.5 * pi, pi / 2},
        SegmentPiece{{0.0, far}, {0.0, r}},
    };
    return Domain(RoundedSquareSpec{r}, std::move(pieces), {});
}

Domain Domain::from_spec(const DomainSpec& spec) {
    return std::visit(
        [](const auto& s) -> Domain {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UnitSquareSpec>) return unit_square();
            else if constexpr (std::is_same_v<T, PolygonSpec>) return polygon(s.vertices);
            else if constexpr (std::is_same_v<T, TiltedSquareSpec>) return tilted_square(s.angle);
            else if constexpr (std::is_same_v<T, TrapezoidSpec>)
                return trapezoid(s.bottom_width, s.top_width, s.height);
            else return rounded_square(s.corner_radius);
        },
        spec);
}

double Domain::interior_depth(const Vec2& p) const {
    if (const auto* rounded = std::get_if<RoundedSquareSpec>(&spec_)) {
        const double r = rounded->corner_radius;
        const double dx = std::max({r - p.x, 0.0, p.x - (1.0 - r)});
        const double dy = std::max({r - p.y, 0.0, p.y - (1.0 - r)});
        if (dx > 0.0 || dy > 0.0) return r - std::hypot(dx, dy);
        return std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y});
    }
    double depth = std::numeric_limits<double>::infinity();
    for (const auto& piece : pieces_) {
        const auto& seg = std::get<SegmentPiece>(piece);
        const Vec2 e = seg.b - seg.a;
        depth = std::min(depth, cross(e, p - seg.a) / norm(e));
    }
    return depth;
}

BoundaryPoint boundary_point(const Domain& domain, double s) {
    s = wrap_unit(s);
    const double target = s * domain.perimeter_;
    const auto it = std::upper_bound(domain.piece_start_.begin(), domain.piece_start_.end(), target);
    const std::size_t index = static_cast<std::size_t>(std::distance(domain.piece_start_.begin(), it)) - 1;
    const double len = domain.piece_length_[index];
    const double local = std::clamp(target - domain.piece_start_[index], 0.0, len);
    return {s, evaluate(domain.pieces_[index], len, local)};
}

double arc_parameter(const Domain& domain, const Vec2& point) {
    double best_distance = std::numeric_limits<double>::infinity();
    double best_position = 0.0;
    for (std::size_t i = 0; i < domain.pieces_.size(); ++i) {
        const double len = domain.piece_length_[i];
        double local = 0.0;
        if (const auto* seg = std::get_if<SegmentPiece>(&domain.pieces_[i])) {
            const Vec2 e = seg->b - seg->a;
            const double u = std::clamp(dot(point - seg->a, e) / dot(e, e), 0.0, 1.0);
            local = u * len;
        } else {
            const auto& arc = std::get<ArcPiece>(domain.pieces_[i]);
            const double rel = relative_angle(point - arc.center, arc.start);
            double angle = rel;
            if (rel > arc.sweep) angle = (rel - arc.sweep < kTwoPi - rel) ? arc.sweep : 0.0;
            local = angle * arc.radius;
        }
        const double d = distance(point, evaluate(domain.pieces_[i], len, local));
        if (d < best_distance) {
            best_distance = d;
            best_position = domain.piece_start_[i] + local;
        }
    }
    if (best_distance > kInputTolerance) {
        std::ostringstream os;
        os << "point (" << point.x << ", " << point.y << ") is " << best_distance
           << " away from the boundary";
        throw GeometryError(GeometryErrorKind::PointNotOnBoundary, os.str());
    }
    return wrap_unit(best_position / domain.perimeter_);
}

BoundaryPoint cast_chord(const Domain& domain, const BoundaryPoint& p, int sign,
                         const ChessParams& params) {
    const Vec2 d = params.direction(sign);
    for (const Vec2& e : domain.edge_directions_) {
        if (std::abs(cross(e, d)) < kParallelTolerance) {
            throw GeometryError(GeometryErrorKind::EdgeParallel,
                                "a boundary edge is parallel to the chord direction");
        }
    }

    double best_t = 0.0;
    std::size_t best_piece = 0;
    double best_local = 0.0;
    const auto consider = [&](double t, std::size_t piece, double local) {
        if (std::abs(t) > std::abs(best_t)) {
            best_t = t;
            best_piece = piece;
            best_local = local;
        }
    };

    for (std::size_t i = 0; i < domain.pieces_.size(); ++i) {
        const double len = domain.piece_length_[i];
        if (const auto* seg = std::get_if<SegmentPiece>(&domain.pieces_[i])) {
            const Vec2 e = seg->b - seg->a;
            const double denom = cross(d, e);
            if (denom == 0.0) continue;
            const Vec2 ap = seg->a - p.xy;
            const double u = cross(ap, d) / denom;
            if (u < -kSegmentSlack || u > 1.0 + kSegmentSlack) continue;
            consider(cross(ap, e) / denom, i, std::clamp(u, 0.0, 1.0) * len);
        } else {
            const auto& arc = std::get<ArcPiece>(domain.pieces_[i]);
            const Vec2 w = p.xy - arc.center;
            const double b = dot(w, d);
            const double disc = b * b - (dot(w, w) - arc.radius * arc.radius);
            if (disc < 0.0) continue;
            const double root = std::sqrt(disc);
            for (const double t : {-b - root, -b + root}) {
                const Vec2 q = p.xy + d * t;
                double rel = relative_angle(q - arc.center, arc.start);
                if (rel > kTwoPi - kArcSlack) rel -= kTwoPi;
                if (rel < -kArcSlack || rel > arc.sweep + kArcSlack) continue;
                consider(t, i, std::clamp(rel, 0.0, arc.sweep) * arc.radius);
            }
        }
    }

    if (std::abs(best_t) < kConsistencyTolerance) {
        for (const Vec2& c : domain.corners_) {
            if (distance(c, p.xy) < kConsistencyTolerance) {
                throw GeometryError(GeometryErrorKind::VertexHit,
                                    "chord from a corner leaves the domain immediately");
            }
        }
        throw GeometryError(GeometryErrorKind::Tangency, "chord is tangent to the boundary");
    }

    const Vec2 landing = evaluate(domain.pieces_[best_piece], domain.piece_length_[best_piece], best_local);
    for (const Vec2& c : domain.corners_) {
        if (distance(c, landing) < kConsistencyTolerance) {
            std::ostringstream os;
            os << "chord lands on corner (" << c.x << ", " << c.y << ")";
            throw GeometryError(GeometryErrorKind::VertexHit, os.str());
        }
    }
    const double s = wrap_unit((domain.piece_start_[best_piece] + best_local) / domain.perimeter_);
    return {s, landing};
}

double cyclic_distance(double s1, double s2) {
    const double d = wrap_unit(s1 - s2);
    return std::min(d, 1.0 - d);
}

}  // namespace chessflow
