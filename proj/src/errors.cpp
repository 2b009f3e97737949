#include "chessflow/errors.hpp"

#include <sstream>

namespace chessflow {

const char* to_string(GeometryErrorKind kind) {
    switch (kind) {
        case GeometryErrorKind::VertexHit: return "VertexHit";
        case GeometryErrorKind::EdgeParallel: return "EdgeParallel";
        case GeometryErrorKind::DegenerateLambda: return "DegenerateLambda";
        case GeometryErrorKind::PointNotOnBoundary: return "PointNotOnBoundary";
        case GeometryErrorKind::Tangency: return "Tangency";
        case GeometryErrorKind::InvalidDomain: return "InvalidDomain";
    }
    return "GeometryError";
}

namespace {

std::string describe(const std::vector<ResonantMode>& modes) {
    std::ostringstream os;
    os << "Resonance: " << modes.size() << " mode(s) below tolerance:";
    for (const auto& m : modes) {
        os << " (" << m.k1 << "," << m.k2 << ") D=" << m.denominator
           << " lambda^2~" << m.lambda_sq_rational << ";";
    }
    return os.str();
}

}  // namespace

ResonanceError::ResonanceError(std::vector<ResonantMode> modes)
    : std::runtime_error(describe(modes)), modes_(std::move(modes)) {}

}  // namespace chessflow
