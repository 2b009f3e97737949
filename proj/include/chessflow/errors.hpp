#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chessflow {

enum class GeometryErrorKind {
    VertexHit,
    EdgeParallel,
    DegenerateLambda,
    PointNotOnBoundary,
    Tangency,
    InvalidDomain,
};

const char* to_string(GeometryErrorKind kind);

/// Raised by boundary and chord operations. Carries a machine-readable kind so
/// orbit and sweep drivers can decide between truncating and failing.
class GeometryError : public std::runtime_error {
public:
    GeometryError(GeometryErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    GeometryErrorKind kind() const noexcept { return kind_; }

private:
    GeometryErrorKind kind_;
};

/// One mode whose small denominator fell below the resonance tolerance.
struct ResonantMode {
    int k1 = 0;
    int k2 = 0;
    double denominator = 0.0;
    /// k2^2/(k1^2+k2^2), the rational value that lambda^2 nearly equals.
    double lambda_sq_rational = 0.0;
};

class ResonanceError : public std::runtime_error {
public:
    explicit ResonanceError(std::vector<ResonantMode> modes);

    const std::vector<ResonantMode>& modes() const noexcept { return modes_; }

private:
    std::vector<ResonantMode> modes_;
};

enum class ArithmeticErrorKind { RationalInput, InsufficientConvergents };

class ArithmeticError : public std::runtime_error {
public:
    ArithmeticError(ArithmeticErrorKind kind, const std::string& what,
                    std::optional<std::pair<std::int64_t, std::int64_t>> fraction = std::nullopt)
        : std::runtime_error(what), kind_(kind), fraction_(fraction) {}

    ArithmeticErrorKind kind() const noexcept { return kind_; }
    /// The detected p/q for RationalInput.
    const std::optional<std::pair<std::int64_t, std::int64_t>>& fraction() const noexcept {
        return fraction_;
    }

private:
    ArithmeticErrorKind kind_;
    std::optional<std::pair<std::int64_t, std::int64_t>> fraction_;
};

enum class SpectralErrorKind { GridTooCoarse, NonzeroMean, UnsupportedBasis };

class SpectralError : public std::runtime_error {
public:
    SpectralError(SpectralErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    SpectralErrorKind kind() const noexcept { return kind_; }

private:
    SpectralErrorKind kind_;
};

enum class FractalErrorKind { EmptySweep, InvalidEpsilons, RankDeficient };

class FractalError : public std::runtime_error {
public:
    FractalError(FractalErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    FractalErrorKind kind() const noexcept { return kind_; }

private:
    FractalErrorKind kind_;
};

/// Malformed input file (bad JSON, missing column, unparsable number).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chessflow
