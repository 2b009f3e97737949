#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "chessflow/arithmetic.hpp"
#include "chessflow/billiard.hpp"
#include "chessflow/geometry.hpp"

namespace chessflow {

inline constexpr std::size_t kDefaultSweepIterations = 10'000;
inline constexpr std::size_t kDefaultEstimateIterations = 100'000;
inline constexpr std::size_t kMinEstimateIterations = 100;

enum class EstimateStatus {
    converged,
    vertex_hit_truncated,
    missing,  ///< no estimate: the chord direction is parallel to an edge
};

const char* to_string(EstimateStatus status);

/// Birkhoff average of the lift. error_bound is 2/n for the iterations used.
struct RotationEstimate {
    double r = 0.0;
    std::size_t n = 0;
    double error_bound = 0.0;
    EstimateStatus status = EstimateStatus::converged;

    bool valid() const noexcept { return status != EstimateStatus::missing && n > 0; }
};

struct SweepResult {
    std::vector<double> lambdas;
    std::vector<RotationEstimate> estimates;
};

struct Plateau {
    std::size_t first = 0;  ///< index into the sweep
    std::size_t last = 0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double locked_r = 0.0;
    std::optional<Fraction> locked_rational;

    std::size_t size() const noexcept { return last - first + 1; }
};

struct PlateauReport {
    std::vector<Plateau> plateaus;
    double S = 0.0;  ///< fraction of valid sweep points lying on a plateau
};

struct PlateauOptions {
    double tol = 1e-4;
    std::size_t min_run = 3;
    std::int64_t q_max = 10;
};

/// r = (lift[n] - lift[0]) / n from s0. Needs n >= 100.
/// A vertex hit truncates the orbit; the prefix average is returned with
/// status vertex_hit_truncated. EdgeParallel and DegenerateLambda throw.
RotationEstimate estimate_rotation(const Domain& domain, double lambda, double s0,
                                   std::size_t n = kDefaultEstimateIterations);

/// lambda / (sqrt(1-lambda^2) + lambda), the rotation number of the unit square.
double r_square_exact(double lambda);

/// Inverse of r_square_exact: r / sqrt(r^2 + (1-r)^2).
double lambda_for_rotation(double r);

/// The open grid i/(grid_size+1), i = 1..grid_size.
std::vector<double> sweep_grid(std::size_t grid_size);

/// Rotation numbers over sweep_grid(grid_size), evaluated in parallel.
/// Edge-parallel grid points come back with status missing.
SweepResult sweep(const Domain& domain, std::size_t grid_size,
                  std::size_t n_per_point = kDefaultSweepIterations, double s0 = 0.123);

/// Maximal runs of >= min_run consecutive valid points whose values all lie
/// within tol of the run median, each tagged with the first convergent
/// (q <= q_max) matching its median within tol + the run's error bound.
/// No rational is attached when that window exceeds half the minimum spacing
/// of fractions with q <= q_max (typically runs of truncated orbits).
PlateauReport detect_plateaus(const SweepResult& sweep, const PlateauOptions& options = {});

namespace serial {

/// Single-threaded reference for chessflow::sweep; results are bit-identical.
SweepResult sweep(const Domain& domain, std::size_t grid_size,
                  std::size_t n_per_point = kDefaultSweepIterations, double s0 = 0.123);

}  // namespace serial

}  // namespace chessflow
