#pragma once
/**
 * @file fractal.hpp
 * @brief Devil's-staircase dimension of rotation-number sweeps.
 *
 * For a sweep with plateau fraction S, the points between plateaus are boxed
 * at several tile sizes eps. Per tile size we report
 *
 *     q(eps) = number of tiles [j eps, (j+1) eps) hit by non-plateau points,
 *     N(eps) = (1 - S) / q(eps),
 *     D(eps) = log N(eps) / log(1 / q(eps)),
 *
 * and two regression summaries: D_summary, the slope of log N(eps) against
 * log eps, and D_minkowski, the slope of log q(eps) against log(1/eps).
 */

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chessflow/rotation.hpp"

namespace chessflow {

struct EpsilonRecord {
    double eps = 0.0;
    std::size_t q = 0;
    double N = 0.0;
    std::optional<double> D;  ///< undefined when q < 2
};

struct StaircaseAnalysis {
    double S = 0.0;
    std::vector<EpsilonRecord> per_epsilon;
    double D_summary = 0.0;
    double D_minkowski = 0.0;
    bool all_plateau = false;  ///< every valid point sits on a plateau; dimensions are 0
};

/// Number of distinct tiles [j eps, (j+1) eps) containing at least one point.
std::size_t box_count(std::span<const double> points, double eps);

/// 0.5 * 2^-i for i = 0..7.
std::vector<double> default_epsilons();

/// Needs >= 2 tile sizes spanning at least a factor of 10.
/// Throws FractalError(EmptySweep) when the sweep has no valid estimate.
StaircaseAnalysis staircase_dimension(const SweepResult& sweep, const PlateauReport& plateaus,
                                      std::span<const double> epsilons);

/// Least-squares polynomial coefficients, constant term first.
/// Throws FractalError(RankDeficient) when fewer than degree+1 distinct xs exist.
std::vector<double> polyfit(std::span<const double> xs, std::span<const double> ys, std::size_t degree);
double polyval(std::span<const double> coefficients, double x);

struct TiltSweepConfig {
    std::size_t grid_size = 999;
    std::size_t n_per_point = kDefaultSweepIterations;
    double s0 = 0.123;
    PlateauOptions plateau{};
    std::vector<double> epsilons = default_epsilons();
};

struct TiltPoint {
    double angle = 0.0;
    std::optional<double> D;      ///< D_summary of the tilted-square sweep
    std::optional<double> S;
    std::string error;            ///< set when D is missing
    double fit_residual = 0.0;    ///< D minus the fitted polynomial at angle
};

struct TiltStudy {
    std::vector<TiltPoint> points;
    std::vector<double> fit;      ///< polynomial coefficients, constant term first
};

/// Sweep, plateau detection and staircase dimension of tilted_square(angle)
/// for each angle, without fitting.
std::vector<TiltPoint> tilt_dimensions(std::span<const double> angles, const TiltSweepConfig& config);

/// tilt_dimensions over >= 3 angles including 0, plus a least-squares quadratic in angle.
TiltStudy dimension_vs_tilt(std::span<const double> angles, const TiltSweepConfig& config);

/// Fits a polynomial of degree min(2, usable points - 1) to the available D
/// values and fills in per-point residuals.
TiltStudy fit_tilt(std::vector<TiltPoint> points);

}  // namespace chessflow
