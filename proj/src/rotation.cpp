#include "chessflow/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chessflow {

const char* to_string(EstimateStatus status) {
    switch (status) {
        case EstimateStatus::converged: return "converged";
        case EstimateStatus::vertex_hit_truncated: return "vertex_hit_truncated";
        case EstimateStatus::missing: return "missing";
    }
    return "unknown";
}

RotationEstimate estimate_rotation(const Domain& domain, double lambda, double s0, std::size_t n) {
    if (n < kMinEstimateIterations) {
        std::ostringstream os;
        os << "estimate_rotation needs n >= " << kMinEstimateIterations << ", got " << n;
        throw std::invalid_argument(os.str());
    }
    const ChessParams params(lambda);
    const LiftSummary summary = advance_lift(domain, params, boundary_point(domain, s0), n);

    RotationEstimate est;
    est.status = EstimateStatus::converged;
    if (summary.failure) {
        const auto kind = summary.failure->kind;
        if (kind == GeometryErrorKind::EdgeParallel || kind == GeometryErrorKind::DegenerateLambda) {
            throw GeometryError(kind, summary.failure->message);
        }
        est.status = EstimateStatus::vertex_hit_truncated;
    }
    est.n = summary.steps;
    if (est.n == 0) {
        est.r = std::numeric_limits<double>::quiet_NaN();
        est.error_bound = std::numeric_limits<double>::infinity();
        return est;
    }
    est.r = summary.displacement() / static_cast<double>(est.n);
    est.error_bound = 2.0 / static_cast<double>(est.n);
    return est;
}

double r_square_exact(double lambda) {
    const ChessParams params(lambda);  // validates lambda
    return lambda / (std::sqrt(1.0 - lambda * lambda) + lambda);
}

double lambda_for_rotation(double r) {
    if (!(r > 0.0 && r < 1.0)) {
        std::ostringstream os;
        os << "rotation number must lie in (0,1), got " << r;
        throw std::invalid_argument(os.str());
    }
    return r / std::hypot(r, 1.0 - r);
}

std::vector<double> sweep_grid(std::size_t grid_size) {
    if (grid_size < 2) throw std::invalid_argument("sweep grid needs at least 2 points");
    std::vector<double> grid(grid_size);
    const double denom = static_cast<double>(grid_size + 1);
    for (std::size_t i = 0; i < grid_size; ++i) grid[i] = static_cast<double>(i + 1) / denom;
    return grid;
}

namespace {

RotationEstimate sweep_point(const Domain& domain, double lambda, std::size_t n, double s0) {
    try {
        return estimate_rotation(domain, lambda, s0, n);
    } catch (const GeometryError&) {
        RotationEstimate missing;
        missing.r = std::numeric_limits<double>::quiet_NaN();
        missing.error_bound = std::numeric_limits<double>::infinity();
        missing.status = EstimateStatus::missing;
        return missing;
    }
}

void check_sweep_args(std::size_t n_per_point) {
    if (n_per_point < kMinEstimateIterations) {
        throw std::invalid_argument("sweep needs at least 100 iterations per point");
    }
}

}  // namespace

SweepResult sweep(const Domain& domain, std::size_t grid_size, std::size_t n_per_point, double s0) {
    check_sweep_args(n_per_point);
    SweepResult result;
    result.lambdas = sweep_grid(grid_size);
    result.estimates.resize(grid_size);
    const auto count = static_cast<std::int64_t>(grid_size);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) {
        result.estimates[static_cast<std::size_t>(i)] =
            sweep_point(domain, result.lambdas[static_cast<std::size_t>(i)], n_per_point, s0);
    }
    return result;
}

namespace serial {

SweepResult sweep(const Domain& domain, std::size_t grid_size, std::size_t n_per_point, double s0) {
    check_sweep_args(n_per_point);
    SweepResult result;
    result.lambdas = sweep_grid(grid_size);
    result.estimates.reserve(grid_size);
    for (const double lambda : result.lambdas) {
        result.estimates.push_back(sweep_point(domain, lambda, n_per_point, s0));
    }
    return result;
}

}  // namespace serial

namespace {

double median_of_sorted(const std::vector<double>& sorted) {
    const std::size_t m = sorted.size();
    return m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
}

bool within_median(const std::vector<double>& sorted, double tol) {
    const double med = median_of_sorted(sorted);
    return sorted.back() - med <= tol && med - sorted.front() <= tol;
}

}  // namespace

PlateauReport detect_plateaus(const SweepResult& sweep, const PlateauOptions& options) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("plateau tolerance must be positive");
    if (options.min_run < 3) throw std::invalid_argument("plateau min_run must be at least 3");
    if (sweep.lambdas.size() != sweep.estimates.size()) {
        throw std::invalid_argument("sweep lambdas and estimates differ in length");
    }

    PlateauReport report;
    const std::size_t n = sweep.estimates.size();
    const auto valid = [&](std::size_t i) { return sweep.estimates[i].valid(); };
    std::size_t valid_count = 0;
    std::size_t on_plateau = 0;
    for (std::size_t i = 0; i < n; ++i) valid_count += valid(i) ? 1 : 0;

    std::vector<double> sorted;
    std::size_t i = 0;
    while (i < n) {
        if (!valid(i)) {
            ++i;
            continue;
        }
        sorted.assign(1, sweep.estimates[i].r);
        std::size_t j = i;
        while (j + 1 < n && valid(j + 1)) {
            const double next = sweep.estimates[j + 1].r;
            const auto pos = sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), next), next);
            if (!within_median(sorted, options.tol)) {
                sorted.erase(pos);
                break;
            }
            ++j;
        }
        const std::size_t run = j - i + 1;
        if (run < options.min_run) {
            ++i;
            continue;
        }
        Plateau plateau;
        plateau.first = i;
        plateau.last = j;
        plateau.lambda_lo = sweep.lambdas[i];
        plateau.lambda_hi = sweep.lambdas[j];
        plateau.locked_r = median_of_sorted(sorted);
        double bound = 0.0;
        for (std::size_t k = i; k <= j; ++k) bound = std::max(bound, sweep.estimates[k].error_bound);
        // Distinct fractions with q <= q_max are at least 1/(q_max (q_max - 1)) apart;
        // a wider search window could not single one out.
        const double window = options.tol + bound;
        const double q = static_cast<double>(std::max<std::int64_t>(options.q_max, 2));
        if (window < 0.5 / (q * (q - 1.0))) {
            plateau.locked_rational = nearest_rational(plateau.locked_r, options.q_max, window);
        }
        report.plateaus.push_back(plateau);
        on_plateau += run;
        i = j + 1;
    }
    report.S = valid_count == 0 ? 0.0 : static_cast<double>(on_plateau) / static_cast<double>(valid_count);
    return report;
}

}  // namespace chessflow
