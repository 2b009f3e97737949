#include "chessflow/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chessflow {

std::size_t box_count(std::span<const double> points, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("tile size must be positive");
    std::vector<long long> tiles;
    tiles.reserve(points.size());
    for (const double x : points) {
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("box_count points must lie in [0,1]");
        tiles.push_back(static_cast<long long>(std::floor(x / eps)));
    }
    std::sort(tiles.begin(), tiles.end());
    return static_cast<std::size_t>(std::unique(tiles.begin(), tiles.end()) - tiles.begin());
}

std::vector<double> default_epsilons() {
    std::vector<double> eps;
    for (int i = 0; i < 8; ++i) eps.push_back(0.5 * std::ldexp(1.0, -i));
    return eps;
}

namespace {

void check_epsilons(std::span<const double> epsilons) {
    if (epsilons.size() < 2) {
        throw FractalError(FractalErrorKind::InvalidEpsilons, "need at least two tile sizes");
    }
    for (const double e : epsilons) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw FractalError(FractalErrorKind::InvalidEpsilons, "tile sizes must be positive");
        }
    }
    const auto [lo, hi] = std::minmax_element(epsilons.begin(), epsilons.end());
    if (*hi / *lo < 10.0 * (1.0 - 1e-12)) {
        throw FractalError(FractalErrorKind::InvalidEpsilons, "tile sizes must span at least one decade");
    }
}

double slope(std::span<const double> xs, std::span<const double> ys) {
    return polyfit(xs, ys, 1)[1];
}

}  // namespace

StaircaseAnalysis staircase_dimension(const SweepResult& sweep, const PlateauReport& plateaus,
                                      std::span<const double> epsilons) {
    check_epsilons(epsilons);
    const std::size_t n = sweep.estimates.size();
    std::vector<bool> on_plateau(n, false);
    for (const Plateau& p : plateaus.plateaus) {
        for (std::size_t i = p.first; i <= p.last && i < n; ++i) on_plateau[i] = true;
    }
    std::vector<double> between;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!sweep.estimates[i].valid()) continue;
        ++valid;
        if (!on_plateau[i]) between.push_back(sweep.lambdas[i]);
    }
    if (valid == 0) throw FractalError(FractalErrorKind::EmptySweep, "EmptySweep: no valid estimates");

    StaircaseAnalysis analysis;
    analysis.S = plateaus.S;
    if (between.empty()) {
        analysis.all_plateau = true;
        for (const double e : epsilons) analysis.per_epsilon.push_back({e, 0, 0.0, 0.0});
        return analysis;
    }

    std::vector<double> log_eps, log_inv_eps, log_N, log_q;
    for (const double e : epsilons) {
        EpsilonRecord rec;
        rec.eps = e;
        rec.q = box_count(between, e);
        const double q = static_cast<double>(rec.q);
        rec.N = (1.0 - analysis.S) / q;
        if (rec.q >= 2) rec.D = std::log(rec.N) / std::log(1.0 / q);
        analysis.per_epsilon.push_back(rec);
        log_eps.push_back(std::log(e));
        log_inv_eps.push_back(-std::log(e));
        log_N.push_back(std::log(rec.N));
        log_q.push_back(std::log(q));
    }
    analysis.D_summary = slope(log_eps, log_N);
    analysis.D_minkowski = slope(log_inv_eps, log_q);
    return analysis;
}

std::vector<double> polyfit(std::span<const double> xs, std::span<const double> ys, std::size_t degree) {
    if (xs.size() != ys.size()) throw std::invalid_argument("polyfit: xs and ys differ in length");
    if (xs.size() < degree + 1) throw std::invalid_argument("polyfit: need at least degree+1 points");
    std::vector<double> distinct(xs.begin(), xs.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < degree + 1) {
        throw FractalError(FractalErrorKind::RankDeficient, "polyfit: too few distinct abscissae for the degree");
    }

    // Normal equations in a centred, scaled variable keep the system well conditioned.
    const std::size_t m = degree + 1;
    const double centre = 0.5 * (distinct.front() + distinct.back());
    const double half_span = std::max(0.5 * (distinct.back() - distinct.front()), 1e-300);
    std::vector<double> ata(m * m, 0.0), aty(m, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double t = (xs[i] - centre) / half_span;
        std::vector<double> powers(2 * m - 1, 1.0);
        for (std::size_t p = 1; p < powers.size(); ++p) powers[p] = powers[p - 1] * t;
        for (std::size_t r = 0; r < m; ++r) {
            aty[r] += powers[r] * ys[i];
            for (std::size_t c = 0; c < m; ++c) ata[r * m + c] += powers[r + c];
        }
    }
    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(ata[r * m + col]) > std::abs(ata[pivot * m + col])) pivot = r;
        if (std::abs(ata[pivot * m + col]) < 1e-300) {
            throw FractalError(FractalErrorKind::RankDeficient, "polyfit: singular normal equations");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < m; ++c) std::swap(ata[col * m + c], ata[pivot * m + c]);
            std::swap(aty[col], aty[pivot]);
        }
        for (std::size_t r = col + 1; r < m; ++r) {
            const double factor = ata[r * m + col] / ata[col * m + col];
            for (std::size_t c = col; c < m; ++c) ata[r * m + c] -= factor * ata[col * m + c];
            aty[r] -= factor * aty[col];
        }
    }
    std::vector<double> scaled(m, 0.0);
    for (std::size_t r = m; r-- > 0;) {
        double acc = aty[r];
        for (std::size_t c = r + 1; c < m; ++c) acc -= ata[r * m + c] * scaled[c];
        scaled[r] = acc / ata[r * m + r];
    }
    // Expand sum_j scaled_j ((x - centre)/half_span)^j into powers of x.
    std::vector<double> coeffs(m, 0.0);
    std::vector<double> basis{1.0};  // coefficients of ((x - centre)/half_span)^j
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t p = 0; p < basis.size(); ++p) coeffs[p] += scaled[j] * basis[p];
        std::vector<double> next(basis.size() + 1, 0.0);
        for (std::size_t p = 0; p < basis.size(); ++p) {
            next[p + 1] += basis[p] / half_span;
            next[p] -= basis[p] * centre / half_span;
        }
        basis = std::move(next);
    }
    return coeffs;
}

double polyval(std::span<const double> coefficients, double x) {
    double acc = 0.0;
    for (std::size_t i = coefficients.size(); i-- > 0;) acc = acc * x + coefficients[i];
    return acc;
}

std::vector<TiltPoint> tilt_dimensions(std::span<const double> angles, const TiltSweepConfig& config) {
    std::vector<TiltPoint> points;
    points.reserve(angles.size());
    for (const double angle : angles) {
        TiltPoint point;
        point.angle = angle;
        try {
            const Domain domain = Domain::tilted_square(angle);
            const SweepResult result = sweep(domain, config.grid_size, config.n_per_point, config.s0);
            const PlateauReport plateaus = detect_plateaus(result, config.plateau);
            const StaircaseAnalysis analysis = staircase_dimension(result, plateaus, config.epsilons);
            point.D = analysis.D_summary;
            point.S = analysis.S;
        } catch (const FractalError& e) {
            point.error = e.what();
        } catch (const GeometryError& e) {
            point.error = e.what();
        }
        points.push_back(std::move(point));
    }
    return points;
}

TiltStudy fit_tilt(std::vector<TiltPoint> points) {
    TiltStudy study;
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        if (p.D) {
            xs.push_back(p.angle);
            ys.push_back(*p.D);
        }
    }
    if (!xs.empty()) {
        std::vector<double> distinct(xs);
        std::sort(distinct.begin(), distinct.end());
        const std::size_t unique_count =
            static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
        const std::size_t degree = std::min<std::size_t>(2, unique_count - 1);
        study.fit = polyfit(xs, ys, degree);
        for (auto& p : points) {
            if (p.D) p.fit_residual = *p.D - polyval(study.fit, p.angle);
        }
    }
    study.points = std::move(points);
    return study;
}

TiltStudy dimension_vs_tilt(std::span<const double> angles, const TiltSweepConfig& config) {
    if (angles.size() < 3) throw std::invalid_argument("tilt study needs at least three angles");
    if (std::find(angles.begin(), angles.end(), 0.0) == angles.end()) {
        throw std::invalid_argument("tilt study must include angle 0");
    }
    return fit_tilt(tilt_dimensions(angles, config));
}

}  // namespace chessflow
