#include <doctest.h>

#include <cmath>
#include <random>

#include "chessflow/fractal.hpp"
#include "oracles.hpp"

using namespace chessflow;

namespace {

/// Sweep whose r values are the middle-thirds Cantor function at 3^levels cell midpoints.
SweepResult cantor_sweep(int levels = 7) {
    const int n = static_cast<int>(std::lround(std::pow(3.0, levels)));
    SweepResult s;
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) / n;
        s.lambdas.push_back(x);
        s.estimates.push_back({oracle::cantor(x), 10'000, 2e-4, EstimateStatus::converged});
    }
    return s;
}

std::vector<double> ternary_epsilons() {
    return {std::pow(3.0, -3), std::pow(3.0, -4), std::pow(3.0, -5), std::pow(3.0, -6)};
}

FractalErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const FractalError& e) {
        return e.kind();
    }
    FAIL("expected a FractalError");
    return FractalErrorKind::EmptySweep;
}

}  // namespace

TEST_CASE("box_count worked examples") {
    CHECK(box_count(std::vector<double>{0.1, 0.11}, 0.1) == 1);
    CHECK(box_count(std::vector<double>{0.1, 0.3, 0.9}, 0.1) == 3);
    std::vector<double> uniform;
    for (int i = 0; i < 999; ++i) uniform.push_back((i + 1) / 1000.0);
    CHECK(box_count(uniform, 0.01) == 100);
    CHECK(box_count(std::vector<double>{}, 0.1) == 0);
    CHECK_THROWS_AS(box_count(uniform, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(box_count(std::vector<double>{1.2}, 0.1), std::invalid_argument);
}

TEST_CASE("box_count is nonincreasing in the tile size") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> pts(500);
    for (auto& p : pts) p = unit(rng);
    std::size_t prev = box_count(pts, 1e-4);
    for (double e = 2e-4; e < 1.0; e *= 1.7) {
        const std::size_t q = box_count(pts, e);
        CHECK(q <= prev);
        prev = q;
    }
}

TEST_CASE("default epsilons") {
    const auto e = default_epsilons();
    REQUIRE(e.size() == 8);
    CHECK(e.front() == 0.5);
    CHECK(e.back() == std::ldexp(0.5, -7));
}

TEST_CASE("a sweep that is one plateau has dimension 0") {
    SweepResult flat;
    flat.lambdas = sweep_grid(40);
    flat.estimates.assign(40, RotationEstimate{0.25, 10000, 2e-4, EstimateStatus::converged});
    const PlateauReport rep = detect_plateaus(flat);
    REQUIRE(rep.S == 1.0);
    const StaircaseAnalysis a = staircase_dimension(flat, rep, default_epsilons());
    CHECK(a.all_plateau);
    CHECK(a.D_summary == 0.0);
    CHECK(a.D_minkowski == 0.0);
    for (const auto& r : a.per_epsilon) {
        CHECK(r.q == 0);
        REQUIRE(r.D);
        CHECK(*r.D == 0.0);
    }
}

TEST_CASE("unit-square sweep has dimension 1") {
    const SweepResult res = sweep(Domain::unit_square(), 999, 10'000, 0.123);
    const StaircaseAnalysis a = staircase_dimension(res, detect_plateaus(res), default_epsilons());
    CHECK(std::abs(a.D_summary - 1.0) <= 0.02);
    CHECK(std::abs(a.D_minkowski - 1.0) <= 0.02);
    CHECK(a.S <= 0.02);
}

TEST_CASE("Cantor staircase oracle") {
    const SweepResult s = cantor_sweep();
    const PlateauReport rep = detect_plateaus(s);
    CHECK(rep.S > 0.5);
    const StaircaseAnalysis a = staircase_dimension(s, rep, ternary_epsilons());
    const double expected = std::log(2.0) / std::log(3.0);
    CHECK(a.D_summary >= 0.58);
    CHECK(a.D_summary <= 0.68);
    CHECK(std::abs(a.D_summary - expected) <= 0.05);
    CHECK(std::abs(a.D_minkowski - expected) <= 0.05);
}

TEST_CASE("per-epsilon records follow the printed formulas") {
    const SweepResult s = cantor_sweep(5);
    const PlateauReport rep = detect_plateaus(s);
    const StaircaseAnalysis a = staircase_dimension(s, rep, default_epsilons());
    REQUIRE(a.per_epsilon.size() == 8);
    for (std::size_t i = 0; i < a.per_epsilon.size(); ++i) {
        const auto& r = a.per_epsilon[i];
        if (i > 0) CHECK(r.q >= a.per_epsilon[i - 1].q);
        REQUIRE(r.q > 0);
        CHECK(r.N == doctest::Approx((1.0 - a.S) / static_cast<double>(r.q)));
        if (r.q >= 2) {
            REQUIRE(r.D);
            CHECK(*r.D == doctest::Approx(std::log(r.N) / std::log(1.0 / r.q)));
        } else {
            CHECK_FALSE(r.D);
        }
    }
}

TEST_CASE("staircase_dimension is deterministic") {
    const SweepResult res = sweep(Domain::tilted_square(0.1), 199, 2000, 0.123);
    const PlateauReport rep = detect_plateaus(res);
    const StaircaseAnalysis a = staircase_dimension(res, rep, default_epsilons());
    const StaircaseAnalysis b = staircase_dimension(res, rep, default_epsilons());
    CHECK(a.D_summary == b.D_summary);
    CHECK(a.D_minkowski == b.D_minkowski);
    REQUIRE(a.per_epsilon.size() == b.per_epsilon.size());
    for (std::size_t i = 0; i < a.per_epsilon.size(); ++i) {
        CHECK(a.per_epsilon[i].q == b.per_epsilon[i].q);
        CHECK(a.per_epsilon[i].N == b.per_epsilon[i].N);
    }
}

TEST_CASE("staircase_dimension errors") {
    const SweepResult s = cantor_sweep(3);
    const PlateauReport rep = detect_plateaus(s);
    CHECK(kind_of([&] { staircase_dimension(s, rep, std::vector<double>{0.1}); }) ==
          FractalErrorKind::InvalidEpsilons);
    CHECK(kind_of([&] { staircase_dimension(s, rep, std::vector<double>{0.1, 0.05}); }) ==
          FractalErrorKind::InvalidEpsilons);
    CHECK(kind_of([&] { staircase_dimension(s, rep, std::vector<double>{0.1, -0.001}); }) ==
          FractalErrorKind::InvalidEpsilons);

    SweepResult dead;
    dead.lambdas = sweep_grid(5);
    dead.estimates.assign(5, RotationEstimate{std::nan(""), 0, INFINITY, EstimateStatus::missing});
    CHECK(kind_of([&] { staircase_dimension(dead, detect_plateaus(dead), default_epsilons()); }) ==
          FractalErrorKind::EmptySweep);
}

TEST_CASE("polyfit") {
    const std::vector<double> xs{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> line{1.0, 3.0, 5.0, 7.0};
    const auto c = polyfit(xs, line, 1);
    REQUIRE(c.size() == 2);
    CHECK(std::abs(c[0] - 1.0) < 1e-12);
    CHECK(std::abs(c[1] - 2.0) < 1e-12);

    // Exact on polynomial data.
    const std::vector<double> angles{0.0, 0.025, 0.05, 0.075, 0.1, 0.2};
    std::vector<double> quad;
    for (double a : angles) quad.push_back(1.0 - 0.7 * a - 3.5 * a * a);
    const auto q = polyfit(angles, quad, 2);
    for (std::size_t i = 0; i < angles.size(); ++i) CHECK(std::abs(polyval(q, angles[i]) - quad[i]) < 1e-9);
    CHECK(std::abs(q[2] + 3.5) < 1e-9);

    // A seeded noisy quadratic recovers its coefficients.
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 1e-3);
    std::vector<double> nx, ny;
    for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        nx.push_back(x);
        ny.push_back(0.5 + 0.25 * x - 0.75 * x * x + noise(rng));
    }
    const auto fit = polyfit(nx, ny, 2);
    CHECK(std::abs(fit[0] - 0.5) < 1e-2);
    CHECK(std::abs(fit[1] - 0.25) < 1e-2);
    CHECK(std::abs(fit[2] + 0.75) < 1e-2);

    CHECK(polyval(std::vector<double>{2.0, 0.0, 1.0}, 3.0) == 11.0);
    CHECK_THROWS_AS(polyfit(std::vector<double>{1.0}, std::vector<double>{1.0}, 1), std::invalid_argument);
    CHECK(kind_of([] { polyfit(std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{1.0, 2.0, 3.0}, 1); }) ==
          FractalErrorKind::RankDeficient);
}

TEST_CASE("dimension_vs_tilt") {
    TiltSweepConfig cfg;
    const std::vector<double> angles{0.0, 0.05, 0.1, 0.2};
    const TiltStudy study = dimension_vs_tilt(angles, cfg);
    REQUIRE(study.points.size() == 4);
    REQUIRE(study.fit.size() == 3);
    for (const auto& p : study.points) REQUIRE(p.D);
    CHECK(std::abs(*study.points[0].D - 1.0) <= 0.02);
    for (std::size_t i = 1; i < study.points.size(); ++i) CHECK(*study.points[i].D <= *study.points[i - 1].D + 0.03);
    for (const auto& p : study.points) {
        CHECK(*p.D >= 0.0);
        CHECK(*p.D <= 1.1);
        CHECK(p.fit_residual == doctest::Approx(*p.D - polyval(study.fit, p.angle)));
    }

    CHECK_THROWS_AS(dimension_vs_tilt(std::vector<double>{0.0, 0.1}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(dimension_vs_tilt(std::vector<double>{0.05, 0.1, 0.2}, cfg), std::invalid_argument);
}

TEST_CASE("per-angle failures are recorded, not thrown") {
    TiltSweepConfig cfg;
    cfg.grid_size = 50;
    cfg.n_per_point = 200;
    cfg.epsilons = {0.1};  // invalid: a single tile size
    const auto points = tilt_dimensions(std::vector<double>{0.0, 0.1}, cfg);
    REQUIRE(points.size() == 2);
    for (const auto& p : points) {
        CHECK_FALSE(p.D);
        CHECK_FALSE(p.error.empty());
    }
    const TiltStudy study = fit_tilt(points);
    CHECK(study.fit.empty());
}
