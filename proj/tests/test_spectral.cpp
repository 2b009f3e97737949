#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chessflow/rotation.hpp"
#include "chessflow/spectral.hpp"
#include "oracles.hpp"

using namespace chessflow;

namespace {

constexpr double kPi = std::numbers::pi;
const double kGoldenLambda = lambda_for_rotation((std::sqrt(5.0) - 1.0) / 2.0);

Grid sample(int N, auto&& fn, double offset = 0.0) {
    Grid g(N);
    for (int i1 = 0; i1 < N; ++i1)
        for (int i2 = 0; i2 < N; ++i2) g.at(i1, i2) = fn((i1 + offset) / N, (i2 + offset) / N);
    return g;
}

FourierField random_hermitian(int K, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    FourierField f(K);
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            if (std::make_pair(k1, k2) < std::make_pair(-k1, -k2)) continue;
            if (k1 == 0 && k2 == 0) {
                f.at(0, 0) = gauss(rng);
                continue;
            }
            const cplx c{gauss(rng), gauss(rng)};
            f.at(k1, k2) = c;
            f.at(-k1, -k2) = std::conj(c);
        }
    }
    return f;
}

double max_diff(const FourierField& a, const FourierField& b) {
    double worst = 0.0;
    a.for_each_mode([&](int k1, int k2, const cplx& c) { worst = std::max(worst, std::abs(c - b.at(k1, k2))); });
    return worst;
}

/// Real, mean-zero field with |f_hat(k)| = (1 + |k|^2)^(-exponent/2).
FourierField power_profile(int K, double exponent) {
    FourierField f(K);
    f.for_each_mode([&](int k1, int k2, const cplx&) {
        if (k1 == 0 && k2 == 0) return;
        f.at(k1, k2) = std::pow(1.0 + k1 * k1 + k2 * k2, -exponent / 2.0);
    });
    return f;
}

SolverConfig config_for(double lambda, SolverMode mode = SolverMode::paper) {
    SolverConfig c;
    c.lambda = lambda;
    c.mode = mode;
    return c;
}

}  // namespace

TEST_CASE("analyze worked examples") {
    const FourierField one = analyze(sample(16, [](double, double) { return 1.0; }), 4);
    CHECK(std::abs(one.at(0, 0) - 1.0) < 1e-12);
    one.for_each_mode([](int k1, int k2, const cplx& c) {
        if (k1 != 0 || k2 != 0) CHECK(std::abs(c) <= 1e-12);
    });

    const FourierField cosine = analyze(sample(32, [](double x1, double) { return std::cos(2 * kPi * x1); }), 8);
    CHECK(std::abs(cosine.at(1, 0) - 0.5) < 1e-12);
    CHECK(std::abs(cosine.at(-1, 0) - 0.5) < 1e-12);
    cosine.for_each_mode([](int k1, int k2, const cplx& c) {
        if (std::abs(k1) != 1 || k2 != 0) CHECK(std::abs(c) <= 1e-12);
    });
    CHECK(cosine.hermitian_defect() < 1e-12);
}

TEST_CASE("Gaussian bump coefficients match the analytic transform and decay") {
    const double sigma = 0.06, c1 = 0.5, c2 = 0.5;
    const Grid g = sample(128, [&](double x1, double x2) { return oracle::gaussian(x1, x2, sigma, c1, c2); });
    const FourierField f = analyze(g, 32);
    double worst = 0.0;
    f.for_each_mode([&](int k1, int k2, const cplx& c) {
        worst = std::max(worst, std::abs(c - oracle::gaussian_hat(k1, k2, sigma, c1, c2)));
        if (std::max(std::abs(k1), std::abs(k2)) >= 30) CHECK(std::abs(c) < 1e-10);
    });
    CHECK(worst < 1e-12);
    CHECK(f.hermitian_defect() < 1e-12);
}

TEST_CASE("analyze requires N >= 2K + 2") {
    CHECK_THROWS_AS(analyze(Grid(17), 8), SpectralError);
    CHECK_NOTHROW(analyze(Grid(18), 8));
    CHECK_THROWS_AS(analyze_sine(Grid(9), 4), SpectralError);
}

TEST_CASE("direct-sum oracle agrees with the separable transform") {
    const Grid g = synthesize(random_hermitian(5, 3), 24);
    CHECK(max_diff(analyze(g, 11), serial::analyze(g, 11)) < 1e-12);
}

TEST_CASE("synthesize worked examples and round trips") {
    FourierField mode(1);
    mode.at(1, 0) = 0.5;
    mode.at(-1, 0) = 0.5;
    const Grid g = synthesize(mode, 16);
    for (int i1 = 0; i1 < 16; ++i1)
        for (int i2 = 0; i2 < 16; ++i2) CHECK(std::abs(g.at(i1, i2) - std::cos(2 * kPi * i1 / 16.0)) < 1e-14);

    const Grid zero = synthesize(FourierField(4), 12);
    for (double v : zero.values) CHECK(v == 0.0);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const FourierField f = random_hermitian(8, seed);
        CHECK(max_diff(analyze(synthesize(f, 64), 8), f) < 1e-10);
    }
    const FourierField big = random_hermitian(32, 77);
    CHECK(max_diff(analyze(synthesize(big, 128), 32), big) < 1e-10);
}

TEST_CASE("sine basis round trip and a single sine mode") {
    const Grid g = sample(
        32, [](double x1, double x2) { return std::sin(kPi * x1) * std::sin(2 * kPi * x2); }, 0.5);
    const FourierField f = analyze_sine(g, 6);
    CHECK(f.basis() == Basis::sine);
    CHECK(std::abs(f.at(1, 2) - 1.0) < 1e-12);
    f.for_each_mode([](int k1, int k2, const cplx& c) {
        if (k1 != 1 || k2 != 2) CHECK(std::abs(c) < 1e-12);
    });

    FourierField s(6, Basis::sine);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss;
    for (int k1 = 1; k1 <= 6; ++k1)
        for (int k2 = 1; k2 <= 6; ++k2) s.at(k1, k2) = gauss(rng);
    CHECK(max_diff(analyze_sine(synthesize(s, 20), 6), s) < 1e-12);
}

TEST_CASE("derivative_field") {
    FourierField constant(3);
    constant.at(0, 0) = 2.5;
    const FourierField d0 = derivative_field(constant, 1);
    d0.for_each_mode([](int, int, const cplx& c) { CHECK(c == cplx{}); });

    FourierField mode(2);
    mode.at(1, 0) = {0.3, -0.2};
    const FourierField d1 = derivative_field(mode, 1);
    CHECK(std::abs(d1.at(1, 0) - cplx{0.0, 2 * kPi} * cplx{0.3, -0.2}) < 1e-15);
    const FourierField d2 = derivative_field(mode, 2);
    CHECK(std::abs(d2.at(1, 0)) == 0.0);
    CHECK_THROWS_AS(derivative_field(mode, 3), std::invalid_argument);
    CHECK_THROWS_AS(derivative_field(FourierField(2, Basis::sine), 1), SpectralError);
}

TEST_CASE("derivative matches an eighth-order finite-difference oracle") {
    const int N = 512;
    const double h = 1.0 / N;
    // Centred weights for the first derivative, offsets 1..4.
    const double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    for (std::uint64_t seed = 10; seed < 13; ++seed) {
        const FourierField f = random_hermitian(8, seed);
        const Grid g = synthesize(f, N);
        for (int axis = 1; axis <= 2; ++axis) {
            const Grid d = synthesize(derivative_field(f, axis), N);
            double worst = 0.0;
            for (int i1 = 0; i1 < N; ++i1) {
                for (int i2 = 0; i2 < N; ++i2) {
                    double fd = 0.0;
                    for (int m = 1; m <= 4; ++m) {
                        const double plus = axis == 1 ? g.at((i1 + m) % N, i2) : g.at(i1, (i2 + m) % N);
                        const double minus = axis == 1 ? g.at((i1 - m + N) % N, i2) : g.at(i1, (i2 - m + N) % N);
                        fd += w[m - 1] * (plus - minus);
                    }
                    worst = std::max(worst, std::abs(fd / h - d.at(i1, i2)));
                }
            }
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("u_hat worked examples") {
    CHECK_THROWS_AS(u_hat(1.0, 1, 1, config_for(1.0 / std::sqrt(2.0)), 0.0), ResonanceError);
    CHECK(u_hat(0.0, 2, 1, config_for(0.6), 1.3) == cplx{});
    CHECK(u_hat(1.0, 1, 0, config_for(0.6), 0.0).real() == doctest::Approx(0.0703619330849568).epsilon(1e-14));
    SolverConfig sine = config_for(0.6);
    sine.basis = Basis::sine;
    CHECK(u_hat(1.0, 1, 0, sine, 0.0).real() == doctest::Approx(0.2814477323398272).epsilon(1e-14));
    CHECK_THROWS(u_hat(1.0, 0, 0, config_for(0.6), 0.0));
    try {
        u_hat(1.0, 1, 1, config_for(1.0 / std::sqrt(2.0)), 0.0);
    } catch (const ResonanceError& e) {
        REQUIRE(e.modes().size() == 1);
        CHECK(e.modes()[0].k1 == 1);
        CHECK(e.modes()[0].k2 == 1);
        CHECK(e.modes()[0].lambda_sq_rational == doctest::Approx(0.5));
    }
}

TEST_CASE("solve worked examples") {
    FourierField single(2);
    single.at(1, 2) = 1.0;
    single.at(-1, -2) = 1.0;
    const std::vector<double> times{0.0, 0.5, 1.0};
    const auto u = solve(single, config_for(kGoldenLambda), times);
    REQUIRE(u.size() == 3);
    const double d = small_denominator(1, 2, kGoldenLambda);
    CHECK(std::abs(u[0].at(1, 2) - 1.0 / (4 * kPi * kPi * d)) < 1e-15);
    CHECK(std::isfinite(std::abs(u[2].at(1, 2))));
    CHECK(std::abs(d) * std::pow(std::sqrt(1.0 + 5.0), 1.1) >= denominator_margin(kGoldenLambda, 0.1, 2));

    const auto zero = solve(FourierField(5), config_for(0.37), times);
    for (const auto& f : zero) f.for_each_mode([](int, int, const cplx& c) { CHECK(c == cplx{}); });

    FourierField real_f = random_hermitian(6, 21);
    real_f.at(0, 0) = 0.0;
    for (const auto mode : {SolverMode::paper, SolverMode::ic_corrected}) {
        for (const auto& f : solve(real_f, config_for(kGoldenLambda, mode), times)) CHECK(f.hermitian_defect() < 1e-15);
    }
}

TEST_CASE("solve rejects nonzero mean and aggregates every resonant mode") {
    FourierField f(3);
    f.at(0, 0) = 1e-3;
    CHECK_THROWS_AS(solve(f, config_for(0.5), std::vector<double>{0.0}), SpectralError);

    FourierField g(3);
    g.at(1, 2) = 1.0;
    try {
        solve(g, config_for(1.0 / std::sqrt(2.0)), std::vector<double>{0.0});
        FAIL("expected ResonanceError");
    } catch (const ResonanceError& e) {
        // |k1| = |k2| in 1..3: twelve modes.
        CHECK(e.modes().size() == 12);
    }
    CHECK_THROWS_AS(solve(g, config_for(1.2), std::vector<double>{0.0}), GeometryError);
    SolverConfig mismatch = config_for(0.5);
    mismatch.basis = Basis::sine;
    CHECK_THROWS_AS(solve(g, mismatch, std::vector<double>{0.0}), SpectralError);
}

TEST_CASE("parallel solve matches the serial reference bit for bit") {
    FourierField f = random_hermitian(12, 8);
    f.at(0, 0) = 0.0;
    const std::vector<double> times{0.0, 0.25, 2.0};
    const auto a = solve(f, config_for(kGoldenLambda, SolverMode::ic_corrected), times);
    const auto b = serial::solve(f, config_for(kGoldenLambda, SolverMode::ic_corrected), times);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(max_diff(a[i], b[i]) == 0.0);
}

TEST_CASE("residual_check") {
    FourierField single(3);
    single.at(2, 1) = {0.7, 0.2};
    const double h = 1e-3;
    const std::vector<double> times{1.0 - h, 1.0, 1.0 + h};
    for (const auto mode : {SolverMode::paper, SolverMode::ic_corrected}) {
        const auto cfg = config_for(0.43, mode);
        const auto u = solve(single, cfg, times);
        const ResidualReport r = residual_check(u, single, cfg, times);
        CHECK(r.max_abs < 1e-4 * std::abs(single.at(2, 1)));
        CHECK(r.max_relative < 1e-4);
    }
    const auto cfg = config_for(0.43);
    const FourierField zero(3);
    CHECK(residual_check(solve(zero, cfg, times), zero, cfg, times).max_abs == 0.0);
    CHECK_THROWS_AS(residual_check(solve(zero, cfg, std::vector<double>{0.0, 1.0}), zero, cfg,
                                   std::vector<double>{0.0, 1.0}),
                    std::invalid_argument);
    const std::vector<double> uneven{0.0, 0.1, 0.3};
    CHECK_THROWS_AS(residual_check(solve(zero, cfg, uneven), zero, cfg, uneven), std::invalid_argument);
}

TEST_CASE("initial conditions: ic_corrected starts at rest, the uncorrected mode does not") {
    FourierField f(2);
    f.at(1, 1) = 1.0;
    f.at(-1, -1) = 1.0;
    const double lambda = 0.4;
    const double h = 1e-4;
    const std::vector<double> times{-h, 0.0, h};
    const auto ic = solve(f, config_for(lambda, SolverMode::ic_corrected), times);
    CHECK(std::abs(ic[1].at(1, 1)) < 1e-15);
    CHECK(std::abs((ic[2].at(1, 1) - ic[0].at(1, 1)) / (2 * h)) < 1e-6);
    const auto paper = solve(f, config_for(lambda), times);
    const double expected = 1.0 / (4 * kPi * kPi * small_denominator(1, 1, lambda));
    CHECK(std::abs(paper[1].at(1, 1) - expected) < 1e-15);
    CHECK(std::abs(expected) > 0.01);
}

TEST_CASE("sobolev_weighted_sum") {
    CHECK(sobolev_weighted_sum(FourierField(4), 3.0) == 0.0);
    FourierField single(1);
    single.at(1, 0) = 1.0;
    CHECK(sobolev_weighted_sum(single, 1.0) == doctest::Approx(2.0));
    const FourierField bump =
        analyze(sample(64, [](double x1, double x2) { return oracle::gaussian(x1, x2, 0.08, 0.5, 0.5); }), 16);
    CHECK(sobolev_weighted_sum(bump, 2.0) >= sobolev_weighted_sum(bump, 0.0));
    double prev = 0.0;
    for (int K = 1; K <= 16; ++K) {
        const double v = sobolev_weighted_sum(bump.truncated(K), 1.5);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("denominator_margin") {
    CHECK_THROWS_AS(denominator_margin(1.0 / std::sqrt(2.0), 0.3, 1), ResonanceError);

    const double m50 = denominator_margin(kGoldenLambda, 0.1, 50);
    const double m100 = denominator_margin(kGoldenLambda, 0.1, 100);
    const double m200 = denominator_margin(kGoldenLambda, 0.1, 200);
    CHECK(m200 > 0.0);
    CHECK(std::abs(m200 / m100 - 1.0) <= 0.2);
    CHECK(std::min({m50, m100, m200}) >= 0.1);

    // r = 3/7 exactly: mode (4, 3) is resonant (lambda^2 = 9/25).
    try {
        denominator_margin(0.6, 0.1, 7);
        FAIL("expected ResonanceError");
    } catch (const ResonanceError& e) {
        bool found = false;
        for (const auto& m : e.modes()) found = found || (std::abs(m.k1) == 4 && std::abs(m.k2) == 3);
        CHECK(found);
    }
    // Slightly off 3/7 the margin collapses once K reaches the (4,3) family.
    const double near = lambda_for_rotation(3.0 / 7.0 + 1e-7);
    const double before = denominator_margin(near, 0.1, 3);
    const double after = denominator_margin(near, 0.1, 7);
    CHECK(before > 0.1);
    CHECK(after < 1e-4);
}

TEST_CASE("regularity_report") {
    const int K = 64;
    const double s = 4.0, beta = 0.1;
    const FourierField f = power_profile(K, s + 1.1);
    const RegularityReport good = regularity_report(f, config_for(kGoldenLambda), s, beta);
    CHECK(good.truncations == std::array<int, 3>{16, 32, 64});
    CHECK(good.stabilized);
    CHECK(std::abs(good.ratios[1] - 1.0) <= 0.05);
    for (int j = 1; j < 3; ++j) CHECK(good.u_sums[j] >= good.u_sums[j - 1]);

    FourierField single(4);
    single.at(1, 2) = 1.0;
    single.at(-1, -2) = 1.0;
    CHECK(regularity_report(single, config_for(kGoldenLambda), s, beta).stabilized);

    // lambda^2 = (1600 + 1e-8) / 2689 puts |D(33, 40)| at 1e-8, inside (K/2, K].
    const double spike = std::sqrt((1600.0 + 1e-8) / 2689.0);
    REQUIRE(std::abs(small_denominator(33, 40, spike)) == doctest::Approx(1e-8).epsilon(1e-3));
    const RegularityReport bad = regularity_report(f, config_for(spike), s, beta);
    CHECK_FALSE(bad.stabilized);
    CHECK(std::abs(bad.dominant_k1) == 33);
    CHECK(std::abs(bad.dominant_k2) == 40);
    // The four sign variants of (33, 40) share one denominator.
    CHECK(bad.dominant_share > 0.24);
    CHECK(bad.min_abs_denominator < 2e-8);

    CHECK_THROWS_AS(regularity_report(FourierField(3), config_for(0.5), s, beta), std::invalid_argument);
}
