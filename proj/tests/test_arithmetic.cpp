#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "chessflow/arithmetic.hpp"
#include "oracles.hpp"

using namespace chessflow;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const double kSilver = std::sqrt(2.0) - 1.0;

ArithmeticErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const ArithmeticError& e) {
        return e.kind();
    }
    FAIL("expected an ArithmeticError");
    return ArithmeticErrorKind::RationalInput;
}

/// [0; 1, 2, 4, 8, ...]: partial quotients double, so approximations get
/// better than any fixed power of q.
double doubling_number(int terms) {
    std::vector<double> a{0.0};
    for (int i = 0; i < terms; ++i) a.push_back(std::ldexp(1.0, i));
    return oracle::evaluate_cf(a);
}

}  // namespace

TEST_CASE("continued_fraction worked examples") {
    const ContinuedFraction a = continued_fraction(3.0 / 7.0, 20);
    CHECK(a.exact);
    CHECK(a.a0 == 0);
    CHECK(a.terms == std::vector<std::int64_t>{2, 3});
    const auto e37 = oracle::euclid(3, 7);
    CHECK(a.terms == std::vector<std::int64_t>(e37.begin() + 1, e37.end()));

    const ContinuedFraction g = continued_fraction(kGolden, 20);
    CHECK_FALSE(g.exact);
    CHECK(g.terms.size() == 20);
    for (auto t : g.terms) CHECK(t == 1);

    const ContinuedFraction s = continued_fraction(kSilver, 15);
    CHECK(s.terms.size() == 15);
    for (auto t : s.terms) CHECK(t == 2);

    const ContinuedFraction whole = continued_fraction(3.0, 5);
    CHECK(whole.exact);
    CHECK(whole.a0 == 3);
    CHECK(whole.terms.empty());

    const ContinuedFraction negative = continued_fraction(-0.25, 5);
    CHECK(negative.a0 == -1);
    CHECK(negative.terms == std::vector<std::int64_t>{1, 3});
    CHECK_THROWS_AS(continued_fraction(0.5, 0), std::invalid_argument);
}

TEST_CASE("exact expansions match the integer Euclidean algorithm and never end in 1") {
    for (std::int64_t q = 2; q <= 60; ++q) {
        for (std::int64_t p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const ContinuedFraction cf = continued_fraction(static_cast<double>(p) / q, 40);
            REQUIRE(cf.exact);
            const auto e = oracle::euclid(p, q);
            CHECK(cf.terms == std::vector<std::int64_t>(e.begin() + 1, e.end()));
            if (cf.terms.size() > 1) CHECK(cf.terms.back() != 1);
            for (auto t : cf.terms) CHECK(t >= 1);
        }
    }
}

TEST_CASE("convergents worked examples") {
    const ContinuedFraction fib{0, {1, 1, 1, 1}, false};
    const auto c = convergents(fib);
    REQUIRE(c.size() == 5);
    const std::vector<std::pair<std::int64_t, std::int64_t>> expected{{0, 1}, {1, 1}, {1, 2}, {2, 3}, {3, 5}};
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c[i].p == expected[i].first);
        CHECK(c[i].q == expected[i].second);
    }
    const auto d = convergents(ContinuedFraction{0, {2, 3}, true});
    REQUIRE(d.size() == 3);
    CHECK(d[2].p == 3);
    CHECK(d[2].q == 7);
    const auto e = convergents(ContinuedFraction{3, {}, true});
    REQUIRE(e.size() == 1);
    CHECK(e[0].p == 3);
    CHECK(e[0].q == 1);
}

TEST_CASE("convergents are reduced and their errors alternate in sign") {
    for (const double x : {kGolden, kSilver, std::numbers::pi - 3.0, std::numbers::e - 2.0}) {
        // Past q ~ 1e6 a convergent sits within the rational tolerance and ends the expansion.
        const auto c = distinct_convergents(x, 100'000);
        for (std::size_t k = 0; k < c.size(); ++k) {
            CHECK(std::gcd(c[k].p, c[k].q) == 1);
            if (k >= 1) CHECK(c[k].q >= c[k - 1].q);
            if (k >= 2) CHECK(c[k].q > c[k - 1].q);
            if (k >= 1) {
                const double e0 = x - c[k - 1].value();
                const double e1 = x - c[k].value();
                CHECK(e0 * e1 < 0.0);
            }
        }
    }
}

TEST_CASE("best approximation: convergents beat every fraction with smaller denominator") {
    for (const double x : {kGolden, kSilver, std::numbers::pi - 3.0, 0.3183098861837907}) {
        for (const auto& c : distinct_convergents(x, 200)) {
            const double conv_err = std::abs(c.q * x - c.p);
            CHECK(conv_err <= oracle::best_qr_error(x, c.q) + 1e-14);
        }
    }
}

TEST_CASE("reconstruction from the expansion") {
    for (std::int64_t q = 3; q < 40; q += 3) {
        const double x = 1.0 / q + 0.0;
        CHECK(std::abs(evaluate(continued_fraction(x, 30)) - x) < 1e-12);
    }
    for (const double x : {kGolden, kSilver, std::numbers::pi - 3.0}) {
        const ContinuedFraction cf = continued_fraction(x, 10);
        const auto last = convergents(cf).back();
        CHECK(std::abs(evaluate(cf) - x) <= 1.0 / (static_cast<double>(last.q) * last.q));
    }
}

TEST_CASE("nearest_rational") {
    const auto h = nearest_rational(0.5 + 1e-13, 10, 1e-12);
    REQUIRE(h);
    CHECK(h->p == 1);
    CHECK(h->q == 2);
    CHECK_FALSE(nearest_rational(kGolden, 10, 1e-4));
    const auto lock = nearest_rational(0.42860, 10, 1e-4);
    REQUIRE(lock);
    CHECK(lock->p == 3);
    CHECK(lock->q == 7);
}

TEST_CASE("diophantine_margin worked examples") {
    CHECK(diophantine_margin(kGolden, 0.0, 10'000) >= 0.27);
    CHECK(diophantine_margin(kSilver, 0.0, 10'000) >= 0.25);
    CHECK(kind_of([] { diophantine_margin(0.5, 0.0, 10'000); }) == ArithmeticErrorKind::RationalInput);
    try {
        diophantine_margin(3.0 / 7.0, 0.1, 100);
        FAIL("expected RationalInput");
    } catch (const ArithmeticError& e) {
        REQUIRE(e.fraction());
        CHECK(e.fraction()->first == 3);
        CHECK(e.fraction()->second == 7);
    }
}

TEST_CASE("golden margin equals the enumerated minimum over all denominators") {
    // min over q <= Q of q^2 |x - p/q| = min q * |qx - p|, by brute force.
    double brute = 1e300;
    for (std::int64_t q = 1; q <= 2000; ++q) {
        const double p = std::round(q * kGolden);
        brute = std::min(brute, q * std::abs(q * kGolden - p));
    }
    CHECK(diophantine_margin(kGolden, 0.0, 2000) == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("beta_estimate") {
    const DiophantineReport golden = beta_estimate(kGolden, 10'000);
    CHECK(golden.beta_hat <= 0.05);
    CHECK(golden.beta_hat >= 0.0);
    CHECK(golden.q_max == 10'000);
    REQUIRE(golden.convergents.size() >= 4);
    for (std::size_t i = 0; i < golden.convergents.size(); ++i) {
        const auto& c = golden.convergents[i];
        if (i > 0) CHECK(c.q > golden.convergents[i - 1].q);
        CHECK(c.q <= 10'000);
        CHECK(c.err < 1.0 / (static_cast<double>(c.q) * c.q));
    }

    const DiophantineReport doubling = beta_estimate(doubling_number(14), 1'000'000);
    CHECK(doubling.beta_hat > 0.1);

    CHECK(kind_of([] { beta_estimate(3.0 / 7.0, 1000); }) == ArithmeticErrorKind::RationalInput);
    CHECK(kind_of([] { beta_estimate(kGolden, 3); }) == ArithmeticErrorKind::InsufficientConvergents);
}
