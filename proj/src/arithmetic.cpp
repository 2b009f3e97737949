#include "chessflow/arithmetic.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chessflow {

namespace {

constexpr std::size_t kExpansionTerms = 64;

__extension__ typedef __int128 wide_int;

bool fits_int64(wide_int v) {
    return v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min();
}

void check_rational(double r, std::int64_t q_max) {
    if (auto match = nearest_rational(r, q_max, kRationalTolerance)) {
        std::ostringstream os;
        os << "RationalInput: " << r << " equals " << match->p << "/" << match->q
           << " below the cap q_max=" << q_max;
        throw ArithmeticError(ArithmeticErrorKind::RationalInput, os.str(), std::pair{match->p, match->q});
    }
}

}  // namespace

ContinuedFraction continued_fraction(double x, std::size_t max_terms, double rational_tol) {
    if (max_terms < 1) throw std::invalid_argument("max_terms must be at least 1");
    if (!std::isfinite(x)) throw std::invalid_argument("continued fraction of a non-finite value");

    ContinuedFraction cf;
    const double floor_x = std::floor(x);
    cf.a0 = static_cast<std::int64_t>(floor_x);
    double rem = x - floor_x;

    wide_int p_prev = 1, p = cf.a0;
    wide_int q_prev = 0, q = 1;
    if (std::abs(x - static_cast<double>(p)) < rational_tol) {
        cf.exact = true;
        return cf;
    }
    while (cf.terms.size() < max_terms && rem > 0.0) {
        const double y = 1.0 / rem;
        const double a_real = std::floor(y);
        if (a_real > 1e15) {
            cf.exact = true;
            break;
        }
        const auto a = static_cast<std::int64_t>(a_real);
        const wide_int p_next = a * p + p_prev;
        const wide_int q_next = a * q + q_prev;
        if (!fits_int64(p_next) || !fits_int64(q_next)) break;
        cf.terms.push_back(a);
        p_prev = p;
        p = p_next;
        q_prev = q;
        q = q_next;
        rem = y - a_real;
        if (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) < rational_tol) {
            cf.exact = true;
            break;
        }
    }
    if (rem <= 0.0) cf.exact = true;

    if (cf.exact && cf.terms.size() > 1 && cf.terms.back() == 1) {
        cf.terms.pop_back();
        cf.terms.back() += 1;
    }
    return cf;
}

double evaluate(const ContinuedFraction& cf) {
    double tail = 0.0;
    for (auto it = cf.terms.rbegin(); it != cf.terms.rend(); ++it) {
        tail = 1.0 / (static_cast<double>(*it) + tail);
    }
    return static_cast<double>(cf.a0) + tail;
}

std::vector<Fraction> convergents(const ContinuedFraction& cf) {
    std::vector<Fraction> out;
    out.reserve(cf.terms.size() + 1);
    std::int64_t p_prev = 1, p = cf.a0;
    std::int64_t q_prev = 0, q = 1;
    out.push_back({p, q});
    for (const std::int64_t a : cf.terms) {
        const std::int64_t p_next = a * p + p_prev;
        const std::int64_t q_next = a * q + q_prev;
        p_prev = p;
        p = p_next;
        q_prev = q;
        q = q_next;
        out.push_back({p, q});
    }
    return out;
}

std::vector<Fraction> distinct_convergents(double x, std::int64_t q_max) {
    std::vector<Fraction> out;
    for (const Fraction& f : convergents(continued_fraction(x, kExpansionTerms))) {
        if (f.q > q_max) break;
        if (!out.empty() && out.back().q == f.q) {
            out.back() = f;  // the later convergent with the same q is the closer one
        } else {
            out.push_back(f);
        }
    }
    return out;
}

std::optional<Fraction> nearest_rational(double x, std::int64_t q_max, double tol) {
    for (const Fraction& f : distinct_convergents(x, q_max)) {
        if (std::abs(x - f.value()) <= tol) return f;
    }
    return std::nullopt;
}

double diophantine_margin(double r, double beta, std::int64_t q_max) {
    if (q_max < 1) throw std::invalid_argument("q_max must be positive");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    check_rational(r, q_max);
    double margin = std::numeric_limits<double>::infinity();
    for (const Fraction& f : distinct_convergents(r, q_max)) {
        const double q = static_cast<double>(f.q);
        margin = std::min(margin, std::abs(r - f.value()) * std::pow(q, 2.0 + beta));
    }
    return margin;
}

DiophantineReport beta_estimate(double r, std::int64_t q_max) {
    if (q_max < 1) throw std::invalid_argument("q_max must be positive");
    check_rational(r, q_max);

    DiophantineReport report;
    report.r = r;
    report.q_max = q_max;
    for (const Fraction& f : distinct_convergents(r, q_max)) {
        report.convergents.push_back({f.p, f.q, std::abs(r - f.value())});
    }
    if (report.convergents.size() < 4) {
        std::ostringstream os;
        os << "InsufficientConvergents: only " << report.convergents.size()
           << " distinct convergents with q <= " << q_max << " (need 4)";
        throw ArithmeticError(ArithmeticErrorKind::InsufficientConvergents, os.str());
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(report.convergents.size());
    for (const auto& c : report.convergents) {
        const double x = std::log(static_cast<double>(c.q));
        const double y = std::log(c.err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    report.beta_hat = std::max(0.0, -slope - 2.0);
    report.c_hat = std::exp(intercept);
    return report;
}

}  // namespace chessflow
