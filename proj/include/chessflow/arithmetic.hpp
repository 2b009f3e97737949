#pragma once
/**
 * @file arithmetic.hpp
 * @brief Continued fractions, convergents and finite-scale Diophantine
 *        diagnostics for rotation numbers.
 *
 * Everything here is empirical at a denominator cap q_max: a double is always
 * rational, so "irrational" means "no convergent with q <= q_max matches within
 * kRationalTolerance".
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "chessflow/errors.hpp"

namespace chessflow {

inline constexpr double kRationalTolerance = 1e-12;

struct Fraction {
    std::int64_t p = 0;
    std::int64_t q = 1;

    double value() const noexcept { return static_cast<double>(p) / static_cast<double>(q); }
    bool operator==(const Fraction&) const = default;
};

/// [a0; terms...]. All terms are >= 1; an exact expansion never ends in a 1
/// unless that 1 is its only term.
struct ContinuedFraction {
    std::int64_t a0 = 0;
    std::vector<std::int64_t> terms;
    bool exact = false;
};

/// Euclidean expansion of x. Stops with exact = true as soon as a convergent
/// matches x within rational_tol, otherwise after max_terms partial quotients
/// (or when the next convergent would overflow 64-bit integers).
ContinuedFraction continued_fraction(double x, std::size_t max_terms,
                                     double rational_tol = kRationalTolerance);

/// Value of a finite continued fraction, evaluated back to front.
double evaluate(const ContinuedFraction& cf);

/// Full convergent sequence p_k/q_k from the standard recurrence, starting
/// with a0/1. When the first term is 1 the first two convergents share q = 1.
std::vector<Fraction> convergents(const ContinuedFraction& cf);

/// Convergents of x with q <= q_max, one per denominator (strictly increasing q).
std::vector<Fraction> distinct_convergents(double x, std::int64_t q_max);

/// First convergent of x with q <= q_max lying within tol of x.
std::optional<Fraction> nearest_rational(double x, std::int64_t q_max, double tol);

struct ConvergentError {
    std::int64_t p;
    std::int64_t q;
    double err;  ///< |r - p/q|
};

/// Empirical Diophantine report at scale q_max.
struct DiophantineReport {
    double r = 0.0;
    std::vector<ConvergentError> convergents;
    double beta_hat = 0.0;
    double c_hat = 0.0;
    std::int64_t q_max = 0;
};

/// min over convergents with q <= q_max of |r - p/q| * q^(2+beta).
/// Throws ArithmeticError(RationalInput) if r matches some p/q with q <= q_max.
double diophantine_margin(double r, double beta, std::int64_t q_max);

/// Least-squares fit of log|r - p_k/q_k| = log C - (2+beta) log q_k over the
/// distinct convergents below q_max; beta_hat is clamped at 0.
/// Throws RationalInput, or InsufficientConvergents when fewer than 4 exist.
DiophantineReport beta_estimate(double r, std::int64_t q_max);

}  // namespace chessflow
