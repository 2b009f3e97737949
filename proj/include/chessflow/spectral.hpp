#pragma once
/**
 * @file spectral.hpp
 * @brief Fourier analysis on the unit square and the mode-by-mode closed-form
 *        solution of the forced internal-wave equation
 *
 *            (d_t^2 Laplacian + d_{x2}^2) u = f(x) cos(lambda t).
 *
 * Transform convention (periodic basis):
 *
 *     f_hat(k1,k2) = int_0^1 int_0^1 f(x) exp(-2 pi i (k1 x1 + k2 x2)) dx,
 *     f(x)         = sum f_hat(k1,k2) exp(+2 pi i (k1 x1 + k2 x2)),
 *
 * so that d/dx_j multiplies coefficients by 2 pi i k_j. Each mode of u obeys
 *
 *     -c ((k1^2 + k2^2) d_t^2 + k2^2) u_hat = f_hat cos(lambda t),
 *
 * with c = 4 pi^2 for the periodic basis and c = pi^2 for the Dirichlet sine
 * basis sin(pi k1 x1) sin(pi k2 x2). The forced solution has the small
 * denominator D = -k2^2 + (k1^2 + k2^2) lambda^2.
 */

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "chessflow/errors.hpp"

namespace chessflow {

using cplx = std::complex<double>;

enum class Basis { periodic, sine };
enum class SolverMode {
    paper,        ///< f_hat cos(lambda t) / (c D); nonzero at t = 0
    ic_corrected  ///< adds the homogeneous term so u(0) = u_t(0) = 0
};

inline constexpr double kDefaultResonanceTol = 1e-10;
inline constexpr double kMeanTolerance = 1e-10;

/// Coefficients for |k1|, |k2| <= K. In the sine basis only 1 <= k1, k2 <= K
/// carry data; the remaining entries stay zero.
class FourierField {
public:
    explicit FourierField(int K = 0, Basis basis = Basis::periodic);

    int K() const noexcept { return K_; }
    Basis basis() const noexcept { return basis_; }
    int width() const noexcept { return 2 * K_ + 1; }

    bool contains(int k1, int k2) const noexcept {
        return k1 >= -K_ && k1 <= K_ && k2 >= -K_ && k2 <= K_;
    }
    cplx& at(int k1, int k2) { return coeffs_[index(k1, k2)]; }
    const cplx& at(int k1, int k2) const { return coeffs_[index(k1, k2)]; }

    /// Largest |c(-k) - conj(c(k))| over all modes.
    double hermitian_defect() const;
    /// Copy restricted to |k1|, |k2| <= K (zero-padded when K grows).
    FourierField truncated(int K) const;

    template <typename Fn>
    void for_each_mode(Fn&& fn) const {
        for (int k1 = -K_; k1 <= K_; ++k1)
            for (int k2 = -K_; k2 <= K_; ++k2) fn(k1, k2, at(k1, k2));
    }

private:
    std::size_t index(int k1, int k2) const noexcept {
        return static_cast<std::size_t>((k1 + K_) * width() + (k2 + K_));
    }

    int K_;
    Basis basis_;
    std::vector<cplx> coeffs_;
};

/// N x N samples on the unit square, row-major in (i1, i2).
/// Periodic grids sample x = i/N; sine grids sample cell midpoints (i + 1/2)/N.
struct Grid {
    int N = 0;
    std::vector<double> values;

    Grid() = default;
    explicit Grid(int n) : N(n), values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}

    double& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * N + i2]; }
    double at(int i1, int i2) const { return values[static_cast<std::size_t>(i1) * N + i2]; }
};

/// Discrete Fourier coefficients of periodic samples. Throws GridTooCoarse when N < 2K + 2.
FourierField analyze(const Grid& samples, int K);
/// Sine coefficients 4 int f sin(pi k1 x1) sin(pi k2 x2) from midpoint samples.
FourierField analyze_sine(const Grid& samples, int K);
/// Evaluates the series on an N x N grid (real part for periodic fields).
Grid synthesize(const FourierField& field, int N);
/// Coefficients of d/dx_axis (axis 1 or 2). Periodic basis only.
FourierField derivative_field(const FourierField& field, int axis);

struct SolverConfig {
    double lambda = 0.5;
    SolverMode mode = SolverMode::paper;
    double resonance_tol = kDefaultResonanceTol;
    Basis basis = Basis::periodic;
};

/// -k2^2 + (k1^2 + k2^2) lambda^2.
double small_denominator(int k1, int k2, double lambda);
/// 4 pi^2 for the periodic basis, pi^2 for the sine basis.
double operator_scale(Basis basis);

/// Closed-form coefficient of u at time t. Throws ResonanceError when
/// |D| < resonance_tol; (0,0) is not a valid argument.
cplx u_hat(cplx f_coeff, int k1, int k2, const SolverConfig& config, double t);

/// Solution fields at each time. Every resonant mode in range is collected
/// before throwing. f_hat(0,0) must vanish; u_hat(0,0) is set to 0.
std::vector<FourierField> solve(const FourierField& f, const SolverConfig& config,
                                std::span<const double> times);

struct ResidualReport {
    double max_abs = 0.0;
    double max_relative = 0.0;  ///< max |R| / |f_hat| over forced modes
};

/// Substitutes u back into the mode equation using second central time
/// differences. `times` must be uniform with at least three entries.
ResidualReport residual_check(std::span<const FourierField> u_series, const FourierField& f,
                              const SolverConfig& config, std::span<const double> times);

/// sum (1 + k1^2 + k2^2)^s |c(k)|^2 over the retained modes.
double sobolev_weighted_sum(const FourierField& field, double s);

/// min over 1 <= |k1|,|k2| <= K of |D| (1 + k1^2 + k2^2)^((1+beta)/2).
/// Throws ResonanceError when some |D| < resonance_tol.
double denominator_margin(double lambda, double beta, int K,
                          double resonance_tol = kDefaultResonanceTol);

struct RegularityReport {
    std::array<int, 3> truncations{};   ///< K/4, K/2, K
    std::array<double, 3> f_sums{};     ///< H^s partial sums of f
    std::array<double, 3> u_sums{};     ///< H^(s-1-beta) partial sums of u
    std::array<double, 2> ratios{};     ///< u_sums[1]/u_sums[0], u_sums[2]/u_sums[1]
    bool stabilized = false;            ///< |ratios[1] - 1| <= slack
    double slack = 0.05;
    int dominant_k1 = 0;
    int dominant_k2 = 0;
    double dominant_share = 0.0;        ///< largest single-mode share of u_sums[2]
    double min_abs_denominator = 0.0;
};

/// Partial Sobolev sums of f (exponent s) and of the forced amplitude
/// f_hat/(c D) (exponent s - 1 - beta) at truncations K/4, K/2, K.
/// The amplitude bounds |u_hat(t)| in paper mode; ic_corrected stays within twice it.
RegularityReport regularity_report(const FourierField& f, const SolverConfig& config, double s,
                                   double beta, double slack = 0.05);

namespace serial {

/// Single-threaded reference for chessflow::solve.
std::vector<FourierField> solve(const FourierField& f, const SolverConfig& config,
                                std::span<const double> times);

/// Direct O(N^2 K^2) transform, kept as an oracle for analyze.
FourierField analyze(const Grid& samples, int K);

}  // namespace serial

}  // namespace chessflow
