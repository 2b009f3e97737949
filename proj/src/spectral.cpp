#include "chessflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace chessflow {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(sign * 2 pi i m / N) for m = 0..N-1.
std::vector<cplx> twiddles(int N, int sign) {
    std::vector<cplx> tw(static_cast<std::size_t>(N));
    for (int m = 0; m < N; ++m) {
        const double angle = 2.0 * kPi * m / N;
        tw[static_cast<std::size_t>(m)] = {std::cos(angle), sign * std::sin(angle)};
    }
    return tw;
}

int wrap_index(long long v, int N) {
    const long long r = v % N;
    return static_cast<int>(r < 0 ? r + N : r);
}

void check_grid(const Grid& samples, int K) {
    if (K < 0) throw std::invalid_argument("truncation order K must be nonnegative");
    if (samples.N <= 0 || samples.values.size() != static_cast<std::size_t>(samples.N) * samples.N) {
        throw std::invalid_argument("sample grid is not N x N");
    }
    if (samples.N < 2 * K + 2) {
        std::ostringstream os;
        os << "GridTooCoarse: N=" << samples.N << " cannot resolve K=" << K << " (need N >= " << 2 * K + 2 << ")";
        throw SpectralError(SpectralErrorKind::GridTooCoarse, os.str());
    }
}

void check_mean(const FourierField& f) {
    if (f.basis() == Basis::periodic && std::abs(f.at(0, 0)) >= kMeanTolerance) {
        std::ostringstream os;
        os << "NonzeroMean: forcing mean f_hat(0,0) = " << std::abs(f.at(0, 0))
           << " must be below " << kMeanTolerance;
        throw SpectralError(SpectralErrorKind::NonzeroMean, os.str());
    }
}

bool active_mode(const FourierField& f, int k1, int k2) {
    if (f.basis() == Basis::sine) return k1 >= 1 && k2 >= 1;
    return k1 != 0 || k2 != 0;
}

std::vector<ResonantMode> resonant_modes(const FourierField& f, const SolverConfig& config) {
    std::vector<ResonantMode> modes;
    const int K = f.K();
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            if (!active_mode(f, k1, k2)) continue;
            const double d = small_denominator(k1, k2, config.lambda);
            if (std::abs(d) < config.resonance_tol) {
                const double k_sq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
                modes.push_back({k1, k2, d, static_cast<double>(k2) * k2 / k_sq});
            }
        }
    }
    return modes;
}

void check_config(const FourierField& f, const SolverConfig& config) {
    if (!(config.lambda > 0.0 && config.lambda < 1.0)) {
        throw GeometryError(GeometryErrorKind::DegenerateLambda, "forcing frequency must lie in (0,1)");
    }
    if (!(config.resonance_tol > 0.0)) throw std::invalid_argument("resonance_tol must be positive");
    if (f.basis() != config.basis) throw SpectralError(SpectralErrorKind::UnsupportedBasis, "field basis does not match solver basis");
    check_mean(f);
    if (auto modes = resonant_modes(f, config); !modes.empty()) throw ResonanceError(std::move(modes));
}

cplx u_hat_unchecked(cplx f_coeff, int k1, int k2, const SolverConfig& config, double t) {
    const double d = small_denominator(k1, k2, config.lambda);
    const double scale = operator_scale(config.basis) * d;
    double shape = std::cos(config.lambda * t);
    if (config.mode == SolverMode::ic_corrected) {
        const double k_sq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        const double omega = std::abs(k2) / std::sqrt(k_sq);
        shape -= std::cos(omega * t);
    }
    return f_coeff * (shape / scale);
}

template <bool Parallel>
std::vector<FourierField> solve_impl(const FourierField& f, const SolverConfig& config,
                                     std::span<const double> times) {
    check_config(f, config);
    const int K = f.K();
    const int width = f.width();
    std::vector<FourierField> out(times.size(), FourierField(K, f.basis()));
    const long long total = static_cast<long long>(width) * width;
#pragma omp parallel for schedule(static) if (Parallel)
    for (long long idx = 0; idx < total; ++idx) {
        const int k1 = static_cast<int>(idx / width) - K;
        const int k2 = static_cast<int>(idx % width) - K;
        if (!active_mode(f, k1, k2)) continue;
        const cplx fc = f.at(k1, k2);
        if (fc == cplx{}) continue;
        for (std::size_t j = 0; j < times.size(); ++j) {
            out[j].at(k1, k2) = u_hat_unchecked(fc, k1, k2, config, times[j]);
        }
    }
    return out;
}

}  // namespace

FourierField::FourierField(int K, Basis basis) : K_(K), basis_(basis) {
    if (K < 0) throw std::invalid_argument("truncation order K must be nonnegative");
    coeffs_.assign(static_cast<std::size_t>(width()) * static_cast<std::size_t>(width()), cplx{});
}

double FourierField::hermitian_defect() const {
    double defect = 0.0;
    for_each_mode([&](int k1, int k2, const cplx& c) {
        defect = std::max(defect, std::abs(at(-k1, -k2) - std::conj(c)));
    });
    return defect;
}

FourierField FourierField::truncated(int K) const {
    FourierField out(K, basis_);
    const int common = std::min(K, K_);
    for (int k1 = -common; k1 <= common; ++k1)
        for (int k2 = -common; k2 <= common; ++k2) out.at(k1, k2) = at(k1, k2);
    return out;
}

FourierField analyze(const Grid& samples, int K) {
    check_grid(samples, K);
    const int N = samples.N;
    const int width = 2 * K + 1;
    const auto tw = twiddles(N, -1);

    // Transform along x2 for every row, then along x1.
    std::vector<cplx> partial(static_cast<std::size_t>(N) * width);
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < N; ++i1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            cplx acc{};
            for (int i2 = 0; i2 < N; ++i2) {
                acc += samples.at(i1, i2) * tw[static_cast<std::size_t>(wrap_index(static_cast<long long>(k2) * i2, N))];
            }
            partial[static_cast<std::size_t>(i1) * width + (k2 + K)] = acc;
        }
    }
    FourierField field(K, Basis::periodic);
    const double norm = 1.0 / (static_cast<double>(N) * N);
#pragma omp parallel for schedule(static)
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            cplx acc{};
            for (int i1 = 0; i1 < N; ++i1) {
                acc += partial[static_cast<std::size_t>(i1) * width + (k2 + K)] *
                       tw[static_cast<std::size_t>(wrap_index(static_cast<long long>(k1) * i1, N))];
            }
            field.at(k1, k2) = acc * norm;
        }
    }
    return field;
}

FourierField analyze_sine(const Grid& samples, int K) {
    check_grid(samples, K);
    const int N = samples.N;
    // basis[k][i] = sin(pi k (i + 1/2) / N)
    std::vector<double> basis(static_cast<std::size_t>(K + 1) * N);
    for (int k = 0; k <= K; ++k)
        for (int i = 0; i < N; ++i) basis[static_cast<std::size_t>(k) * N + i] = std::sin(kPi * k * (i + 0.5) / N);

    std::vector<double> partial(static_cast<std::size_t>(N) * (K + 1), 0.0);
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < N; ++i1) {
        for (int k2 = 1; k2 <= K; ++k2) {
            double acc = 0.0;
            for (int i2 = 0; i2 < N; ++i2) acc += samples.at(i1, i2) * basis[static_cast<std::size_t>(k2) * N + i2];
            partial[static_cast<std::size_t>(i1) * (K + 1) + k2] = acc;
        }
    }
    FourierField field(K, Basis::sine);
    const double norm = 4.0 / (static_cast<double>(N) * N);
    for (int k1 = 1; k1 <= K; ++k1) {
        for (int k2 = 1; k2 <= K; ++k2) {
            double acc = 0.0;
            for (int i1 = 0; i1 < N; ++i1) {
                acc += partial[static_cast<std::size_t>(i1) * (K + 1) + k2] * basis[static_cast<std::size_t>(k1) * N + i1];
            }
            field.at(k1, k2) = acc * norm;
        }
    }
    return field;
}

Grid synthesize(const FourierField& field, int N) {
    if (N <= 0) throw std::invalid_argument("output grid size must be positive");
    const int K = field.K();
    Grid out(N);
    if (field.basis() == Basis::sine) {
        std::vector<double> basis(static_cast<std::size_t>(K + 1) * N);
        for (int k = 0; k <= K; ++k)
            for (int i = 0; i < N; ++i) basis[static_cast<std::size_t>(k) * N + i] = std::sin(kPi * k * (i + 0.5) / N);
#pragma omp parallel for schedule(static)
        for (int i1 = 0; i1 < N; ++i1) {
            for (int i2 = 0; i2 < N; ++i2) {
                double acc = 0.0;
                for (int k1 = 1; k1 <= K; ++k1) {
                    double inner = 0.0;
                    for (int k2 = 1; k2 <= K; ++k2) inner += field.at(k1, k2).real() * basis[static_cast<std::size_t>(k2) * N + i2];
                    acc += inner * basis[static_cast<std::size_t>(k1) * N + i1];
                }
                out.at(i1, i2) = acc;
            }
        }
        return out;
    }

    const int width = field.width();
    const auto tw = twiddles(N, +1);
    // h[k1][i2] = sum_k2 c(k1,k2) e^{2 pi i k2 i2 / N}
    std::vector<cplx> partial(static_cast<std::size_t>(width) * N);
#pragma omp parallel for schedule(static)
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int i2 = 0; i2 < N; ++i2) {
            cplx acc{};
            for (int k2 = -K; k2 <= K; ++k2) {
                acc += field.at(k1, k2) * tw[static_cast<std::size_t>(wrap_index(static_cast<long long>(k2) * i2, N))];
            }
            partial[static_cast<std::size_t>(k1 + K) * N + i2] = acc;
        }
    }
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < N; ++i1) {
        for (int i2 = 0; i2 < N; ++i2) {
            cplx acc{};
            for (int k1 = -K; k1 <= K; ++k1) {
                acc += partial[static_cast<std::size_t>(k1 + K) * N + i2] *
                       tw[static_cast<std::size_t>(wrap_index(static_cast<long long>(k1) * i1, N))];
            }
            out.at(i1, i2) = acc.real();
        }
    }
    return out;
}

FourierField derivative_field(const FourierField& field, int axis) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("derivative axis must be 1 or 2");
    if (field.basis() != Basis::periodic) {
        throw SpectralError(SpectralErrorKind::UnsupportedBasis,
                            "derivatives of sine series leave the sine basis");
    }
    FourierField out(field.K(), Basis::periodic);
    field.for_each_mode([&](int k1, int k2, const cplx& c) {
        const int k = axis == 1 ? k1 : k2;
        out.at(k1, k2) = c * cplx{0.0, 2.0 * kPi * k};
    });
    return out;
}

double small_denominator(int k1, int k2, double lambda) {
    const double a = static_cast<double>(k1) * k1;
    const double b = static_cast<double>(k2) * k2;
    return -b + (a + b) * lambda * lambda;
}

double operator_scale(Basis basis) { return basis == Basis::periodic ? 4.0 * kPi * kPi : kPi * kPi; }

cplx u_hat(cplx f_coeff, int k1, int k2, const SolverConfig& config, double t) {
    if (k1 == 0 && k2 == 0) throw std::invalid_argument("u_hat is undefined for the (0,0) mode");
    const double d = small_denominator(k1, k2, config.lambda);
    if (std::abs(d) < config.resonance_tol) {
        const double k_sq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        throw ResonanceError({{k1, k2, d, static_cast<double>(k2) * k2 / k_sq}});
    }
    return u_hat_unchecked(f_coeff, k1, k2, config, t);
}

std::vector<FourierField> solve(const FourierField& f, const SolverConfig& config,
                                std::span<const double> times) {
    return solve_impl<true>(f, config, times);
}

ResidualReport residual_check(std::span<const FourierField> u_series, const FourierField& f,
                              const SolverConfig& config, std::span<const double> times) {
    if (times.size() < 3 || u_series.size() != times.size()) {
        throw std::invalid_argument("residual check needs at least three times, one field per time");
    }
    const double h = times[1] - times[0];
    if (!(h > 0.0)) throw std::invalid_argument("times must increase");
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (std::abs((times[j] - times[j - 1]) - h) > 1e-9 * std::max(1.0, h)) {
            throw std::invalid_argument("residual check needs uniformly spaced times");
        }
    }
    const double scale = operator_scale(config.basis);
    ResidualReport report;
    const int K = f.K();
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            if (!active_mode(f, k1, k2)) continue;
            const cplx fc = f.at(k1, k2);
            const double k_sq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            const double k2_sq = static_cast<double>(k2) * k2;
            for (std::size_t j = 1; j + 1 < times.size(); ++j) {
                const cplx um = u_series[j - 1].at(k1, k2);
                const cplx u0 = u_series[j].at(k1, k2);
                const cplx up = u_series[j + 1].at(k1, k2);
                const cplx second = (up - 2.0 * u0 + um) / (h * h);
                const cplx residual =
                    -scale * (k_sq * second + k2_sq * u0) - fc * std::cos(config.lambda * times[j]);
                const double r = std::abs(residual);
                report.max_abs = std::max(report.max_abs, r);
                if (std::abs(fc) > 0.0) report.max_relative = std::max(report.max_relative, r / std::abs(fc));
            }
        }
    }
    return report;
}

double sobolev_weighted_sum(const FourierField& field, double s) {
    if (!std::isfinite(s)) throw std::invalid_argument("Sobolev exponent must be finite");
    double sum = 0.0;
    field.for_each_mode([&](int k1, int k2, const cplx& c) {
        if (c == cplx{}) return;
        const double weight = std::pow(1.0 + static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2, s);
        sum += weight * std::norm(c);
    });
    return sum;
}

double denominator_margin(double lambda, double beta, int K, double resonance_tol) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw GeometryError(GeometryErrorKind::DegenerateLambda, "lambda must lie in (0,1)");
    }
    if (K < 1) throw std::invalid_argument("denominator_margin needs K >= 1");
    double margin = std::numeric_limits<double>::infinity();
    std::vector<ResonantMode> resonant;
    // D depends on k1^2 and k2^2 only, so the positive quadrant covers all signs.
    for (int k1 = 1; k1 <= K; ++k1) {
        for (int k2 = 1; k2 <= K; ++k2) {
            const double d = small_denominator(k1, k2, lambda);
            const double k_sq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            if (std::abs(d) < resonance_tol) {
                resonant.push_back({k1, k2, d, static_cast<double>(k2) * k2 / k_sq});
                continue;
            }
            margin = std::min(margin, std::abs(d) * std::pow(1.0 + k_sq, 0.5 * (1.0 + beta)));
        }
    }
    if (!resonant.empty()) throw ResonanceError(std::move(resonant));
    return margin;
}

RegularityReport regularity_report(const FourierField& f, const SolverConfig& config, double s,
                                   double beta, double slack) {
    if (f.K() < 4) throw std::invalid_argument("regularity report needs K >= 4");
    check_config(f, config);

    RegularityReport report;
    report.slack = slack;
    report.truncations = {f.K() / 4, f.K() / 2, f.K()};
    const double u_exponent = s - 1.0 - beta;
    const double scale = operator_scale(config.basis);
    double dominant = 0.0;
    double min_d = std::numeric_limits<double>::infinity();

    f.for_each_mode([&](int k1, int k2, const cplx& fc) {
        if (!active_mode(f, k1, k2) || fc == cplx{}) return;
        const double k_sq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        const double d = small_denominator(k1, k2, config.lambda);
        min_d = std::min(min_d, std::abs(d));
        const double f_term = std::pow(1.0 + k_sq, s) * std::norm(fc);
        const double u_term = std::pow(1.0 + k_sq, u_exponent) * std::norm(fc / (scale * d));
        const int reach = std::max(std::abs(k1), std::abs(k2));
        for (std::size_t j = 0; j < 3; ++j) {
            if (reach <= report.truncations[j]) {
                report.f_sums[j] += f_term;
                report.u_sums[j] += u_term;
            }
        }
        if (u_term > dominant) {
            dominant = u_term;
            report.dominant_k1 = k1;
            report.dominant_k2 = k2;
        }
    });
    report.min_abs_denominator = min_d;
    const auto ratio = [](double num, double den) {
        return den > 0.0 ? num / den : (num > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    };
    report.ratios = {ratio(report.u_sums[1], report.u_sums[0]), ratio(report.u_sums[2], report.u_sums[1])};
    report.stabilized = std::abs(report.ratios[1] - 1.0) <= slack;
    report.dominant_share = report.u_sums[2] > 0.0 ? dominant / report.u_sums[2] : 0.0;
    return report;
}

namespace serial {

std::vector<FourierField> solve(const FourierField& f, const SolverConfig& config,
                                std::span<const double> times) {
    return solve_impl<false>(f, config, times);
}

FourierField analyze(const Grid& samples, int K) {
    check_grid(samples, K);
    const int N = samples.N;
    const auto tw = twiddles(N, -1);
    FourierField field(K, Basis::periodic);
    const double norm = 1.0 / (static_cast<double>(N) * N);
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            cplx acc{};
            for (int i1 = 0; i1 < N; ++i1)
                for (int i2 = 0; i2 < N; ++i2)
                    acc += samples.at(i1, i2) *
                           tw[static_cast<std::size_t>(wrap_index(static_cast<long long>(k1) * i1 + static_cast<long long>(k2) * i2, N))];
            field.at(k1, k2) = acc * norm;
        }
    }
    return field;
}

}  // namespace serial

}  // namespace chessflow
