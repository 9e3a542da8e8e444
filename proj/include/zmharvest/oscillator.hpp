#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "zmharvest/errors.hpp"
#include "zmharvest/faddeeva.hpp"
#include "zmharvest/types.hpp"

namespace zmharvest {

// Oscillator-mode sector of the periodic massless field in one spatial
// dimension. Detector matrix elements reduce per mode to elementary closed
// forms:
//
//   L-type (no time ordering): Gaussian Fourier transforms, so the mode sum
//   converges like exp(-T^2 (Omega + k_n)^2).
//
//   M/K-type (time ordered): the inner ordered integral evaluates to
//   pi T^2 e^{-Omega^2 T^2} conj(w(k_n T)) with w the Faddeeva function, so
//   the terms fall off only algebraically (w(x) ~ i/(sqrt(pi) x)). The
//   summed tail is restored analytically from the large-argument expansion
//   of the Dawson function together with closed forms for
//   sum_m cos(m theta)/m^p (Bernoulli polynomials) and the Abel value of
//   sum_m cos(m theta).
//
// All elements are returned per squared coupling.

struct OscElement {
    std::complex<double> value{};
    int modes_used = 0;
};

// Resummed is the production path; TruncateOnly sums exactly mode_cutoff
// terms with no tail and no convergence check (used to compare against
// quadrature of the identically truncated kernel).
enum class TailHandling { Resummed, TruncateOnly };

namespace detail {

inline double wavenumber(int m, double l) { return 2.0 * std::numbers::pi * m / l; }

inline void require_one_dimension(const FieldConfig& f) {
    if (f.spatial_dim != 1)
        throw UnsupportedDimension(
            "oscillator-mode elements are implemented for one spatial dimension");
}

// sum_{m>=1} cos(m theta)/m^p for even p in [2, 14], theta in [0, 2pi].
inline double cosine_power_sum(double theta, int p) {
    const double x = theta / (2.0 * std::numbers::pi);
    double b = 0.0;
    switch (p) {
    case 2: b = ((x - 1.0) * x + 1.0 / 6.0); break;
    case 4: b = (((x - 2.0) * x + 1.0) * x * x - 1.0 / 30.0); break;
    case 6:
        b = ((((x - 3.0) * x + 2.5) * x * x - 0.5) * x * x + 1.0 / 42.0);
        break;
    case 8:
        b = (((((x - 4.0) * x + 14.0 / 3.0) * x * x - 7.0 / 3.0) * x * x +
              2.0 / 3.0) * x * x - 1.0 / 30.0);
        break;
    case 10:
        b = ((((((x - 5.0) * x + 7.5) * x * x - 7.0) * x * x + 5.0) * x * x -
              1.5) * x * x + 5.0 / 66.0);
        break;
    case 12:
        b = (((((((x - 6.0) * x + 11.0) * x * x - 16.5) * x * x + 22.0) * x * x -
               16.5) * x * x + 5.0) * x * x - 691.0 / 2730.0);
        break;
    case 14:
        b = ((((((((x - 7.0) * x + 91.0 / 6.0) * x * x - 1001.0 / 30.0) * x * x +
                 143.0 / 2.0) * x * x - 1001.0 / 10.0) * x * x + 455.0 / 6.0) * x * x -
              691.0 / 30.0) * x * x + 7.0 / 6.0);
        break;
    default:
        throw std::invalid_argument("cosine_power_sum: unsupported exponent");
    }
    const int k = p / 2;
    double factorial = 1.0;
    for (int i = 2; i <= p; ++i) factorial *= i;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0; // (-1)^{k+1}
    return sign * std::pow(2.0 * std::numbers::pi, p) * b / (2.0 * factorial);
}

// Dawson asymptotic coefficients: F(x) ~ sum_j kDawson[j] / x^{2j+1}.
inline constexpr std::array<double, 7> kDawson = {
    0.5, 0.25, 0.375, 0.9375, 3.28125, 14.765625, 81.2109375};

// sum_{m=1}^{M} cos(m theta) (Dirichlet kernel partial sum).
inline double cosine_partial(double theta, int m_count) {
    const double s = std::sin(0.5 * theta);
    if (std::abs(s) < 1e-14) return static_cast<double>(m_count);
    return std::sin(0.5 * m_count * theta) * std::cos(0.5 * (m_count + 1) * theta) / s;
}

inline double reduced_angle(double dx, double l) {
    double frac = dx / l - std::floor(dx / l);
    return 2.0 * std::numbers::pi * frac;
}

// Head size that makes the Dawson asymptotics at the truncation boundary
// accurate to well below 1e-12 of the summed value.
inline int required_head(double beta) {
    return std::max(4, static_cast<int>(std::ceil(12.0 / beta)));
}

struct TimeOrderedSum {
    std::complex<double> sum{};
    int modes = 0;
};

// Core of the M/K-type reductions: sum_m m^w cos(m theta) conj(w(m beta))
// with w = -1 (amplitude, the 1/m sum) or w = +1 (derivative coupling).
inline TimeOrderedSum time_ordered_mode_sum(double theta, double beta, int weight,
                                            const FieldConfig& f, TailHandling tail) {
    const int n_max = f.mode_cutoff;
    int head = n_max;
    if (tail == TailHandling::Resummed) {
        head = required_head(beta);
        if (head > n_max)
            throw CutoffTooSmall("time-ordered mode sum needs n_max >= " +
                                 std::to_string(head) + " at this L, T");
    }

    if (weight == 1) {
        // The Abel-regularized constant term only exists away from
        // coincident detector positions.
        if (tail == TailHandling::Resummed &&
            std::abs(std::sin(0.5 * theta)) < 1e-12)
            throw DivergentElement(
                "derivative-coupling time-ordered element diverges at "
                "coincident detector positions");
    }

    std::complex<double> s{};
    // Partial sums of cos(m theta)/m^p needed by the tail below.
    std::array<double, 7> partial{};
    for (int m = 1; m <= head; ++m) {
        const double c = std::cos(m * theta);
        const std::complex<double> wf = std::conj(faddeeva_w({m * beta, 0.0}));
        if (weight == -1)
            s += c * wf / static_cast<double>(m);
        else
            s += c * wf * static_cast<double>(m);
        if (tail == TailHandling::Resummed) {
            // partial[j] accumulates cos(m theta)/m^p with p = 2j+2 for the
            // amplitude sum and p = 2j for the derivative sum (whose p = 0
            // slot is handled by the Dirichlet partial sum instead).
            const double m2 = static_cast<double>(m) * m;
            double mp = 1.0;
            for (int j = 0; j < 7; ++j) {
                if (weight == -1) {
                    mp *= m2;
                    partial[j] += c / mp;
                } else if (j > 0) {
                    mp *= m2;
                    partial[j] += c / mp;
                }
            }
        }
    }

    if (tail == TailHandling::Resummed) {
        // Each correction multiplies the remainder sum_{m>head} cos(m theta)/m^p
        // by a_j = d_j / beta^{2j+1}. Evaluating the remainder as closed form
        // minus partial sum cancels O(1) quantities, so the amplified roundoff
        // ~ eps * a_j can swamp the term at small beta. Where that happens the
        // remainder is instead summed directly: the break-even point moves out
        // only as a fractional power of a_j, so the direct sum stays short in
        // exactly the regime that needs it.
        const double target = 1e-13 * std::max(1.0, std::abs(s));
        double t_im = 0.0;
        double amp = 1.0 / beta;
        for (int j = 0; j < 7; ++j) {
            const double a_j = kDawson[j] * amp;
            amp /= beta * beta;
            if (weight == 1 && j == 0) {
                // Abel value of the undamped cosine series; the Dirichlet
                // partial sum is a closed form, no cancellation.
                t_im += a_j * (-0.5 - cosine_partial(theta, head));
                continue;
            }
            const int p = (weight == -1) ? 2 * j + 2 : 2 * j;
            if (j <= 1 || 3e-16 * a_j <= target) {
                t_im += a_j * (cosine_power_sum(theta, p) - partial[j]);
                continue;
            }
            const double stop =
                std::pow(a_j / ((p - 1) * target), 1.0 / (p - 1));
            const long m_stop =
                std::min(static_cast<long>(head) + 2000000,
                         static_cast<long>(std::ceil(stop)));
            double acc = 0.0;
            for (long m = head + 1; m <= m_stop; ++m)
                acc += std::cos(m * theta) *
                       std::pow(static_cast<double>(m), -static_cast<double>(p));
            t_im += a_j * acc;
        }
        s += std::complex<double>(0.0, -2.0 * std::numbers::inv_sqrtpi * t_im);
    }
    return {s, head};
}

} // namespace detail

// ---------------------------------------------------------------------------
// Pointwise two-point functions (oscillator modes only)

// Truncated mode sum; with accelerate_tail the geometric tails of both null
// series are restored by iterated summation by parts (skipped near light
// cones and at coincidence, where the raw partial sum is returned). When the
// accelerated tail has not converged below quad_tol of the value the cutoff
// is reported as too small.
inline std::complex<double> wightman_osc(double dt, double dx, const FieldConfig& f,
                                         bool accelerate_tail = true) {
    detail::require_one_dimension(f);
    const double l = f.circumference;
    const double du = dt - dx, dv = dt + dx;
    const std::complex<double> zu = std::exp(std::complex<double>(
        0.0, -2.0 * std::numbers::pi * du / l));
    const std::complex<double> zv = std::exp(std::complex<double>(
        0.0, -2.0 * std::numbers::pi * dv / l));
    std::complex<double> pu{}, pv{};
    std::complex<double> zun = 1.0, zvn = 1.0;
    const int n = f.mode_cutoff;
    for (int m = 1; m <= n; ++m) {
        zun *= zu;
        zvn *= zv;
        pu += zun / static_cast<double>(m);
        pv += zvn / static_cast<double>(m);
    }
    double tail_err = 0.0;
    auto tail = [n, &tail_err](std::complex<double> z, std::complex<double> zn) {
        if (std::abs(1.0 - z) < 0.1) return std::complex<double>{};
        const std::complex<double> g = z / (1.0 - z);
        std::complex<double> gk = 1.0, acc{};
        double delta = 1.0 / (n + 1.0);
        std::complex<double> term{};
        for (int k = 0; k < 8; ++k) {
            term = gk * delta;
            acc += term;
            gk *= g;
            delta *= -(k + 1.0) / (n + k + 2.0);
        }
        tail_err += std::abs(term / (1.0 - z));
        return zn * z * acc / (1.0 - z);
    };
    if (accelerate_tail) {
        pu += tail(zu, zun);
        pv += tail(zv, zvn);
    }
    const std::complex<double> w = (pu + pv) / (4.0 * std::numbers::pi);
    if (accelerate_tail &&
        tail_err / (4.0 * std::numbers::pi) > f.quad_tol * std::max(std::abs(w), 1e-3))
        throw CutoffTooSmall("mode sum tail did not converge at n_max = " +
                             std::to_string(n));
    return w;
}

// Closed form of the regulated mode sum at regulator f.epsilon.
inline std::complex<double> wightman_osc_log(double dt, double dx, const FieldConfig& f) {
    detail::require_one_dimension(f);
    const double l = f.circumference;
    const std::complex<double> i2pi(0.0, 2.0 * std::numbers::pi);
    auto term = [&](double s) {
        const std::complex<double> arg = -i2pi * std::complex<double>(s, -f.epsilon) / l;
        return std::log(1.0 - std::exp(arg));
    };
    return -(term(dt - dx) + term(dt + dx)) / (4.0 * std::numbers::pi);
}

// Derivative-coupling kernel d_t d_t' W, truncated mode sum.
inline std::complex<double> wightman_osc_derivative(double dt, double dx,
                                                    const FieldConfig& f) {
    detail::require_one_dimension(f);
    const double l = f.circumference;
    const std::complex<double> zu = std::exp(std::complex<double>(
        0.0, -2.0 * std::numbers::pi * (dt - dx) / l));
    const std::complex<double> zv = std::exp(std::complex<double>(
        0.0, -2.0 * std::numbers::pi * (dt + dx) / l));
    std::complex<double> acc{};
    std::complex<double> zun = 1.0, zvn = 1.0;
    for (int m = 1; m <= f.mode_cutoff; ++m) {
        zun *= zu;
        zvn *= zv;
        acc += static_cast<double>(m) * (zun + zvn);
    }
    return acc * std::numbers::pi / (l * l);
}

// Regulated closed form of the derivative kernel.
inline std::complex<double> wightman_osc_derivative_log(double dt, double dx,
                                                        const FieldConfig& f) {
    detail::require_one_dimension(f);
    const double l = f.circumference;
    auto term = [&](double s) {
        const std::complex<double> q = std::exp(
            std::complex<double>(0.0, 2.0 * std::numbers::pi / l) *
            std::complex<double>(s, -f.epsilon));
        const std::complex<double> d = q - 1.0;
        return q / (d * d);
    };
    return std::numbers::pi / (l * l) * (term(dt - dx) + term(dt + dx));
}

// ---------------------------------------------------------------------------
// L-type elements (Gaussian per-mode sums)

namespace detail {

// Shared evaluator: value = prefactor * sum_m m^w cos(k_m dx) G_A(k_m) G_B(k_m)
// with G the switching Fourier transforms. w = -1 for amplitude coupling,
// w = +1 for derivative coupling.
inline OscElement gaussian_mode_sum(const DetectorParams& a, const DetectorParams& b,
                                    double dx, const FieldConfig& f, int weight,
                                    TailHandling tail) {
    require_one_dimension(f);
    const double l = f.circumference;
    const double k1 = wavenumber(1, l);
    const double ta = a.switching_width, tb = b.switching_width;
    const double oa = a.effective_gap(), ob = b.effective_gap();

    double sum = 0.0, peak = 0.0;
    int m = 1;
    for (; m <= f.mode_cutoff; ++m) {
        const double k = wavenumber(m, l);
        const double env = ta * tb *
            std::exp(-0.5 * (ta * ta * (oa + k) * (oa + k) +
                             tb * tb * (ob + k) * (ob + k)));
        const double term = (weight == -1 ? env / m : env * m);
        peak = std::max(peak, std::abs(term));
        sum += std::cos(k * dx) * term;
        if (tail == TailHandling::TruncateOnly) continue;
        // Envelope of everything past m: ratio of consecutive envelopes is
        // bounded by rho below, which decreases with m.
        const double knext = wavenumber(m + 1, l);
        const double rho0 = std::exp(-k1 * (ta * ta * (oa + knext) + tb * tb * (ob + knext)));
        const double rho = (weight == 1 ? rho0 * (m + 1.0) / m : rho0);
        if (rho < 1.0) {
            const double next_env = ta * tb *
                std::exp(-0.5 * (ta * ta * (oa + knext) * (oa + knext) +
                                 tb * tb * (ob + knext) * (ob + knext)));
            const double next_term = (weight == -1 ? next_env / (m + 1) : next_env * (m + 1));
            const double bound = next_term / (1.0 - rho);
            if (bound <= f.quad_tol * std::max(std::abs(sum), peak)) break;
        }
    }
    if (tail == TailHandling::Resummed && m > f.mode_cutoff)
        throw CutoffTooSmall("mode sum did not reach its tail bound within n_max = " +
                             std::to_string(f.mode_cutoff));
    const int used = std::min(m, f.mode_cutoff);
    const double pre = (weight == 1)
        ? 4.0 * std::numbers::pi * std::numbers::pi / (l * l)
        : 1.0;
    return {std::complex<double>(pre * sum, 0.0), used};
}

} // namespace detail

inline OscElement l_osc(const DetectorParams& d, const FieldConfig& f,
                        TailHandling tail = TailHandling::Resummed) {
    return detail::gaussian_mode_sum(d, d, 0.0, f, -1, tail);
}

inline OscElement l_osc_cross(const DetectorParams& a, const DetectorParams& b,
                              const FieldConfig& f,
                              TailHandling tail = TailHandling::Resummed) {
    return detail::gaussian_mode_sum(a, b, a.position - b.position, f, -1, tail);
}

inline OscElement l_osc_derivative(const DetectorParams& d, const FieldConfig& f,
                                   TailHandling tail = TailHandling::Resummed) {
    return detail::gaussian_mode_sum(d, d, 0.0, f, 1, tail);
}

inline OscElement l_osc_cross_derivative(const DetectorParams& a, const DetectorParams& b,
                                         const FieldConfig& f,
                                         TailHandling tail = TailHandling::Resummed) {
    return detail::gaussian_mode_sum(a, b, a.position - b.position, f, 1, tail);
}

// ---------------------------------------------------------------------------
// Time-ordered elements

// Pair element, amplitude coupling, identical detectors.
inline OscElement m_osc(const DetectorParams& a, const DetectorParams& b,
                        const FieldConfig& f,
                        TailHandling tail = TailHandling::Resummed) {
    detail::require_one_dimension(f);
    detail::require_identical(a, b);
    const double t = a.switching_width;
    const double om = a.effective_gap();
    const double theta = detail::reduced_angle(a.position - b.position, f.circumference);
    const double beta = 2.0 * std::numbers::pi * t / f.circumference;
    const auto s = detail::time_ordered_mode_sum(theta, beta, -1, f, tail);
    return {-t * t * std::exp(-t * t * om * om) * s.sum, s.modes};
}

// Two-excitation element of one harmonic-oscillator detector: half the pair
// element at zero separation, with the oscillator frequency as the gap.
inline OscElement k_osc(const DetectorParams& d, const FieldConfig& f,
                        TailHandling tail = TailHandling::Resummed) {
    detail::require_one_dimension(f);
    const double t = d.switching_width;
    const double om = d.effective_gap();
    const double beta = 2.0 * std::numbers::pi * t / f.circumference;
    const auto s = detail::time_ordered_mode_sum(0.0, beta, -1, f, tail);
    return {-0.5 * t * t * std::exp(-t * t * om * om) * s.sum, s.modes};
}

// Pair element, derivative coupling. Divergent at coincident positions.
inline OscElement m_osc_derivative(const DetectorParams& a, const DetectorParams& b,
                                   const FieldConfig& f,
                                   TailHandling tail = TailHandling::Resummed) {
    detail::require_one_dimension(f);
    detail::require_identical(a, b);
    const double t = a.switching_width;
    const double om = a.effective_gap();
    const double l = f.circumference;
    const double theta = detail::reduced_angle(a.position - b.position, l);
    const double beta = 2.0 * std::numbers::pi * t / l;
    const auto s = detail::time_ordered_mode_sum(theta, beta, 1, f, tail);
    const double pre = 4.0 * std::numbers::pi * std::numbers::pi * t * t / (l * l);
    return {-pre * std::exp(-t * t * om * om) * s.sum, s.modes};
}

} // namespace zmharvest
