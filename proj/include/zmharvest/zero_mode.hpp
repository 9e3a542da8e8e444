#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "zmharvest/errors.hpp"
#include "zmharvest/types.hpp"

namespace zmharvest {

// Closed-form zero-mode quantities. The zero mode of the periodic massless
// field behaves as a free particle of effective mass L^n; its two-point
// function for a centered Gaussian state is
//
//   W(t, t') = <Q^2> + <P^2> t t'/M^2 + <{Q,P}> (t + t')/(2M) - i (t - t')/(2M)
//
// with M = L^n. For the minimal-uncertainty family and a Gaussian switching
// e^{-t^2/(2T^2)} every detector matrix element below has an elementary
// closed form; all results are quoted per squared coupling.

struct ZeroModeSplit {
    std::complex<double> hadamard{};   // from the anticommutator part
    std::complex<double> commutator{}; // from the commutator part
    std::complex<double> sum() const { return 0.5 * (hadamard + commutator); }
};

namespace detail {

inline void require_saturated(const ZeroModeState& s) {
    if (!s.saturated_family())
        throw UnsupportedState(
            "zero-mode closed forms require the centered minimal-uncertainty "
            "family; evaluate the Wightman function under quadrature instead");
}

} // namespace detail

// Anticommutator expectation of the zero mode; symmetric in its time
// arguments and state-dependent.
inline double hadamard_zm(double t, double tp, const ZeroModeState& s,
                          const FieldConfig& f) {
    const double m = f.effective_mass();
    return 2.0 * s.q_sq + 2.0 * s.p_sq * t * tp / (m * m) + s.sym_qp * (t + tp) / m;
}

// Commutator expectation: purely imaginary, antisymmetric, and independent
// of the state.
inline std::complex<double> commutator_zm(double t, double tp, const FieldConfig& f) {
    return {0.0, -(t - tp) / f.effective_mass()};
}

// Pointwise zero-mode two-point function; accepts any centered Gaussian
// second moments.
inline std::complex<double> wightman_zm(double t, double tp, const ZeroModeState& s,
                                        const FieldConfig& f) {
    return 0.5 * hadamard_zm(t, tp, s, f) + 0.5 * commutator_zm(t, tp, f);
}

// Derivative-coupling kernel d_t d_t' W: a state-dependent constant.
inline std::complex<double> wightman_zm_derivative(double /*t*/, double /*tp*/,
                                                   const ZeroModeState& s,
                                                   const FieldConfig& f) {
    const double m = f.effective_mass();
    return {s.p_sq / (m * m), 0.0};
}

// Local-noise element: split into Hadamard/commutator contributions.
inline ZeroModeSplit l_zm_split(const DetectorParams& d, const ZeroModeState& s,
                                const FieldConfig& f) {
    detail::require_saturated(s);
    const double g = s.gamma();
    const double t = d.switching_width;
    const double om = d.effective_gap();
    const double m = f.effective_mass();
    const double e = std::exp(-t * t * om * om);
    const double pi = std::numbers::pi;
    ZeroModeSplit out;
    out.hadamard = 2.0 * pi * t * t * e * (g * g * std::pow(t, 4) * om * om + m * m) /
                   (g * m * m);
    out.commutator = -4.0 * pi * std::pow(t, 4) * om * e / m;
    return out;
}

// Local-noise element in factored form; exactly zero at M = gamma T^2 Omega
// and manifestly non-negative.
inline double l_zm(const DetectorParams& d, const ZeroModeState& s,
                   const FieldConfig& f) {
    detail::require_saturated(s);
    const double g = s.gamma();
    const double t = d.switching_width;
    const double om = d.effective_gap();
    const double m = f.effective_mass();
    const double root = m * t - g * t * t * t * om;
    return std::numbers::pi * std::exp(-t * t * om * om) * root * root / (g * m * m);
}

inline double l_zm_large_cavity_limit(const DetectorParams& d, const ZeroModeState& s) {
    detail::require_saturated(s);
    const double t = d.switching_width;
    const double om = d.effective_gap();
    return std::numbers::pi * t * t * std::exp(-t * t * om * om) / s.gamma();
}

namespace detail {

inline ZeroModeSplit m_zm_split_impl(double gap, double t, double g, double m) {
    const double e = std::exp(-t * t * gap * gap);
    const double pi = std::numbers::pi;
    const double sqrt_pi = std::sqrt(pi);
    ZeroModeSplit out;
    out.hadamard = -2.0 * pi * t * t * e *
                   (m * m - g * g * std::pow(t, 4) * gap * gap) / (g * m * m);
    out.commutator = std::complex<double>(0.0, 4.0 * sqrt_pi * t * t * t * e / m);
    return out;
}

inline std::complex<double> m_zm_impl(double gap, double t, double g, double m) {
    const double e = std::exp(-t * t * gap * gap);
    const double pi = std::numbers::pi;
    const double sqrt_pi = std::sqrt(pi);
    const double re = -e * (pi * m * m * t * t - pi * g * g * std::pow(t, 6) * gap * gap) /
                      (g * m * m);
    const double im = e * 2.0 * sqrt_pi * g * m * t * t * t / (g * m * m);
    return {re, im};
}

} // namespace detail

// Pair element for identical detectors; independent of the detector
// positions because the zero mode is spatially constant.
inline std::complex<double> m_zm(const DetectorParams& a, const DetectorParams& b,
                                 const ZeroModeState& s, const FieldConfig& f) {
    detail::require_saturated(s);
    detail::require_identical(a, b);
    return detail::m_zm_impl(a.effective_gap(), a.switching_width, s.gamma(),
                             f.effective_mass());
}

inline ZeroModeSplit m_zm_split(const DetectorParams& a, const DetectorParams& b,
                                const ZeroModeState& s, const FieldConfig& f) {
    detail::require_saturated(s);
    detail::require_identical(a, b);
    return detail::m_zm_split_impl(a.effective_gap(), a.switching_width, s.gamma(),
                                   f.effective_mass());
}

// Two-excitation element of a single harmonic-oscillator detector: the same
// time-ordered Gaussian integrals as the pair element at zero separation,
// carrying a factor 1/2 because only one ordering appears.
inline std::complex<double> k_zm(const DetectorParams& d, const ZeroModeState& s,
                                 const FieldConfig& f) {
    detail::require_saturated(s);
    return 0.5 * detail::m_zm_impl(d.effective_gap(), d.switching_width, s.gamma(),
                                   f.effective_mass());
}

// Derivative-coupling local noise.
inline double l_zm_derivative(const DetectorParams& d, const ZeroModeState& s,
                              const FieldConfig& f) {
    detail::require_saturated(s);
    const double t = d.switching_width;
    const double om = d.effective_gap();
    const double m = f.effective_mass();
    return std::numbers::pi * s.gamma() * t * t * std::exp(-t * t * om * om) / (m * m);
}

// Derivative-coupling pair element; exactly the negated local noise, computed
// from it so the identity holds bitwise.
inline std::complex<double> m_zm_derivative(const DetectorParams& a,
                                            const DetectorParams& b,
                                            const ZeroModeState& s,
                                            const FieldConfig& f) {
    detail::require_identical(a, b);
    return {-l_zm_derivative(a, s, f), 0.0};
}

} // namespace zmharvest
