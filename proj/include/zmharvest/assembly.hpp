#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "zmharvest/errors.hpp"
#include "zmharvest/linalg.hpp"
#include "zmharvest/oscillator.hpp"
#include "zmharvest/types.hpp"
#include "zmharvest/zero_mode.hpp"

namespace zmharvest {

// Assembly of the leading-order two-detector density matrix and its
// negativity. Matrix elements are stored per squared dimensionless coupling,
// with detector A's gap as the frequency reference, and keep the zero-mode /
// oscillator-mode parts separate; the physical matrix entries are recovered
// by multiplying with the coupling product of the detectors involved.

struct ElementPair {
    std::complex<double> zm{};
    std::complex<double> osc{};
    std::complex<double> total() const { return zm + osc; }
};

struct MatrixElements {
    ElementPair l_aa, l_bb, l_ab, m;
    ElementPair k_a, k_b; // populated for harmonic-oscillator detectors only
    DetectorKind kind = DetectorKind::Qubit;
    double lambda_a = 1.0, lambda_b = 1.0;
    int modes_used = 0;
};

struct JointState {
    enum class Basis { Qubit4, Oscillator6 };
    // The assembled matrix is the perturbative state truncated at second
    // order in the coupling.
    static constexpr int perturbative_order = 2;
    Basis basis = Basis::Qubit4;
    ComplexMatrix rho{4};
    std::vector<std::pair<int, int>> labels; // occupation numbers (n_A, n_B)
    // Set when the excitation probabilities push past the range where the
    // truncated matrix is trustworthy (L_AA + L_BB > 0.1).
    bool perturbative_warning = false;
};

// Evaluates every element of the validated configuration. With the zero mode
// excluded the zero-mode parts are never computed, so results are exactly
// independent of the zero-mode state.
inline MatrixElements assemble_elements(const ValidatedConfig& vc) {
    const HarvestConfig& c = vc.cfg;
    if (c.field.spatial_dim != 1)
        throw UnsupportedDimension(
            "the oscillator sector (and hence full assembly) requires n = 1");

    const DetectorParams& a = c.detector_a;
    const DetectorParams& b = c.detector_b;
    MatrixElements out;
    out.kind = a.kind;
    out.lambda_a = a.coupling;
    out.lambda_b = b.coupling;

    // Reference scale making lambda~ the dimensionless coupling; for n = 1
    // every element is divided by lambda^2 = lambda~^2 Omega^2.
    const double ref = a.effective_gap() * a.effective_gap();
    const bool amplitude = c.field.coupling == CouplingKind::Amplitude;

    int modes = 0;
    auto track = [&modes](const OscElement& e) {
        modes = std::max(modes, e.modes_used);
        return e.value;
    };

    if (amplitude) {
        out.l_aa.osc = ref * track(l_osc(a, c.field));
        out.l_bb.osc = ref * track(l_osc(b, c.field));
        out.l_ab.osc = ref * track(l_osc_cross(a, b, c.field));
        out.m.osc = ref * track(m_osc(a, b, c.field));
    } else {
        out.l_aa.osc = ref * track(l_osc_derivative(a, c.field));
        out.l_bb.osc = ref * track(l_osc_derivative(b, c.field));
        out.l_ab.osc = ref * track(l_osc_cross_derivative(a, b, c.field));
        out.m.osc = ref * track(m_osc_derivative(a, b, c.field));
    }

    if (c.field.include_zero_mode) {
        const ZeroModeState& s = c.zero_mode;
        if (amplitude) {
            out.l_aa.zm = ref * l_zm(a, s, c.field);
            out.l_bb.zm = ref * l_zm(b, s, c.field);
            out.l_ab.zm = ref * l_zm(a, s, c.field); // spatially constant
            out.m.zm = ref * m_zm(a, b, s, c.field);
        } else {
            out.l_aa.zm = ref * l_zm_derivative(a, s, c.field);
            out.l_bb.zm = ref * l_zm_derivative(b, s, c.field);
            out.l_ab.zm = ref * l_zm_derivative(a, s, c.field);
            out.m.zm = ref * m_zm_derivative(a, b, s, c.field);
        }
    }

    if (a.kind == DetectorKind::HarmonicOscillator) {
        // Only the amplitude coupling reaches here (validate() rejects the
        // derivative/oscillator combination).
        out.k_a.osc = ref * track(k_osc(a, c.field));
        out.k_b.osc = ref * track(k_osc(b, c.field));
        if (c.field.include_zero_mode) {
            out.k_a.zm = ref * k_zm(a, c.zero_mode, c.field);
            out.k_b.zm = ref * k_zm(b, c.zero_mode, c.field);
        }
    }

    out.modes_used = modes;
    return out;
}

namespace detail {

inline bool excitation_warning(const MatrixElements& e) {
    const double laa = (e.lambda_a * e.lambda_a * e.l_aa.total()).real();
    const double lbb = (e.lambda_b * e.lambda_b * e.l_bb.total()).real();
    return laa + lbb > 0.1;
}

} // namespace detail

// 4x4 state of two qubit detectors in the basis {gg, ge, eg, ee}.
inline JointState assemble_qubit_state(const MatrixElements& e) {
    JointState st;
    st.basis = JointState::Basis::Qubit4;
    st.rho = ComplexMatrix(4);
    st.labels = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const double saa = e.lambda_a * e.lambda_a;
    const double sbb = e.lambda_b * e.lambda_b;
    const double sab = e.lambda_a * e.lambda_b;
    const std::complex<double> laa = saa * e.l_aa.total();
    const std::complex<double> lbb = sbb * e.l_bb.total();
    const std::complex<double> lab = sab * e.l_ab.total();
    const std::complex<double> m = sab * e.m.total();
    st.rho(0, 0) = 1.0 - laa - lbb;
    st.rho(1, 1) = lbb;
    st.rho(2, 2) = laa;
    st.rho(1, 2) = std::conj(lab); // L_BA
    st.rho(2, 1) = lab;
    st.rho(0, 3) = std::conj(m);
    st.rho(3, 0) = m;
    st.perturbative_warning = detail::excitation_warning(e);
    return st;
}

// 6x6 state of two harmonic-oscillator detectors in the basis
// {00, 01, 10, 11, 02, 20}.
inline JointState assemble_oscillator_state(const MatrixElements& e) {
    JointState st;
    st.basis = JointState::Basis::Oscillator6;
    st.rho = ComplexMatrix(6);
    st.labels = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}};
    const double saa = e.lambda_a * e.lambda_a;
    const double sbb = e.lambda_b * e.lambda_b;
    const double sab = e.lambda_a * e.lambda_b;
    const std::complex<double> laa = saa * e.l_aa.total();
    const std::complex<double> lbb = sbb * e.l_bb.total();
    const std::complex<double> lab = sab * e.l_ab.total();
    const std::complex<double> m = sab * e.m.total();
    const std::complex<double> ka = saa * e.k_a.total();
    const std::complex<double> kb = sbb * e.k_b.total();
    st.rho(0, 0) = 1.0 - laa - lbb;
    st.rho(1, 1) = lbb;
    st.rho(2, 2) = laa;
    st.rho(1, 2) = std::conj(lab);
    st.rho(2, 1) = lab;
    st.rho(0, 3) = std::conj(m);
    st.rho(3, 0) = m;
    st.rho(0, 4) = std::conj(kb);
    st.rho(4, 0) = kb;
    st.rho(0, 5) = std::conj(ka);
    st.rho(5, 0) = ka;
    st.perturbative_warning = detail::excitation_warning(e);
    return st;
}

inline JointState assemble_state(const MatrixElements& e) {
    return e.kind == DetectorKind::Qubit ? assemble_qubit_state(e)
                                         : assemble_oscillator_state(e);
}

// Leading-order negativity max{0, |M| - L} for the symmetric setting; the
// same expression holds for both detector models. Physical (includes the
// coupling factors).
inline double negativity_leading_order(const MatrixElements& e) {
    const double laa = e.l_aa.total().real();
    const double lbb = e.l_bb.total().real();
    const double tol = 1e-10;
    if (std::abs(laa - lbb) > tol * std::max(std::abs(laa), std::abs(lbb)) ||
        std::abs(e.lambda_a - e.lambda_b) > tol * std::abs(e.lambda_a))
        throw AsymmetricDetectors(
            "leading-order negativity assumes identical detectors (L_AA = L_BB)");
    const double lam2 = e.lambda_a * e.lambda_b;
    return lam2 * std::max(0.0, std::abs(e.m.total()) - laa);
}

// Negativity from explicit partial transposition of the assembled matrix:
// sum of the magnitudes of the negative eigenvalues.
inline double negativity_exact(const JointState& st) {
    const ComplexMatrix pt = partial_transpose_b(st.rho, st.labels);
    const std::vector<double> ev = hermitian_eigenvalues(pt);
    double neg = 0.0;
    for (double v : ev)
        if (v < 0.0) neg -= v;
    return neg;
}

} // namespace zmharvest
