#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "zmharvest/errors.hpp"

namespace zmharvest {

// Natural units c = hbar = 1 throughout. Energies in inverse length, the
// coupling is stored in its dimensionless rescaled form.

enum class DetectorKind { Qubit, HarmonicOscillator };
enum class CouplingKind { Amplitude, Derivative };

struct DetectorParams {
    double gap = 1.0;             // energy gap Omega
    double coupling = 1.0;        // dimensionless coupling lambda~
    double switching_width = 1.0; // Gaussian switching width T
    double position = 0.0;        // location on the circle, [0, L)
    DetectorKind kind = DetectorKind::Qubit;
    double ho_frequency = 1.0;    // oscillator frequency, HarmonicOscillator only

    // Frequency entering the interaction-picture phases: the gap for a qubit,
    // the oscillator frequency for a harmonic-oscillator detector.
    double effective_gap() const {
        return kind == DetectorKind::Qubit ? gap : ho_frequency;
    }
};

// Gaussian phase-space state of the zero mode. The closed forms in
// zero_mode.hpp require the minimal-uncertainty family <Q^2> = 1/(2 gamma),
// <P^2> = gamma/2 with vanishing first moments; the general second moments
// are carried so the pointwise two-point function can be evaluated for any
// centered Gaussian state.
struct ZeroModeState {
    double q_sq = 0.5;  // <Q^2>
    double p_sq = 0.5;  // <P^2>
    double sym_qp = 0.0; // <{Q,P}>
    double mean_q = 0.0;
    double mean_p = 0.0;

    static ZeroModeState saturated(double gamma) {
        ZeroModeState s;
        s.q_sq = 1.0 / (2.0 * gamma);
        s.p_sq = gamma / 2.0;
        return s;
    }

    // gamma of the saturated family; exact for states built via saturated().
    double gamma() const { return 2.0 * p_sq; }

    bool centered() const { return mean_q == 0.0 && mean_p == 0.0 && sym_qp == 0.0; }

    bool saturated_family(double tol = 1e-12) const {
        return centered() && q_sq > 0.0 && p_sq > 0.0 &&
               std::abs(4.0 * q_sq * p_sq - 1.0) <= tol;
    }
};

struct FieldConfig {
    double circumference = 10.0; // cavity size L
    int spatial_dim = 1;         // n; the zero mode sees effective mass L^n
    CouplingKind coupling = CouplingKind::Amplitude;
    bool include_zero_mode = true;
    int mode_cutoff = 256;       // n_max for oscillator-mode sums
    double epsilon = 1e-4;       // regulator for the log-form cross-checks
    double quad_tol = 1e-8;      // relative tolerance for numerical integration

    // L^n by repeated multiplication so the n = 1 case is bitwise L.
    double effective_mass() const {
        double m = 1.0;
        for (int i = 0; i < spatial_dim; ++i) m *= circumference;
        return m;
    }
};

struct SeparationSpec {
    enum class Mode { FractionOfL, Absolute };
    Mode mode = Mode::FractionOfL;
    double value = 0.5;
};

struct HarvestConfig {
    DetectorParams detector_a;
    DetectorParams detector_b;
    ZeroModeState zero_mode = ZeroModeState::saturated(1.0);
    FieldConfig field;
    std::optional<SeparationSpec> separation; // overrides detector_b.position
};

enum class ConfigErrorCode {
    NonPositiveLength,
    NonPositiveGamma,
    NonPositiveWidth,
    CutoffTooSmall,
    NonPositiveGap,
    NegativeCoupling,
    NonPositiveDimension,
    NonPositiveEpsilon,
    NonPositiveTolerance,
    InvalidSeparation,
    UnsupportedState,
    UnsupportedCombination,
};

struct ConfigError {
    ConfigErrorCode code;
    std::string message;
};

// Normalized configuration: detector positions reduced mod L and the
// separation resolved to an absolute distance in [0, L). The separation spec
// itself is kept as written so fractional separations keep tracking the
// cavity size under sweeps.
struct ValidatedConfig {
    HarvestConfig cfg;
    double separation = 0.0; // |x_A - x_B| reduced to [0, L)
};

struct ValidationResult {
    std::optional<ValidatedConfig> value;
    std::vector<ConfigError> errors;
    bool ok() const { return value.has_value(); }
};

namespace detail {

inline double reduce_mod(double x, double l) {
    double r = std::fmod(x, l);
    if (r < 0.0) r += l;
    if (r >= l) r -= l; // adding l to a tiny negative remainder can round to l
    return r;
}

// Several elements are derived only for identical detector presets.
inline void require_identical(const DetectorParams& a, const DetectorParams& b) {
    const double tol = 1e-10;
    if (std::abs(a.effective_gap() - b.effective_gap()) >
            tol * std::abs(a.effective_gap()) ||
        std::abs(a.switching_width - b.switching_width) >
            tol * std::abs(a.switching_width))
        throw AsymmetricDetectors(
            "this element is derived for identical detector parameters");
}

} // namespace detail

// Checks every invariant and returns either a normalized configuration or the
// complete list of violations.
inline ValidationResult validate(const HarvestConfig& in) {
    ValidationResult res;
    auto fail = [&res](ConfigErrorCode c, std::string msg) {
        res.errors.push_back({c, std::move(msg)});
    };

    const FieldConfig& f = in.field;
    if (!(f.circumference > 0.0))
        fail(ConfigErrorCode::NonPositiveLength, "cavity circumference L must be > 0");
    if (f.spatial_dim < 1)
        fail(ConfigErrorCode::NonPositiveDimension, "spatial dimension n must be >= 1");
    if (f.mode_cutoff < 1)
        fail(ConfigErrorCode::CutoffTooSmall, "mode cutoff n_max must be >= 1");
    if (!(f.epsilon > 0.0))
        fail(ConfigErrorCode::NonPositiveEpsilon, "regulator epsilon must be > 0");
    if (!(f.quad_tol > 0.0))
        fail(ConfigErrorCode::NonPositiveTolerance, "quadrature tolerance must be > 0");

    for (const DetectorParams* d : {&in.detector_a, &in.detector_b}) {
        const char* tag = (d == &in.detector_a) ? "A" : "B";
        if (!(d->effective_gap() > 0.0))
            fail(ConfigErrorCode::NonPositiveGap,
                 std::string("detector ") + tag + ": energy gap must be > 0");
        if (!(d->switching_width > 0.0))
            fail(ConfigErrorCode::NonPositiveWidth,
                 std::string("detector ") + tag + ": switching width T must be > 0");
        if (d->coupling < 0.0)
            fail(ConfigErrorCode::NegativeCoupling,
                 std::string("detector ") + tag + ": coupling must be >= 0");
    }

    if (in.detector_a.kind != in.detector_b.kind)
        fail(ConfigErrorCode::UnsupportedCombination,
             "mixed qubit/oscillator detector pairs are not supported");
    if (f.coupling == CouplingKind::Derivative &&
        in.detector_a.kind == DetectorKind::HarmonicOscillator)
        fail(ConfigErrorCode::UnsupportedCombination,
             "derivative coupling with oscillator detectors has a UV-divergent "
             "two-excitation element at the pointlike limit");

    if (!(in.zero_mode.q_sq > 0.0) || !(in.zero_mode.p_sq > 0.0))
        fail(ConfigErrorCode::NonPositiveGamma,
             "zero-mode second moments must be positive (gamma > 0)");
    else if (!in.zero_mode.saturated_family())
        fail(ConfigErrorCode::UnsupportedState,
             "zero-mode state must be the centered minimal-uncertainty family");

    if (in.separation) {
        if (in.separation->mode == SeparationSpec::Mode::FractionOfL &&
            !(in.separation->value > 0.0 && in.separation->value <= 1.0))
            fail(ConfigErrorCode::InvalidSeparation,
                 "separation fraction must lie in (0, 1]");
    }

    if (!res.errors.empty()) return res;

    ValidatedConfig out;
    out.cfg = in;
    const double l = f.circumference;
    out.cfg.detector_a.position = detail::reduce_mod(in.detector_a.position, l);
    double dx;
    if (in.separation) {
        dx = in.separation->mode == SeparationSpec::Mode::FractionOfL
                 ? in.separation->value * l
                 : detail::reduce_mod(in.separation->value, l);
        out.cfg.detector_b.position =
            detail::reduce_mod(out.cfg.detector_a.position + dx, l);
    } else {
        out.cfg.detector_b.position = detail::reduce_mod(in.detector_b.position, l);
        dx = detail::reduce_mod(out.cfg.detector_b.position - out.cfg.detector_a.position, l);
    }
    out.separation = detail::reduce_mod(dx, l);
    res.value = out;
    return res;
}

} // namespace zmharvest
