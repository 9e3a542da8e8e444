#include <doctest.h>

#include <cmath>
#include <random>

#include "zmharvest/oscillator.hpp"
#include "zmharvest/types.hpp"
#include "zmharvest/zero_mode.hpp"

using namespace zmharvest;

namespace {

HarvestConfig half_cavity_preset() {
    HarvestConfig c;
    c.detector_a = {1.0, 1.0, 1.0, 0.0, DetectorKind::Qubit, 1.0};
    c.detector_b = c.detector_a;
    c.zero_mode = ZeroModeState::saturated(1.0);
    c.field.circumference = 10.0;
    c.separation = SeparationSpec{SeparationSpec::Mode::FractionOfL, 0.5};
    return c;
}

bool has_error(const ValidationResult& r, ConfigErrorCode code) {
    for (const auto& e : r.errors)
        if (e.code == code) return true;
    return false;
}

} // namespace

TEST_CASE("half-cavity preset validates and resolves the separation") {
    const auto r = validate(half_cavity_preset());
    REQUIRE(r.ok());
    CHECK(r.value->separation == doctest::Approx(5.0));
    CHECK(r.value->cfg.detector_b.position == doctest::Approx(5.0));
}

TEST_CASE("non-positive cavity size is rejected") {
    auto c = half_cavity_preset();
    c.field.circumference = -1.0;
    const auto r = validate(c);
    CHECK(!r.ok());
    CHECK(has_error(r, ConfigErrorCode::NonPositiveLength));
}

TEST_CASE("positions are reduced modulo the circumference") {
    auto c = half_cavity_preset();
    c.separation.reset();
    c.detector_a.position = 12.0;
    c.detector_b.position = 3.0;
    const auto r = validate(c);
    REQUIRE(r.ok());
    CHECK(r.value->cfg.detector_a.position == doctest::Approx(2.0));
    CHECK(r.value->separation == doctest::Approx(1.0));
}

TEST_CASE("all violations are reported together") {
    auto c = half_cavity_preset();
    c.field.circumference = 0.0;
    c.detector_a.switching_width = -2.0;
    c.zero_mode = ZeroModeState::saturated(-1.0);
    c.field.mode_cutoff = 0;
    const auto r = validate(c);
    CHECK(!r.ok());
    CHECK(has_error(r, ConfigErrorCode::NonPositiveLength));
    CHECK(has_error(r, ConfigErrorCode::NonPositiveWidth));
    CHECK(has_error(r, ConfigErrorCode::NonPositiveGamma));
    CHECK(has_error(r, ConfigErrorCode::CutoffTooSmall));
}

TEST_CASE("derivative coupling with oscillator detectors is rejected") {
    auto c = half_cavity_preset();
    c.field.coupling = CouplingKind::Derivative;
    c.detector_a.kind = DetectorKind::HarmonicOscillator;
    c.detector_b.kind = DetectorKind::HarmonicOscillator;
    const auto r = validate(c);
    CHECK(has_error(r, ConfigErrorCode::UnsupportedCombination));
}

TEST_CASE("validation is idempotent") {
    auto c = half_cavity_preset();
    c.detector_a.position = 17.25;
    const auto first = validate(c);
    REQUIRE(first.ok());
    const auto second = validate(first.value->cfg);
    REQUIRE(second.ok());
    CHECK(second.value->separation == first.value->separation);
    CHECK(second.value->cfg.detector_a.position == first.value->cfg.detector_a.position);
    CHECK(second.value->cfg.detector_b.position == first.value->cfg.detector_b.position);
}

TEST_CASE("scale invariance of the dimensionless elements") {
    // Lengths and times in units of the gap: mapping
    // (Omega, T, L, dx) -> (s Omega, T/s, L/s, dx/s) at fixed gamma leaves
    // every element divided by the squared dimensionless coupling unchanged.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.5, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double om = uni(rng), t = uni(rng), l = 6.0 * uni(rng), g = uni(rng);
        const double s = 0.5 + uni(rng);
        const auto st = ZeroModeState::saturated(g);

        DetectorParams d1{om, 1.0, t, 0.0, DetectorKind::Qubit, om};
        DetectorParams d1b = d1;
        d1b.position = 0.5 * l;
        FieldConfig f1;
        f1.circumference = l;
        f1.mode_cutoff = 4096;

        DetectorParams d2{s * om, 1.0, t / s, 0.0, DetectorKind::Qubit, s * om};
        DetectorParams d2b = d2;
        d2b.position = 0.5 * l / s;
        FieldConfig f2 = f1;
        f2.circumference = l / s;

        const double ref1 = om * om, ref2 = s * om * s * om;
        CHECK(ref1 * l_zm(d1, st, f1) ==
              doctest::Approx(ref2 * l_zm(d2, st, f2)).epsilon(1e-12));
        const auto m1 = ref1 * m_zm(d1, d1b, st, f1);
        const auto m2 = ref2 * m_zm(d2, d2b, st, f2);
        CHECK(std::abs(m1 - m2) <= 1e-12 * std::abs(m1));
        CHECK(ref1 * l_osc(d1, f1).value.real() ==
              doctest::Approx(ref2 * l_osc(d2, f2).value.real()).epsilon(1e-10));
        const auto mo1 = ref1 * m_osc(d1, d1b, f1).value;
        const auto mo2 = ref2 * m_osc(d2, d2b, f2).value;
        CHECK(std::abs(mo1 - mo2) <= 1e-10 * std::abs(mo1));
    }
}
