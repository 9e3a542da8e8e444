#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "zmharvest/config_io.hpp"
#include "zmharvest/sweep.hpp"

using namespace zmharvest;

namespace {

const char* kConfigText =
    "# reference point\n"
    "omega = 1.0\n"
    "lambda_tilde = 0.01\n"
    "T = 1.0\n"
    "L = 10.0\n"
    "n_dim = 1\n"
    "gamma = 1.0\n"
    "separation_fraction = 0.5\n"
    "coupling = amplitude\n"
    "detector = qubit\n"
    "include_zero_mode = true\n"
    "n_max = 256\n"
    "quad_tol = 1e-12\n"
    "epsilon = 1e-4\n";

ValidatedConfig reference_point() {
    auto r = validate(parse_config_text(kConfigText));
    REQUIRE(r.ok());
    return *r.value;
}

SweepSpec cavity_spec(int count = 4) {
    SweepSpec s;
    s.axis = SweepAxis::CavityL;
    s.lo = 2.0;
    s.hi = 12.0;
    s.count = count;
    s.base = reference_point().cfg;
    return s;
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("round trip of the reference text") {
        const auto c = parse_config_text(kConfigText);
        CHECK(c.field.circumference == 10.0);
        CHECK(c.detector_a.coupling == 0.01);
        CHECK(c.separation->mode == SeparationSpec::Mode::FractionOfL);
        CHECK(c.field.include_zero_mode);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS((void)parse_config_text(std::string(kConfigText) + "bogus = 1\n"),
                        ConfigParseError);
    }
    SUBCASE("missing keys are rejected") {
        CHECK_THROWS_AS((void)parse_config_text("omega = 1\n"), ConfigParseError);
    }
    SUBCASE("separation must be given exactly once") {
        CHECK_THROWS_AS(
            (void)parse_config_text(std::string(kConfigText) + "separation_abs = 3\n"),
            ConfigParseError);
    }
}

TEST_CASE("single-point evaluation") {
    SUBCASE("reference row composes the module values") {
        const auto row = run_point(reference_point());
        CHECK(row.error_flag == "ok");
        CHECK(row.l_omega == 10.0);
        CHECK(row.sep_omega == 5.0);
        CHECK(row.l_aa_zm == doctest::Approx(0.93613915333064664).epsilon(1e-12));
        CHECK(row.l_aa_osc == doctest::Approx(0.073704523139062159).epsilon(1e-10));
        CHECK(row.re_m_zm == doctest::Approx(-1.1441700762930125).epsilon(1e-12));
        CHECK(row.im_m_zm == doctest::Approx(0.13040986643465843).epsilon(1e-12));
        CHECK(row.negativity_without_zm > 0.0);
        CHECK(row.n_max_used > 0);
    }
    SUBCASE("zero coupling reports plain zero columns") {
        auto vc = reference_point();
        vc.cfg.detector_a.coupling = 0.0;
        vc.cfg.detector_b.coupling = 0.0;
        const auto row = run_point(vc);
        CHECK(row.error_flag == "ok");
        CHECK(row.l_aa_total == 0.0);
        CHECK(row.abs_m_total == 0.0);
        CHECK(row.negativity_with_zm == 0.0);
        CHECK(row.negativity_without_zm == 0.0);
    }
    SUBCASE("toggling the zero mode changes only zero-mode columns") {
        auto with = reference_point();
        auto without = reference_point();
        without.cfg.field.include_zero_mode = false;
        const auto r1 = run_point(with);
        const auto r2 = run_point(without);
        CHECK(r2.l_aa_zm == 0.0);
        CHECK(r2.re_m_zm == 0.0);
        CHECK(r1.l_aa_osc == r2.l_aa_osc);
        CHECK(r1.re_m_osc == r2.re_m_osc);
        CHECK(r1.im_m_osc == r2.im_m_osc);
        CHECK(r1.negativity_without_zm == r2.negativity_without_zm);
        CHECK(r2.negativity_with_zm == r2.negativity_without_zm);
    }
    SUBCASE("a divergent element is recorded, not thrown") {
        auto vc = reference_point();
        vc.cfg.field.coupling = CouplingKind::Derivative;
        vc.cfg.separation = SeparationSpec{SeparationSpec::Mode::Absolute, 0.0};
        auto r = validate(vc.cfg);
        REQUIRE(r.ok());
        const auto row = run_point(*r.value);
        CHECK(row.error_flag == "divergent_element");
        CHECK(std::isnan(row.abs_m_total));
    }
}

TEST_CASE("sweeps") {
    SUBCASE("rows equal independent point evaluations") {
        const auto spec = cavity_spec();
        const auto rows = run_sweep(spec);
        REQUIRE(rows.size() == 4);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            HarvestConfig c = config_at(spec, sweep_grid(2.0, 12.0, 4, Spacing::Linear)[i]);
            const auto single = run_point(*validate(c).value);
            CHECK(rows[i].negativity_with_zm == single.negativity_with_zm);
            CHECK(rows[i].l_aa_total == single.l_aa_total);
        }
    }
    SUBCASE("separation tracks the cavity when specified as a fraction") {
        const auto rows = run_sweep(cavity_spec());
        for (const auto& r : rows) CHECK(r.sep_omega == doctest::Approx(0.5 * r.l_omega));
    }
    SUBCASE("deterministic output bytes") {
        const auto rows1 = run_sweep(cavity_spec());
        const auto rows2 = run_sweep(cavity_spec());
        std::ostringstream s1, s2;
        write_csv(s1, rows1);
        write_csv(s2, rows2);
        CHECK(s1.str() == s2.str());
    }
    SUBCASE("zero-mode-off sweeps are identical across gamma") {
        auto spec1 = cavity_spec();
        auto spec2 = cavity_spec();
        spec1.base.field.include_zero_mode = false;
        spec2.base.field.include_zero_mode = false;
        spec1.base.zero_mode = ZeroModeState::saturated(0.5);
        spec2.base.zero_mode = ZeroModeState::saturated(5.0);
        std::ostringstream s1, s2;
        write_csv(s1, run_sweep(spec1));
        write_csv(s2, run_sweep(spec2));
        CHECK(s1.str() == s2.str());
    }
    SUBCASE("log spacing covers the range geometrically") {
        const auto g = sweep_grid(0.1, 10.0, 3, Spacing::Log);
        CHECK(g[0] == doctest::Approx(0.1));
        CHECK(g[1] == doctest::Approx(1.0));
        CHECK(g[2] == doctest::Approx(10.0));
    }
    SUBCASE("zero coupling yields all-zero rows") {
        auto spec = cavity_spec(3);
        spec.base.detector_a.coupling = 0.0;
        spec.base.detector_b.coupling = 0.0;
        const auto rows = run_sweep(spec);
        REQUIRE(rows.size() == 3);
        for (const auto& r : rows) {
            CHECK(r.error_flag == "ok");
            CHECK(r.l_aa_total == 0.0);
            CHECK(r.abs_m_total == 0.0);
            CHECK(r.negativity_with_zm == 0.0);
            CHECK(r.negativity_without_zm == 0.0);
        }
    }
}

TEST_CASE("output formats") {
    const auto rows = run_sweep(cavity_spec(2));
    SUBCASE("csv schema is fixed") {
        std::ostringstream ss;
        write_csv(ss, rows);
        const std::string out = ss.str();
        CHECK(out.rfind("L_omega,gamma,T_omega,sep_omega,L_AA_zm,L_AA_osc,L_AA_total,"
                        "re_M_zm,im_M_zm,re_M_osc,im_M_osc,abs_M_total,"
                        "negativity_with_zm,negativity_without_zm,n_max_used,error_flag",
                        0) == 0);
        // one header plus one line per row
        int lines = 0;
        for (char ch : out)
            if (ch == '\n') ++lines;
        CHECK(lines == 3);
    }
    SUBCASE("json output carries the same fields") {
        std::ostringstream ss;
        write_json(ss, rows);
        CHECK(ss.str().find("\"negativity_with_zm\"") != std::string::npos);
        CHECK(ss.str().find("\"error_flag\": \"ok\"") != std::string::npos);
    }
}
