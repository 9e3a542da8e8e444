// Command-line driver: single-point evaluation, parameter sweeps, config
// validation and quadrature cross-checks for the cylinder harvesting model.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence
// (or cross-check deviation) in at least one point.

#include <algorithm>
#include <complex>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zmharvest/zmharvest.hpp"

namespace {

using namespace zmharvest;

int load_config(const std::string& path, ValidatedConfig& out) {
    HarvestConfig cfg;
    try {
        cfg = parse_config_file(path);
    } catch (const ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    ValidationResult res = validate(cfg);
    if (!res.ok()) {
        for (const ConfigError& err : res.errors)
            std::cerr << "config error: " << err.message << "\n";
        return 1;
    }
    if (res.value->cfg.field.spatial_dim != 1) {
        std::cerr << "config error: the CLI evaluates the oscillator sector and "
                     "requires n_dim = 1 (the zero-mode library itself accepts "
                     "higher n)\n";
        return 1;
    }
    out = *res.value;
    return 0;
}

void emit(const std::vector<ResultRow>& rows, OutputFormat fmt,
          const std::string& out_path) {
    std::ostringstream ss;
    if (fmt == OutputFormat::Csv)
        write_csv(ss, rows);
    else
        write_json(ss, rows);
    if (out_path.empty()) {
        std::cout << ss.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << ss.str();
    }
}

int rows_exit_code(const std::vector<ResultRow>& rows) {
    for (const ResultRow& r : rows) {
        if (r.error_flag == "config_error") return 1;
        if (r.error_flag != "ok") return 2;
    }
    return 0;
}

void warn_perturbative(const std::vector<ResultRow>& rows) {
    for (const ResultRow& r : rows)
        if (r.perturbative_warning)
            std::cerr << "warning: excitation probability L_AA + L_BB exceeds 0.1 at "
                         "L_omega = " << r.l_omega
                      << "; the truncated density matrix is unreliable there\n";
}

// ---------------------------------------------------------------- oracle

struct Deviation {
    std::string name;
    double rel = 0.0;
};

double rel_diff(std::complex<double> a, std::complex<double> b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::abs(a - b) / scale;
}

// Cross-checks every closed form and per-mode reduction of the configured
// point against direct 2-d quadrature of the corresponding double integral.
std::vector<Deviation> run_oracle(const ValidatedConfig& vc) {
    std::vector<Deviation> devs;
    const HarvestConfig& c = vc.cfg;
    const DetectorParams& a = c.detector_a;
    const DetectorParams& b = c.detector_b;
    const double t = a.switching_width;
    const double om = a.effective_gap();
    const double span = 8.0 * std::max(t, b.switching_width);
    const double tol = std::min(1e-8, c.field.quad_tol);
    const std::complex<double> iunit(0.0, 1.0);
    const bool amplitude = c.field.coupling == CouplingKind::Amplitude;

    auto chi = [t](double x) { return std::exp(-x * x / (2.0 * t * t)); };

    auto rect = [&](auto&& f) {
        return integrate_2d(f, {-span, span, -span, span, DomainShape::Rectangle}, tol)
            .value;
    };
    auto ordered = [&](auto&& kernel, double gap) {
        auto f1 = [&](double x, double y) {
            return chi(x) * chi(y) * std::exp(iunit * gap * (x + y)) * kernel(x, y);
        };
        auto f2 = [&](double x, double y) {
            return chi(x) * chi(y) * std::exp(iunit * gap * (x + y)) * kernel(y, x);
        };
        const auto lower =
            integrate_2d(f1, {-span, span, -span, span, DomainShape::LowerTriangle}, tol);
        const auto upper =
            integrate_2d(f2, {-span, span, -span, span, DomainShape::UpperTriangle}, tol);
        return -(lower.value + upper.value);
    };

    // Zero-mode closed forms.
    if (c.field.include_zero_mode) {
        const ZeroModeState& s = c.zero_mode;
        if (amplitude) {
            auto wz = [&](double x, double y) { return wightman_zm(x, y, s, c.field); };
            auto lf = [&](double x, double y) {
                return std::exp(-iunit * om * (x - y)) * chi(x) * chi(y) * wz(x, y);
            };
            devs.push_back({"L_zm", rel_diff(rect(lf), l_zm(a, s, c.field))});
            devs.push_back({"M_zm", rel_diff(ordered(wz, om), m_zm(a, b, s, c.field))});
            devs.push_back(
                {"K_zm(half)", rel_diff(0.5 * ordered(wz, om), k_zm(a, s, c.field))});
        } else {
            auto az = [&](double x, double y) {
                return wightman_zm_derivative(x, y, s, c.field);
            };
            auto lf = [&](double x, double y) {
                return std::exp(-iunit * om * (x - y)) * chi(x) * chi(y) * az(x, y);
            };
            devs.push_back({"L_zm_deriv", rel_diff(rect(lf), l_zm_derivative(a, s, c.field))});
            devs.push_back(
                {"M_zm_deriv", rel_diff(ordered(az, om), m_zm_derivative(a, b, s, c.field))});
        }
    }

    // Oscillator-mode reductions at matched truncation.
    FieldConfig fc = c.field;
    fc.mode_cutoff = std::min(12, c.field.mode_cutoff);
    const double dx = vc.separation;
    if (amplitude) {
        auto wosc = [&](double x, double y) {
            return wightman_osc(x - y, dx, fc, false);
        };
        auto wosc0 = [&](double x, double y) {
            return wightman_osc(x - y, 0.0, fc, false);
        };
        auto lf = [&](double x, double y) {
            return std::exp(-iunit * om * (x - y)) * chi(x) * chi(y) * wosc0(x, y);
        };
        auto lfx = [&](double x, double y) {
            return std::exp(-iunit * om * (x - y)) * chi(x) * chi(y) * wosc(x, y);
        };
        devs.push_back(
            {"L_osc", rel_diff(rect(lf), l_osc(a, fc, TailHandling::TruncateOnly).value)});
        devs.push_back({"L_osc_cross",
                        rel_diff(rect(lfx),
                                 l_osc_cross(a, b, fc, TailHandling::TruncateOnly).value)});
        auto mkernel = [&](double x, double y) { return wightman_osc(x - y, dx, fc, false); };
        devs.push_back({"M_osc", rel_diff(ordered(mkernel, om),
                                          m_osc(a, b, fc, TailHandling::TruncateOnly).value)});
    } else {
        auto aosc = [&](double x, double y) {
            return wightman_osc_derivative(x - y, dx, fc);
        };
        auto aosc0 = [&](double x, double y) {
            return wightman_osc_derivative(x - y, 0.0, fc);
        };
        auto lf = [&](double x, double y) {
            return std::exp(-iunit * om * (x - y)) * chi(x) * chi(y) * aosc0(x, y);
        };
        auto lfx = [&](double x, double y) {
            return std::exp(-iunit * om * (x - y)) * chi(x) * chi(y) * aosc(x, y);
        };
        devs.push_back({"L_osc_deriv",
                        rel_diff(rect(lf),
                                 l_osc_derivative(a, fc, TailHandling::TruncateOnly).value)});
        devs.push_back(
            {"L_osc_cross_deriv",
             rel_diff(rect(lfx),
                      l_osc_cross_derivative(a, b, fc, TailHandling::TruncateOnly).value)});
        devs.push_back(
            {"M_osc_deriv",
             rel_diff(ordered(aosc, om),
                      m_osc_derivative(a, b, fc, TailHandling::TruncateOnly).value)});
    }
    return devs;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-detector entanglement harvesting on the Einstein cylinder"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv", axis = "L", spacing;
    double lo = 1.0, hi = 10.0, oracle_tol = 1e-6;
    int count = 10;

    CLI::App* c_validate = app.add_subcommand("validate", "check a configuration file");
    c_validate->add_option("--config", config_path, "configuration file")->required();

    CLI::App* c_point = app.add_subcommand("point", "evaluate a single configuration");
    c_point->add_option("--config", config_path, "configuration file")->required();
    c_point->add_option("--format", format, "csv or json");
    c_point->add_option("--out", out_path, "output file (default: stdout)");

    CLI::App* c_sweep = app.add_subcommand("sweep", "sweep one parameter axis");
    c_sweep->add_option("--config", config_path, "configuration file")->required();
    c_sweep->add_option("--axis", axis, "L, gamma, T or separation")->required();
    c_sweep->add_option("--lo", lo, "axis start")->required();
    c_sweep->add_option("--hi", hi, "axis end")->required();
    c_sweep->add_option("--count", count, "number of points")->required();
    c_sweep->add_option("--spacing", spacing, "linear or log (default: log for gamma)");
    c_sweep->add_option("--format", format, "csv or json");
    c_sweep->add_option("--out", out_path, "output file (default: stdout)");

    CLI::App* c_oracle = app.add_subcommand(
        "oracle", "cross-check closed forms against 2-d quadrature");
    c_oracle->add_option("--config", config_path, "configuration file")->required();
    c_oracle->add_option("--tol", oracle_tol, "acceptable relative deviation");

    CLI11_PARSE(app, argc, argv);

    OutputFormat fmt = OutputFormat::Csv;
    if (format == "json")
        fmt = OutputFormat::Json;
    else if (format != "csv") {
        std::cerr << "config error: unknown format '" << format << "'\n";
        return 1;
    }

    ValidatedConfig vc;
    if (const int rc = load_config(config_path, vc); rc != 0) return rc;

    if (c_validate->parsed()) {
        std::cout << "ok: L_omega=" << vc.cfg.field.circumference
                  << " separation=" << vc.separation
                  << " gamma=" << vc.cfg.zero_mode.gamma()
                  << " T=" << vc.cfg.detector_a.switching_width
                  << " coupling="
                  << (vc.cfg.field.coupling == CouplingKind::Amplitude ? "amplitude"
                                                                       : "derivative")
                  << " detector="
                  << (vc.cfg.detector_a.kind == DetectorKind::Qubit ? "qubit"
                                                                    : "oscillator")
                  << " include_zero_mode="
                  << (vc.cfg.field.include_zero_mode ? "true" : "false") << "\n";
        return 0;
    }

    if (c_point->parsed()) {
        std::vector<ResultRow> rows{run_point(vc)};
        warn_perturbative(rows);
        emit(rows, fmt, out_path);
        return rows_exit_code(rows);
    }

    if (c_sweep->parsed()) {
        SweepSpec spec;
        spec.base = vc.cfg;
        if (axis == "L")
            spec.axis = SweepAxis::CavityL;
        else if (axis == "gamma")
            spec.axis = SweepAxis::Gamma;
        else if (axis == "T")
            spec.axis = SweepAxis::SwitchT;
        else if (axis == "separation")
            spec.axis = SweepAxis::Separation;
        else {
            std::cerr << "config error: unknown axis '" << axis << "'\n";
            return 1;
        }
        spec.lo = lo;
        spec.hi = hi;
        spec.count = count;
        if (spacing.empty())
            spec.spacing = spec.axis == SweepAxis::Gamma ? Spacing::Log : Spacing::Linear;
        else if (spacing == "linear")
            spec.spacing = Spacing::Linear;
        else if (spacing == "log")
            spec.spacing = Spacing::Log;
        else {
            std::cerr << "config error: unknown spacing '" << spacing << "'\n";
            return 1;
        }
        std::vector<ResultRow> rows;
        try {
            rows = run_sweep(spec);
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        }
        warn_perturbative(rows);
        emit(rows, fmt, out_path);
        return rows_exit_code(rows);
    }

    if (c_oracle->parsed()) {
        std::vector<Deviation> devs;
        try {
            devs = run_oracle(vc);
        } catch (const std::exception& e) {
            std::cerr << "oracle failed: " << e.what() << "\n";
            return 2;
        }
        double worst = 0.0;
        for (const Deviation& d : devs) {
            std::cout << d.name << ": rel_deviation=" << d.rel << "\n";
            worst = std::max(worst, d.rel);
        }
        std::cout << "max_deviation=" << worst << (worst <= oracle_tol ? " ok" : " FAIL")
                  << "\n";
        return worst <= oracle_tol ? 0 : 2;
    }
    return 0;
}
