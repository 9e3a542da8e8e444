#pragma once

#include <cmath>
#include <complex>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "zmharvest/assembly.hpp"
#include "zmharvest/types.hpp"

namespace zmharvest {

// Single-point evaluation and parameter sweeps. All reported quantities are
// dimensionless: lengths and times in units of 1/Omega and matrix elements
// divided by the squared coupling (zero coupling reports plain zeros). Rows
// are produced in axis order and formatting is fixed, so identical inputs
// yield byte-identical output.

enum class SweepAxis { CavityL, Gamma, SwitchT, Separation };
enum class Spacing { Linear, Log };
enum class OutputFormat { Csv, Json };

struct SweepSpec {
    SweepAxis axis = SweepAxis::CavityL;
    double lo = 1.0, hi = 10.0;
    int count = 10;
    Spacing spacing = Spacing::Linear;
    HarvestConfig base;
};

struct ResultRow {
    double l_omega = 0.0, gamma = 0.0, t_omega = 0.0, sep_omega = 0.0;
    double l_aa_zm = 0.0, l_aa_osc = 0.0, l_aa_total = 0.0;
    double re_m_zm = 0.0, im_m_zm = 0.0, re_m_osc = 0.0, im_m_osc = 0.0;
    double abs_m_total = 0.0;
    double negativity_with_zm = 0.0, negativity_without_zm = 0.0;
    int n_max_used = 0;
    std::string error_flag = "ok";
    bool perturbative_warning = false;
};

namespace detail {

inline std::string classify_error(const std::exception& e) {
    if (dynamic_cast<const CutoffTooSmall*>(&e)) return "cutoff_too_small";
    if (dynamic_cast<const MaxSubdivisionsExceeded*>(&e)) return "max_subdivisions";
    if (dynamic_cast<const NonConvergent*>(&e)) return "non_convergent";
    if (dynamic_cast<const DivergentElement*>(&e)) return "divergent_element";
    if (dynamic_cast<const AsymmetricDetectors*>(&e)) return "asymmetric_detectors";
    if (dynamic_cast<const UnsupportedDimension*>(&e)) return "unsupported_dimension";
    if (dynamic_cast<const UnsupportedState*>(&e)) return "unsupported_state";
    if (dynamic_cast<const SpecialFunctionOverflow*>(&e)) return "overflow";
    if (dynamic_cast<const EigenSolverFailure*>(&e)) return "eigensolver_failure";
    return "error";
}

} // namespace detail

inline ResultRow run_point(const ValidatedConfig& vc) {
    const HarvestConfig& c = vc.cfg;
    const double omega = c.detector_a.effective_gap();
    ResultRow row;
    row.l_omega = c.field.circumference * omega;
    // Without the zero mode the state parameter is not part of the model, so
    // rows do not echo it; gamma-independence then holds byte for byte.
    row.gamma = c.field.include_zero_mode ? c.zero_mode.gamma() : 0.0;
    row.t_omega = c.detector_a.switching_width * omega;
    row.sep_omega = vc.separation * omega;
    try {
        MatrixElements e = assemble_elements(vc);
        const double lam2 = e.lambda_a * e.lambda_b;
        row.n_max_used = e.modes_used;
        if (lam2 == 0.0) {
            // Everything vanishes with the coupling; normalized columns are
            // reported as plain zeros.
            return row;
        }
        row.l_aa_zm = e.l_aa.zm.real();
        row.l_aa_osc = e.l_aa.osc.real();
        row.l_aa_total = e.l_aa.total().real();
        row.re_m_zm = e.m.zm.real();
        row.im_m_zm = e.m.zm.imag();
        row.re_m_osc = e.m.osc.real();
        row.im_m_osc = e.m.osc.imag();
        row.abs_m_total = std::abs(e.m.total());
        row.negativity_with_zm = negativity_leading_order(e) / lam2;
        MatrixElements no_zm = e;
        no_zm.l_aa.zm = no_zm.l_bb.zm = no_zm.l_ab.zm = no_zm.m.zm = {};
        no_zm.k_a.zm = no_zm.k_b.zm = {};
        row.negativity_without_zm = negativity_leading_order(no_zm) / lam2;
        row.perturbative_warning = detail::excitation_warning(e);
    } catch (const std::exception& ex) {
        row.error_flag = detail::classify_error(ex);
        const double nan = std::nan("");
        row.l_aa_zm = row.l_aa_osc = row.l_aa_total = nan;
        row.re_m_zm = row.im_m_zm = row.re_m_osc = row.im_m_osc = nan;
        row.abs_m_total = nan;
        row.negativity_with_zm = row.negativity_without_zm = nan;
    }
    return row;
}

inline std::vector<double> sweep_grid(double lo, double hi, int count, Spacing spacing) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        g[i] = spacing == Spacing::Linear
                   ? lo + f * (hi - lo)
                   : lo * std::pow(hi / lo, f);
    }
    return g;
}

inline HarvestConfig config_at(const SweepSpec& spec, double x) {
    HarvestConfig c = spec.base;
    switch (spec.axis) {
    case SweepAxis::CavityL: c.field.circumference = x; break;
    case SweepAxis::Gamma: c.zero_mode = ZeroModeState::saturated(x); break;
    case SweepAxis::SwitchT:
        c.detector_a.switching_width = x;
        c.detector_b.switching_width = x;
        break;
    case SweepAxis::Separation:
        c.separation = SeparationSpec{SeparationSpec::Mode::Absolute, x};
        break;
    }
    return c;
}

// Evaluates the grid; points are independent and run concurrently, rows are
// assembled in axis order. A point whose configuration fails validation is
// recorded with error_flag = "config_error".
inline std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
    if (!(spec.lo < spec.hi) || spec.count < 2)
        throw std::invalid_argument("run_sweep: need lo < hi and count >= 2");
    if (spec.spacing == Spacing::Log && !(spec.lo > 0.0))
        throw std::invalid_argument("run_sweep: log spacing needs lo > 0");
    const std::vector<double> grid = sweep_grid(spec.lo, spec.hi, spec.count, spec.spacing);

    auto eval = [&spec](double x) -> ResultRow {
        const HarvestConfig c = config_at(spec, x);
        ValidationResult v = validate(c);
        if (!v.ok()) {
            ResultRow row;
            row.l_omega = c.field.circumference * c.detector_a.effective_gap();
            row.gamma = c.field.include_zero_mode ? c.zero_mode.gamma() : 0.0;
            row.t_omega = c.detector_a.switching_width * c.detector_a.effective_gap();
            row.sep_omega = std::nan("");
            row.error_flag = "config_error";
            return row;
        }
        return run_point(*v.value);
    };

    std::vector<ResultRow> rows(grid.size());
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t begin = 0; begin < grid.size(); begin += workers) {
        const std::size_t end = std::min(grid.size(), begin + workers);
        std::vector<std::future<ResultRow>> fut;
        for (std::size_t i = begin; i < end; ++i)
            fut.push_back(std::async(std::launch::async, eval, grid[i]));
        for (std::size_t i = begin; i < end; ++i) rows[i] = fut[i - begin].get();
    }
    return rows;
}

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

} // namespace detail

inline const char* csv_header() {
    return "L_omega,gamma,T_omega,sep_omega,L_AA_zm,L_AA_osc,L_AA_total,"
           "re_M_zm,im_M_zm,re_M_osc,im_M_osc,abs_M_total,"
           "negativity_with_zm,negativity_without_zm,n_max_used,error_flag";
}

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << csv_header() << "\n";
    for (const ResultRow& r : rows) {
        using detail::format_double;
        os << format_double(r.l_omega) << ',' << format_double(r.gamma) << ','
           << format_double(r.t_omega) << ',' << format_double(r.sep_omega) << ','
           << format_double(r.l_aa_zm) << ',' << format_double(r.l_aa_osc) << ','
           << format_double(r.l_aa_total) << ',' << format_double(r.re_m_zm) << ','
           << format_double(r.im_m_zm) << ',' << format_double(r.re_m_osc) << ','
           << format_double(r.im_m_osc) << ',' << format_double(r.abs_m_total) << ','
           << format_double(r.negativity_with_zm) << ','
           << format_double(r.negativity_without_zm) << ',' << r.n_max_used << ','
           << r.error_flag << "\n";
    }
}

inline void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
    // NaN columns of failed points are emitted as null.
    auto format_double = [](double v) {
        return std::isnan(v) ? std::string("null") : detail::format_double(v);
    };
    os << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        os << "  {\"L_omega\": " << format_double(r.l_omega)
           << ", \"gamma\": " << format_double(r.gamma)
           << ", \"T_omega\": " << format_double(r.t_omega)
           << ", \"sep_omega\": " << format_double(r.sep_omega)
           << ", \"L_AA_zm\": " << format_double(r.l_aa_zm)
           << ", \"L_AA_osc\": " << format_double(r.l_aa_osc)
           << ", \"L_AA_total\": " << format_double(r.l_aa_total)
           << ", \"re_M_zm\": " << format_double(r.re_m_zm)
           << ", \"im_M_zm\": " << format_double(r.im_m_zm)
           << ", \"re_M_osc\": " << format_double(r.re_m_osc)
           << ", \"im_M_osc\": " << format_double(r.im_m_osc)
           << ", \"abs_M_total\": " << format_double(r.abs_m_total)
           << ", \"negativity_with_zm\": " << format_double(r.negativity_with_zm)
           << ", \"negativity_without_zm\": " << format_double(r.negativity_without_zm)
           << ", \"n_max_used\": " << r.n_max_used
           << ", \"error_flag\": \"" << r.error_flag << "\"}"
           << (i + 1 < rows.size() ? ",\n" : "\n");
    }
    os << "]\n";
}

} // namespace zmharvest
