#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "zmharvest/errors.hpp"

namespace zmharvest {

// Deterministic adaptive quadrature over rectangles and the two triangles cut
// by the diagonal t' = t, plus Richardson extrapolation in a regulator.
// Subdivision always splits the worst cell (ties resolved by insertion
// order), so results are bit-stable across runs.

struct QuadratureResult {
    std::complex<double> value{};
    double error = 0.0;          // conservative estimate, |K15 - G7| based
    std::size_t evaluations = 0;
};

enum class DomainShape { Rectangle, LowerTriangle, UpperTriangle };

// Box [t_lo, t_hi] x [s_lo, s_hi]; the triangle shapes keep the part below
// (s <= t) or above (s >= t) the diagonal of that box.
struct IntegrationDomain {
    double t_lo, t_hi;
    double s_lo, s_hi;
    DomainShape shape = DomainShape::Rectangle;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss-Legendre (QUADPACK constants).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Rule15 {
    std::array<double, 15> node{};   // ascending nodes on [-1, 1]
    std::array<double, 15> wk{};     // Kronrod weights
    std::array<double, 15> wg{};     // Gauss weights (zero on Kronrod-only nodes)
    constexpr Rule15() {
        for (int i = 0; i < 7; ++i) {
            node[i] = -kXgk[i];
            node[14 - i] = kXgk[i];
            wk[i] = wk[14 - i] = kWgk[i];
        }
        node[7] = 0.0;
        wk[7] = kWgk[7];
        // Gauss nodes sit at the odd Kronrod indices.
        for (int j = 0; j < 3; ++j) {
            wg[1 + 2 * j] = kWg[j];
            wg[13 - 2 * j] = kWg[j];
        }
        wg[7] = kWg[3];
    }
};

inline constexpr Rule15 kRule{};

struct Cell {
    double cx, cy, hx, hy;
    std::complex<double> value{};
    double error = 0.0;
};

template <typename F>
void evaluate_cell(F&& f, Cell& c) {
    std::array<std::array<std::complex<double>, 15>, 15> fv;
    for (int i = 0; i < 15; ++i) {
        const double x = c.cx + c.hx * kRule.node[i];
        for (int j = 0; j < 15; ++j)
            fv[i][j] = f(x, c.cy + c.hy * kRule.node[j]);
    }
    std::complex<double> ik{}, ig{};
    for (int i = 0; i < 15; ++i) {
        std::complex<double> rowk{}, rowg{};
        for (int j = 0; j < 15; ++j) {
            rowk += kRule.wk[j] * fv[i][j];
            rowg += kRule.wg[j] * fv[i][j];
        }
        ik += kRule.wk[i] * rowk;
        ig += kRule.wg[i] * rowg;
    }
    const double area = c.hx * c.hy;
    c.value = ik * area;
    c.error = std::abs(ik - ig) * area;
}

} // namespace detail

// Adaptive 2D integration. The error estimate is the summed |K - G|
// difference of the cells, which in practice bounds the true error.
template <typename F>
QuadratureResult integrate_2d(F&& f, const IntegrationDomain& dom, double rel_tol,
                              int max_cells = 40000, double abs_floor = 0.0) {
    if (!(rel_tol > 0.0) || dom.t_hi <= dom.t_lo || dom.s_hi <= dom.s_lo)
        throw std::invalid_argument("integrate_2d: degenerate domain or tolerance");

    // Triangles map onto a rectangle in (t, u) with u the fractional position
    // between the fixed edge and the diagonal.
    auto call = [&](double t, double v) -> std::complex<double> {
        switch (dom.shape) {
        case DomainShape::Rectangle:
            return f(t, v);
        case DomainShape::LowerTriangle: {
            const double span = t - dom.s_lo;
            return f(t, dom.s_lo + span * v) * span;
        }
        case DomainShape::UpperTriangle: {
            const double span = dom.s_hi - t;
            return f(t, t + span * v) * span;
        }
        }
        return {};
    };
    const double v_lo = dom.shape == DomainShape::Rectangle ? dom.s_lo : 0.0;
    const double v_hi = dom.shape == DomainShape::Rectangle ? dom.s_hi : 1.0;

    std::vector<detail::Cell> cells;
    cells.reserve(256);
    std::size_t evals = 0;
    const int init = 4; // 4x4 seed grid so oscillations are seen early
    const double dx = (dom.t_hi - dom.t_lo) / init, dy = (v_hi - v_lo) / init;
    for (int i = 0; i < init; ++i)
        for (int j = 0; j < init; ++j) {
            detail::Cell c{dom.t_lo + (i + 0.5) * dx, v_lo + (j + 0.5) * dy,
                           0.5 * dx, 0.5 * dy};
            detail::evaluate_cell(call, c);
            evals += 225;
            cells.push_back(c);
        }

    auto total = [&cells] {
        std::complex<double> v{};
        double e = 0.0;
        for (const auto& c : cells) {
            v += c.value;
            e += c.error;
        }
        return std::pair{v, e};
    };

    while (true) {
        auto [value, err] = total();
        if (err <= std::max(rel_tol * std::abs(value), abs_floor))
            return {value, err, evals};
        if (static_cast<int>(cells.size()) + 3 > max_cells)
            throw MaxSubdivisionsExceeded("integrate_2d: cell budget exhausted");
        std::size_t worst = 0;
        for (std::size_t i = 1; i < cells.size(); ++i)
            if (cells[i].error > cells[worst].error) worst = i;
        const detail::Cell parent = cells[worst];
        std::array<detail::Cell, 4> kids;
        int k = 0;
        for (int si = -1; si <= 1; si += 2)
            for (int sj = -1; sj <= 1; sj += 2) {
                kids[k] = {parent.cx + si * 0.5 * parent.hx,
                           parent.cy + sj * 0.5 * parent.hy, 0.5 * parent.hx,
                           0.5 * parent.hy};
                detail::evaluate_cell(call, kids[k]);
                evals += 225;
                ++k;
            }
        cells[worst] = kids[0];
        cells.insert(cells.end(), kids.begin() + 1, kids.end());
    }
}

// Adaptive 1D integration with the same rule and subdivision policy.
template <typename F>
QuadratureResult integrate_1d(F&& f, double a, double b, double rel_tol,
                              int max_panels = 8000, double abs_floor = 0.0) {
    if (!(rel_tol > 0.0) || b <= a)
        throw std::invalid_argument("integrate_1d: degenerate interval or tolerance");
    struct Panel {
        double c, h;
        std::complex<double> value;
        double error;
    };
    auto eval = [&](Panel& p) {
        std::complex<double> ik{}, ig{};
        for (int i = 0; i < 15; ++i) {
            const std::complex<double> fi = f(p.c + p.h * detail::kRule.node[i]);
            ik += detail::kRule.wk[i] * fi;
            ig += detail::kRule.wg[i] * fi;
        }
        p.value = ik * p.h;
        p.error = std::abs(ik - ig) * p.h;
    };
    std::vector<Panel> panels;
    for (int i = 0; i < 4; ++i) {
        Panel p{a + (i + 0.5) * (b - a) / 4, (b - a) / 8, {}, 0.0};
        eval(p);
        panels.push_back(p);
    }
    std::size_t evals = 60;
    while (true) {
        std::complex<double> value{};
        double err = 0.0;
        for (const auto& p : panels) {
            value += p.value;
            err += p.error;
        }
        if (err <= std::max(rel_tol * std::abs(value), abs_floor))
            return {value, err, evals};
        if (static_cast<int>(panels.size()) + 1 > max_panels)
            throw MaxSubdivisionsExceeded("integrate_1d: panel budget exhausted");
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].error > panels[worst].error) worst = i;
        Panel lo{panels[worst].c - 0.5 * panels[worst].h, 0.5 * panels[worst].h, {}, 0.0};
        Panel hi{panels[worst].c + 0.5 * panels[worst].h, 0.5 * panels[worst].h, {}, 0.0};
        eval(lo);
        eval(hi);
        evals += 30;
        panels[worst] = lo;
        panels.push_back(hi);
    }
}

struct RichardsonResult {
    std::complex<double> value{};
    double diagnostic = 0.0; // magnitude of the last extrapolation update
};

// Polynomial extrapolation of samples (eps_i, f_i) to eps -> 0 (Neville).
// Samples must come at geometrically decreasing regulator values.
inline RichardsonResult
richardson_extrapolate(const std::vector<std::pair<double, std::complex<double>>>& samples) {
    const std::size_t n = samples.size();
    if (n < 3)
        throw std::invalid_argument("richardson_extrapolate: need at least 3 samples");
    std::vector<std::complex<double>> cur(n);
    std::vector<double> eps(n);
    for (std::size_t i = 0; i < n; ++i) {
        eps[i] = samples[i].first;
        cur[i] = samples[i].second;
    }
    std::vector<std::complex<double>> diag;
    diag.push_back(cur[0]);
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i + k < n; ++i)
            cur[i] = (eps[i] * cur[i + 1] - eps[i + k] * cur[i]) / (eps[i] - eps[i + k]);
        diag.push_back(cur[0]);
    }
    const double last = std::abs(diag[n - 1] - diag[n - 2]);
    const double prev = std::abs(diag[n - 2] - diag[n - 3]);
    const double scale = std::abs(diag[n - 1]);
    if (last > 2.0 * prev && last > 1e-13 * scale)
        throw NonConvergent("richardson_extrapolate: extrapolants diverge");
    return {diag[n - 1], last};
}

} // namespace zmharvest
