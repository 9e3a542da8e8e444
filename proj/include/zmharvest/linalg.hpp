#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "zmharvest/errors.hpp"

namespace zmharvest {

// Dense complex matrix just large enough for the 4x4/6x6 detector states.
class ComplexMatrix {
public:
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    int size() const { return n_; }
    std::complex<double>& operator()(int i, int j) { return a_[i * n_ + j]; }
    const std::complex<double>& operator()(int i, int j) const { return a_[i * n_ + j]; }

    bool hermitian(double tol = 1e-12) const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol)
                    return false;
        return true;
    }

    std::complex<double> trace() const {
        std::complex<double> t{};
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    int n_;
    std::vector<std::complex<double>> a_;
};

// Partial transpose over the second subsystem of a bipartite state whose
// basis vectors carry occupation labels (n_A, n_B) per index. The basis may
// be a truncation of the full tensor product: source positions outside it
// hold no weight and read as zero, which is exact as long as no nonzero
// entry of the input is transposed out of the spanned subspace (checked).
inline ComplexMatrix
partial_transpose_b(const ComplexMatrix& rho,
                    const std::vector<std::pair<int, int>>& labels) {
    const int n = rho.size();
    auto find = [&labels, n](int a, int b) {
        for (int k = 0; k < n; ++k)
            if (labels[k].first == a && labels[k].second == b) return k;
        return -1;
    };
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            if (rho(k, l) == std::complex<double>(0.0, 0.0)) continue;
            if (find(labels[k].first, labels[l].second) < 0 ||
                find(labels[l].first, labels[k].second) < 0)
                throw EigenSolverFailure(
                    "partial transpose leaves the truncated basis");
        }
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // (a,b; a',b') <- (a,b'; a',b)
            const int si = find(labels[i].first, labels[j].second);
            const int sj = find(labels[j].first, labels[i].second);
            out(i, j) = (si < 0 || sj < 0) ? 0.0 : rho(si, sj);
        }
    return out;
}

// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
// ascending. Quadratic convergence makes a handful of sweeps plenty for the
// sizes used here; rotations run until the off-diagonal mass underflows so
// that O(lambda^4)-sized eigenvalues keep full relative accuracy.
inline std::vector<double> hermitian_eigenvalues(ComplexMatrix a, int max_sweeps = 60) {
    const int n = a.size();
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    if (scale == 0.0) return std::vector<double>(n, 0.0);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off == 0.0) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const std::complex<double> h = a(p, q);
                const double ah = std::abs(h);
                if (ah == 0.0) continue;
                const std::complex<double> phase = h / ah;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * ah);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const std::complex<double> sig = t * c * phase;
                // columns: B = A G with G = [[c, sig], [-conj(sig), c]]
                for (int r = 0; r < n; ++r) {
                    const std::complex<double> arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp - std::conj(sig) * arq;
                    a(r, q) = sig * arp + c * arq;
                }
                // rows: A' = G^H B
                for (int r = 0; r < n; ++r) {
                    const std::complex<double> apr = a(p, r), aqr = a(q, r);
                    a(p, r) = c * apr - sig * aqr;
                    a(q, r) = std::conj(sig) * apr + c * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = {a(p, p).real(), 0.0};
                a(q, q) = {a(q, q).real(), 0.0};
            }
    }
    double off = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off > 1e-12 * scale)
        throw EigenSolverFailure("jacobi rotations did not converge");
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace zmharvest
