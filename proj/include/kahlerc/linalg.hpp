#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "kahlerc/jet.hpp"
#include "kahlerc/numeric.hpp"

// Small dense linear algebra. Everything here operates on matrices of size a
// few times the model dimension, so plain Gaussian elimination and Jacobi
// sweeps are entirely adequate.

namespace kahlerc {

// Solve A x = b for complex square A by partial-pivot elimination.
inline std::vector<cplx> solve(std::vector<cplx> a, std::vector<cplx> b, std::size_t n,
                               real pivot_tol = 1e-10L) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (std::abs(a[piv * n + k]) < pivot_tol)
            throw domain_error("linear solve: pivot below threshold (degenerate form)");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a[i * n + k] / a[k * n + k];
            for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t i = n; i-- > 0;) {
        cplx s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
        x[i] = s / a[i * n + i];
    }
    return x;
}

inline std::vector<cplx> inverse(const std::vector<cplx>& a, std::size_t n) {
    std::vector<cplx> inv(n * n);
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<cplx> e(n, cplx(0));
        e[col] = cplx(1);
        const auto x = solve(a, e, n);
        for (std::size_t row = 0; row < n; ++row) inv[row * n + col] = x[row];
    }
    return inv;
}

// Gauss-Jordan inverse with Jet entries; used to carry first derivatives of
// the inverse metric into the Christoffel symbols.
inline std::vector<Jet> inverse_jets(std::vector<Jet> a, std::size_t n) {
    if (a.empty()) return {};
    const std::size_t m = a[0].nvars();
    std::vector<Jet> inv(n * n, Jet::constant(m, cplx(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = Jet::constant(m, cplx(1));
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k].value()) > std::abs(a[piv * n + k].value())) piv = i;
        if (std::abs(a[piv * n + k].value()) < 1e-10L)
            throw domain_error("matrix inverse: singular metric");
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a[k * n + j], a[piv * n + j]);
                std::swap(inv[k * n + j], inv[piv * n + j]);
            }
        const Jet d = a[k * n + k].reciprocal();
        for (std::size_t j = 0; j < n; ++j) {
            a[k * n + j] = a[k * n + j] * d;
            inv[k * n + j] = inv[k * n + j] * d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const Jet f = a[i * n + k];
            for (std::size_t j = 0; j < n; ++j) {
                a[i * n + j] -= f * a[k * n + j];
                inv[i * n + j] -= f * inv[k * n + j];
            }
        }
    }
    return inv;
}

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
inline std::vector<real> symmetric_eigenvalues(std::vector<real> a, std::size_t n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        real off = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (off < 1e-30L) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p * n + q]) < 1e-18L) continue;
                const real theta = (a[q * n + q] - a[p * n + p]) / (2 * a[p * n + q]);
                const real t = (theta >= 0 ? 1 : -1) /
                               (std::abs(theta) + std::sqrt(theta * theta + 1));
                const real c = 1 / std::sqrt(t * t + 1);
                const real s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const real akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const real apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<real> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i * n + i];
    return ev;
}

// Eigenvalues of a complex Hermitian matrix via the real symmetric embedding
// [[Re, -Im], [Im, Re]]; each eigenvalue appears twice in the embedding.
inline std::vector<real> hermitian_eigenvalues(const std::vector<cplx>& h, std::size_t n) {
    std::vector<real> a(4 * n * n, 0);
    const std::size_t m = 2 * n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i * m + j] = h[i * n + j].real();
            a[(n + i) * m + (n + j)] = h[i * n + j].real();
            a[i * m + (n + j)] = -h[i * n + j].imag();
            a[(n + i) * m + j] = h[i * n + j].imag();
        }
    auto ev = symmetric_eigenvalues(std::move(a), m);
    std::sort(ev.begin(), ev.end());
    std::vector<real> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = ev[2 * i];
    return out;
}

// 2x2 complex matrices; enough for the leafwise homography algebra.
struct Mat2 {
    std::array<cplx, 4> a{};  // row-major

    static Mat2 identity() { return {{cplx(1), cplx(0), cplx(0), cplx(1)}}; }

    cplx det() const { return a[0] * a[3] - a[1] * a[2]; }

    Mat2 inverse() const {
        const cplx d = det();
        if (std::abs(d) < 1e-14L) throw domain_error("Mat2: singular");
        return {{a[3] / d, -a[1] / d, -a[2] / d, a[0] / d}};
    }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {{x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
                 x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]}};
    }

    // action as projective transformation on the coordinate w
    cplx moebius(const cplx& w) const {
        const cplx den = a[2] * w + a[3];
        if (std::abs(den) < 1e-14L) throw domain_error("Mat2: moebius image at infinity");
        return (a[0] * w + a[1]) / den;
    }

    real max_abs_diff(const Mat2& o) const {
        real d = 0;
        for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - o.a[i]));
        return d;
    }
};

}  // namespace kahlerc
