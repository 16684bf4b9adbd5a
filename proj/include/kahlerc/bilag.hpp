#pragma once

#include <vector>

#include "kahlerc/calculus.hpp"
#include "kahlerc/models.hpp"

// The canonical complex bi-Lagrangian package on a complexified Kaehler
// chart: the extended symplectic form, the commuting complex structures H
// and J with para-complex product F = HJ, the holomorphic metric
// g = -i g0^c = omega(F., .), and real/imaginary parts of omega and g.
//
// Sign convention: F = HJ acts as +1 on the vertical foliation {z = const}
// (spanned by the d/dw^j) and -1 on the horizontal one.

namespace kahlerc {

// omega0^c = (i/2) h^c_{jk} dz^j ^ dw^k  (a (2,0)-form, no conjugate block)
inline TensorValue complex_symplectic_form(const KahlerModel& m, const ChartPoint& p) {
    const auto h = m.metric_values(p);
    const std::size_t n = m.n;
    TensorValue omega = TensorValue::form(n, 2);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx c = cplx(0, 0.5L) * h[j * n + k];
            omega.at({j, n + k}) += c;
            omega.at({n + k, j}) -= c;
        }
    return omega;
}

// extended complex structure H = I0^c, ambient structure J, and F = HJ;
// constant coefficients in the adapted coordinates
inline TensorValue extended_complex_structure(std::size_t n) {
    TensorValue h = TensorValue::endomorphism(n);
    for (std::size_t j = 0; j < n; ++j) {
        h.at({j, j}) = cplx(0, 1);
        h.at({n + j, n + j}) = cplx(0, -1);
        h.at({2 * n + j, 2 * n + j}) = cplx(0, -1);
        h.at({3 * n + j, 3 * n + j}) = cplx(0, 1);
    }
    return h;
}

inline TensorValue ambient_complex_structure(std::size_t n) {
    TensorValue j = TensorValue::endomorphism(n);
    for (std::size_t a = 0; a < 2 * n; ++a) {
        j.at({a, a}) = cplx(0, 1);
        j.at({2 * n + a, 2 * n + a}) = cplx(0, -1);
    }
    return j;
}

inline TensorValue paracomplex_structure(std::size_t n) {
    return compose(extended_complex_structure(n), ambient_complex_structure(n));
}

// g(u, v) = omega(F u, v); equals -i g0^c with g0^c = h^c_{jk} dz^j dw^k
inline TensorValue bilagrangian_metric(const KahlerModel& m, const ChartPoint& p) {
    const TensorValue omega = complex_symplectic_form(m, p);
    const TensorValue f = paracomplex_structure(m.n);
    const std::size_t dim = 4 * m.n;
    TensorValue g = TensorValue::bilinear(m.n);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
            cplx s(0);
            for (std::size_t c = 0; c < dim; ++c) s += f.at({c, a}) * omega.at({c, b});
            g.at({a, b}) = s;
        }
    return g;
}

struct BiLagrangianPackage {
    TensorValue omega;   // omega0^c
    TensorValue H;       // I0^c
    TensorValue J;       // ambient complex structure
    TensorValue F;       // HJ
    TensorValue g;       // -i g0^c
    TensorValue omega1;  // Re omega
    TensorValue omega2;  // Im omega
    TensorValue g1;      // Re g
    TensorValue g2;      // Im g
};

inline BiLagrangianPackage bilagrangian_package(const KahlerModel& m, const ChartPoint& p) {
    BiLagrangianPackage pkg;
    pkg.omega = complex_symplectic_form(m, p);
    pkg.H = extended_complex_structure(m.n);
    pkg.J = ambient_complex_structure(m.n);
    pkg.F = compose(pkg.H, pkg.J);
    pkg.g = bilagrangian_metric(m, p);
    pkg.omega1 = pkg.omega.real_part();
    pkg.omega2 = pkg.omega.imag_part();
    pkg.g1 = pkg.g.real_part();
    pkg.g2 = pkg.g.imag_part();
    return pkg;
}

// field versions, for exterior and covariant derivatives

inline FormField complex_symplectic_field(const KahlerModel& m) {
    const std::size_t n = m.n;
    FormField omega = TensorField::form_field(n, 2);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            auto coeff = [hfn = m.h_c, j, k, n](const JetFrame& v) {
                return cplx(0, 0.5L) * hfn(v)[j * n + k];
            };
            omega.set({j, n + k}, coeff);
            omega.set({n + k, j},
                      [coeff](const JetFrame& v) { return -coeff(v); });
        }
    return omega;
}

inline TensorField bilagrangian_metric_field(const KahlerModel& m) {
    const std::size_t n = m.n;
    TensorField g(n, {Slot::Cov, Slot::Cov});
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            auto coeff = [hfn = m.h_c, j, k, n](const JetFrame& v) {
                return cplx(0, -0.5L) * hfn(v)[j * n + k];
            };
            g.set({j, n + k}, coeff);
            g.set({n + k, j}, coeff);
        }
    return g;
}

// real part of a holomorphic-coefficient form field (conjugate block added)
inline FormField form_real_part(const FormField& omega) {
    const std::size_t n = omega.n();
    FormField out(n, omega.valence());
    std::vector<std::size_t> idx(omega.rank(), 0);
    TensorValue pattern(n, omega.valence());
    do {
        std::vector<std::size_t> cid(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) cid[k] = conj_index(idx[k], n);
        const auto& f = omega.fn(idx);
        const auto& fc = omega.fn(cid);
        if (!f && !fc) continue;
        out.set(idx, [f, fc, n](const JetFrame& v) {
            Jet a = f ? f(v) : v.constant(cplx(0));
            Jet b = fc ? conj_jet(fc(v), n) : v.constant(cplx(0));
            return (a + b) * cplx(0.5L);
        });
    } while (pattern.advance(idx));
    return out;
}

inline FormField form_imag_part(const FormField& omega) {
    const std::size_t n = omega.n();
    FormField out(n, omega.valence());
    std::vector<std::size_t> idx(omega.rank(), 0);
    TensorValue pattern(n, omega.valence());
    do {
        std::vector<std::size_t> cid(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) cid[k] = conj_index(idx[k], n);
        const auto& f = omega.fn(idx);
        const auto& fc = omega.fn(cid);
        if (!f && !fc) continue;
        out.set(idx, [f, fc, n](const JetFrame& v) {
            Jet a = f ? f(v) : v.constant(cplx(0));
            Jet b = fc ? conj_jet(fc(v), n) : v.constant(cplx(0));
            return (a - b) * cplx(0, -0.5L);
        });
    } while (pattern.advance(idx));
    return out;
}

// real/imaginary parts evaluated at a point, as in the package
struct RealParts {
    TensorValue omega1, omega2, g1, g2;
};

inline RealParts real_parts(const BiLagrangianPackage& pkg) {
    return RealParts{pkg.omega1, pkg.omega2, pkg.g1, pkg.g2};
}

// Gram matrix of a real bilinear tensor in the real coordinate frame
// (x, y, s, t) = (Re z, Im z, Re w, Im w); used for signature counts.
inline std::vector<real> real_gram_matrix(const TensorValue& g) {
    const std::size_t n = g.n();
    const std::size_t dim = 4 * n;
    std::vector<TensorValue> basis;
    basis.reserve(dim);
    for (std::size_t j = 0; j < n; ++j) {
        TensorValue dx = TensorValue::vector(n), dy = TensorValue::vector(n);
        dx.at({j}) = cplx(1);
        dx.at({2 * n + j}) = cplx(1);
        dy.at({j}) = cplx(0, 1);
        dy.at({2 * n + j}) = cplx(0, -1);
        basis.push_back(dx);
        basis.push_back(dy);
    }
    for (std::size_t j = 0; j < n; ++j) {
        TensorValue ds = TensorValue::vector(n), dt = TensorValue::vector(n);
        ds.at({n + j}) = cplx(1);
        ds.at({3 * n + j}) = cplx(1);
        dt.at({n + j}) = cplx(0, 1);
        dt.at({3 * n + j}) = cplx(0, -1);
        basis.push_back(ds);
        basis.push_back(dt);
    }
    std::vector<real> gram(dim * dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) gram[a * dim + b] = g(basis[a], basis[b]).real();
    return gram;
}

// signature (positives, negatives) of a real symmetric Gram matrix
inline std::pair<std::size_t, std::size_t> signature(const std::vector<real>& gram,
                                                     std::size_t dim, real threshold = 1e-8L) {
    const auto ev = symmetric_eigenvalues(gram, dim);
    std::size_t pos = 0, neg = 0;
    for (const real e : ev) {
        if (e > threshold) ++pos;
        if (e < -threshold) ++neg;
    }
    return {pos, neg};
}

// pull a tensor on the complexification back through the diagonal embedding
// z -> (z, conj z); the result lives on the 2n-frame (dz^j, dzbar^j) of the
// underlying manifold, encoded as a TensorValue with n' = n and w-slots unused
inline TensorValue diagonal_pullback(const TensorValue& t, std::size_t n) {
    for (const Slot s : t.valence())
        if (s != Slot::Cov) throw argument_error("diagonal_pullback: covariant tensors only");
    // differential of the embedding: dz_j -> dz_j + dwbar_j, dzbar_j -> dzbar_j + dw_j
    const std::size_t dim = 4 * n;
    std::vector<TensorValue> push(dim, TensorValue::vector(n));
    for (std::size_t j = 0; j < n; ++j) {
        TensorValue a = TensorValue::vector(n);
        a.at({j}) = cplx(1);
        a.at({3 * n + j}) = cplx(1);
        push[j] = a;
        TensorValue b = TensorValue::vector(n);
        b.at({2 * n + j}) = cplx(1);
        b.at({n + j}) = cplx(1);
        push[2 * n + j] = b;
    }
    TensorValue out(n, t.valence());
    std::vector<std::size_t> idx(t.rank(), 0);
    do {
        bool relevant = true;
        for (const std::size_t i : idx)
            if (!(i < n || (i >= 2 * n && i < 3 * n))) relevant = false;
        if (relevant) {
            std::vector<TensorValue> vecs;
            vecs.reserve(idx.size());
            for (const std::size_t i : idx) vecs.push_back(push[i]);
            out.at(idx) = t(vecs);
        }
    } while (out.advance(idx));
    return out;
}

// Kaehler data of the underlying manifold at a diagonal point, in the same
// 2n-frame encoding as diagonal_pullback
struct DiagonalKahlerData {
    TensorValue omega0;  // -(1/2i) h_{j kbar} dz^j ^ dzbar^k
    TensorValue g0;      // h_{j kbar} dz^j dzbar^k
    TensorValue I0;      // i on dz, -i on dzbar
};

inline DiagonalKahlerData diagonal_kahler_data(const KahlerModel& m, const ChartPoint& p) {
    if (!p.diagonal(1e-9L)) throw argument_error("diagonal_kahler_data: point not diagonal");
    const auto h = m.metric_values(p);
    const std::size_t n = m.n;
    DiagonalKahlerData d{TensorValue::form(n, 2), TensorValue::bilinear(n),
                         TensorValue::endomorphism(n)};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx c = cplx(0, 0.5L) * h[j * n + k];
            d.omega0.at({j, 2 * n + k}) += c;
            d.omega0.at({2 * n + k, j}) -= c;
            d.g0.at({j, 2 * n + k}) += cplx(0.5L) * h[j * n + k];
            d.g0.at({2 * n + k, j}) += cplx(0.5L) * h[j * n + k];
        }
    for (std::size_t j = 0; j < n; ++j) {
        d.I0.at({j, j}) = cplx(0, 1);
        d.I0.at({2 * n + j, 2 * n + j}) = cplx(0, -1);
    }
    return d;
}

}  // namespace kahlerc
