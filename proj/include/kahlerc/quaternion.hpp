#pragma once

#include <optional>
#include <vector>

#include "kahlerc/bilag.hpp"
#include "kahlerc/calculus.hpp"
#include "kahlerc/flows.hpp"
#include "kahlerc/models.hpp"
#include "kahlerc/report.hpp"

// The almost hyper-Hermitian structure on the complexification: the unique
// linear hyper-Hermitian frame at diagonal points, extended by parallel
// transport along the vertical foliation, together with the bicomplex pieces
// (H, F, G) that complete it to an almost biquaternionic Hermitian package.
//
// Linear construction at a diagonal point, in holomorphic components (p, q):
// the tangent space splits as T + J T with T the diagonal copy; writing
// I(x + Jy) = I0 x - J I0 y and g(x + Jy, x' + Jy') = g0(x, x') + g0(y, y')
// gives I(p, q) = (i conj(q), -i conj(p)) and
// g = (1/2) h_{jk} (dz^j dzbar^k + dwbar^j dw^k).

namespace kahlerc {

struct QuaternionFrame {
    TensorValue g, I, J, K;
    TensorValue omegaI, omegaJ, omegaK;
    TensorValue H, F, G;
    std::optional<cplx> eta;  // CP^1 reporting scalar ((1+|z|^2)/(1+zw))^2
};

// omega_A = g(A., .)
inline TensorValue kahler_form_of(const TensorValue& g, const TensorValue& A) {
    const std::size_t n = g.n();
    const std::size_t dim = 4 * n;
    TensorValue w = TensorValue::form(n, 2);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
            cplx s(0);
            for (std::size_t c = 0; c < dim; ++c) s += A.at({c, a}) * g.at({c, b});
            w.at({a, b}) = s;
        }
    return w;
}

inline void derive_frame_members(QuaternionFrame& f) {
    f.omegaI = kahler_form_of(f.g, f.I);
    f.omegaJ = kahler_form_of(f.g, f.J);
    f.omegaK = kahler_form_of(f.g, f.K);
    const std::size_t n = f.g.n();
    f.H = extended_complex_structure(n);
    // F = HJ with the ambient J; the frame's transported J equals it up to
    // integrator noise, which relation_report tracks separately
    f.F = compose(f.H, ambient_complex_structure(n));
    f.G = compose(f.H, f.K);
}

// unique admissible linear hyper-Hermitian frame at the diagonal point
// (z0, conj z0)
inline QuaternionFrame diagonal_hh_frame(const KahlerModel& m, const std::vector<cplx>& z0) {
    const ChartPoint p = diagonal_point(z0);
    m.require_domain(p);
    const std::size_t n = m.n;
    const auto h = m.metric_values(p);

    QuaternionFrame f;
    f.J = ambient_complex_structure(n);

    f.I = TensorValue::endomorphism(n);
    for (std::size_t k = 0; k < n; ++k) {
        f.I.at({k, 3 * n + k}) = cplx(0, 1);        // dwbar -> i dz
        f.I.at({2 * n + k, n + k}) = cplx(0, -1);   // dw -> -i dzbar
        f.I.at({n + k, 2 * n + k}) = cplx(0, -1);   // dzbar -> -i dw
        f.I.at({3 * n + k, k}) = cplx(0, 1);        // dz -> i dwbar
    }
    f.K = compose(f.I, f.J);

    f.g = TensorValue::bilinear(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx q = h[j * n + k] * cplx(0.25L);
            f.g.at({j, 2 * n + k}) += q;
            f.g.at({2 * n + k, j}) += q;
            f.g.at({3 * n + j, n + k}) += q;
            f.g.at({n + k, 3 * n + j}) += q;
        }

    derive_frame_members(f);
    if (m.name == "cp1") f.eta = cplx(1);
    return f;
}

// transport of the diagonal frame along an arbitrary leaf path whose start
// is a diagonal point
inline QuaternionFrame hh_frame_along(const KahlerModel& m, const PathSpec& path) {
    const ChartPoint start = path.start();
    if (!start.diagonal(1e-9L))
        throw argument_error("hh_frame_along: path must start on the diagonal");
    QuaternionFrame f = diagonal_hh_frame(m, start.z);
    const TransportMap map = transport_map(m, path);
    f.g = map.apply(f.g);
    f.I = map.apply(f.I);
    f.J = map.apply(f.J);
    f.K = map.apply(f.K);
    derive_frame_members(f);
    if (m.name == "cp1") {
        const ChartPoint p = path.end();
        const cplx num = cplx(1) + p.z[0] * std::conj(p.z[0]);
        const cplx den = cplx(1) + p.z[0] * p.w[0];
        f.eta = (num / den) * (num / den);
    }
    return f;
}

// frame at p, transported from (z, conj z) along the straight vertical
// segment
inline QuaternionFrame hh_frame(const KahlerModel& m, const ChartPoint& p, int steps = 2000) {
    m.require_domain(p);
    const ChartPoint start = diagonal_point(p.z);
    m.require_domain(start);
    return hh_frame_along(m, straight_path(start, p, steps));
}

// ---- CP^1 closed forms ----------------------------------------------------

inline cplx cp1_eta(const ChartPoint& p) {
    const cplx num = cplx(1) + p.z[0] * std::conj(p.z[0]);
    const cplx den = cplx(1) + p.z[0] * p.w[0];
    if (std::abs(den) < kDomainGuard) throw domain_error("cp1 eta: 1 + zw = 0");
    return (num / den) * (num / den);
}

// printed almost hyper-Hermitian tensors on CP^1 x conj(CP^1)
inline QuaternionFrame cp1_hh_closed_form(const ChartPoint& p) {
    const cplx z = p.z[0], w = p.w[0];
    const cplx zb = std::conj(z);
    const cplx eta = cp1_eta(p);
    const cplx etab = std::conj(eta);
    const cplx a2 = cplx(1) + z * zb;          // 1 + |z|^2
    const cplx czw = cplx(1) + z * w;          // 1 + zw
    const cplx czwb = std::conj(czw);

    QuaternionFrame f;
    f.J = ambient_complex_structure(1);

    f.I = TensorValue::endomorphism(1);
    f.I.at({0, 3}) = cplx(0, 1) * etab;   // i etabar dwbar (x) d/dz
    f.I.at({2, 1}) = cplx(0, -1) * eta;   // -i eta dw (x) d/dzbar
    f.I.at({1, 2}) = cplx(0, -1) / eta;   // -(i/eta) dzbar (x) d/dw
    f.I.at({3, 0}) = cplx(0, 1) / etab;   // (i/etabar) dz (x) d/dwbar

    f.K = TensorValue::endomorphism(1);
    f.K.at({0, 3}) = etab;
    f.K.at({2, 1}) = eta;
    f.K.at({1, 2}) = cplx(-1) / eta;
    f.K.at({3, 0}) = cplx(-1) / etab;

    const cplx gz = cplx(0.5L) / (a2 * a2);
    const cplx gw = cplx(0.5L) * (a2 * a2) / (czw * czw * czwb * czwb);
    f.g = TensorValue::bilinear(1);
    f.g.at({0, 2}) = gz * cplx(0.5L);
    f.g.at({2, 0}) = gz * cplx(0.5L);
    f.g.at({1, 3}) = gw * cplx(0.5L);
    f.g.at({3, 1}) = gw * cplx(0.5L);

    derive_frame_members(f);
    f.eta = eta;
    return f;
}

// omega_J as a field, for exterior differentiation:
// omega_J = (i/4) [ dz ^ dzbar / (1+|z|^2)^2
//                 + (1+|z|^2)^2 / |1+zw|^4 dw ^ dwbar ]
inline FormField cp1_omega_j_field() {
    FormField w = TensorField::form_field(1, 2);
    auto cz = [](const JetFrame& v) {
        const Jet a2 = cplx(1) + v.z() * v.zbar();
        return cplx(0, 0.25L) * pow_int(a2, -2);
    };
    auto cw = [](const JetFrame& v) {
        const Jet a2 = cplx(1) + v.z() * v.zbar();
        const Jet czw = cplx(1) + v.z() * v.w();
        const Jet czwb = cplx(1) + v.zbar() * v.wbar();
        return cplx(0, 0.25L) * pow_int(a2, 2) * pow_int(czw, -2) * pow_int(czwb, -2);
    };
    w.set({0, 2}, cz);
    w.set({2, 0}, [cz](const JetFrame& v) { return -cz(v); });
    w.set({1, 3}, cw);
    w.set({3, 1}, [cw](const JetFrame& v) { return -cw(v); });
    return w;
}

inline real cp1_frame_defect(const QuaternionFrame& f, const ChartPoint& p) {
    const QuaternionFrame c = cp1_hh_closed_form(p);
    real d = 0;
    d = std::max(d, f.g.max_abs_diff(c.g));
    d = std::max(d, f.I.max_abs_diff(c.I));
    d = std::max(d, f.J.max_abs_diff(c.J));
    d = std::max(d, f.K.max_abs_diff(c.K));
    d = std::max(d, f.omegaI.max_abs_diff(c.omegaI));
    d = std::max(d, f.omegaJ.max_abs_diff(c.omegaJ));
    d = std::max(d, f.omegaK.max_abs_diff(c.omegaK));
    return d;
}

// finite-difference estimate of ||d omega_J||_inf for models without printed
// closed forms; each displaced evaluation re-runs the vertical transport
inline real dwj_estimate(const KahlerModel& m, const ChartPoint& p, real h = 1e-4L,
                         int steps = 500) {
    const std::size_t n = m.n;
    const std::size_t dim = 4 * n;

    // d omega_J / d(real coordinate r), as full coefficient arrays
    std::vector<TensorValue> real_partial;
    real_partial.reserve(dim);
    auto displaced = [&](std::size_t r, real delta) {
        ChartPoint q = p;
        const std::size_t j = r % n;
        switch (r / n) {
            case 0: q.z[j] += delta; break;
            case 1: q.z[j] += cplx(0, delta); break;
            case 2: q.w[j] += delta; break;
            default: q.w[j] += cplx(0, delta); break;
        }
        return hh_frame(m, q, steps).omegaJ;
    };
    for (std::size_t r = 0; r < dim; ++r) {
        TensorValue d = displaced(r, h) - displaced(r, -h);
        d *= cplx(1 / (2 * h));
        real_partial.push_back(std::move(d));
    }

    // Wirtinger combinations in frame order (z.., w.., zbar.., wbar..)
    auto wirtinger = [&](std::size_t a) {
        const std::size_t j = a % n;
        const bool conj = a >= 2 * n;
        const bool w_block = (a / n) % 2 == 1;
        const std::size_t re = (w_block ? 2 * n : 0) + j;
        const std::size_t im = re + n;
        TensorValue out = real_partial[re] * cplx(0.5L);
        out += real_partial[im] * (conj ? cplx(0, 0.5L) : cplx(0, -0.5L));
        return out;
    };
    std::vector<TensorValue> partial;
    partial.reserve(dim);
    for (std::size_t a = 0; a < dim; ++a) partial.push_back(wirtinger(a));

    real norm = 0;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t c = 0; c < dim; ++c) {
                const cplx v = partial[a].at({b, c}) - partial[b].at({a, c}) +
                               partial[c].at({a, b});
                norm = std::max(norm, std::abs(v));
            }
    return norm;
}

// ---- relation report -------------------------------------------------------

namespace detail {

inline real endo_defect(const TensorValue& x, const TensorValue& y) {
    return x.max_abs_diff(y);
}

inline real orthogonality_defect(const TensorValue& g, const TensorValue& A) {
    const std::size_t n = g.n();
    const std::size_t dim = 4 * n;
    TensorValue gA = TensorValue::bilinear(n);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
            cplx s(0);
            for (std::size_t c = 0; c < dim; ++c)
                for (std::size_t d = 0; d < dim; ++d)
                    s += g.at({c, d}) * A.at({c, a}) * A.at({d, b});
            gA.at({a, b}) = s;
        }
    return gA.max_abs_diff(g);
}

}  // namespace detail

// every frame relation plus closedness data; restriction checks included
// when the point is diagonal. with_dwj_estimate enables the (costly)
// finite-difference ||d omega_J|| figure for models without closed forms
inline ValidationReport relation_report(const KahlerModel& m, const ChartPoint& p,
                                        const QuaternionFrame& f,
                                        const BiLagrangianPackage& pkg,
                                        bool with_dwj_estimate = true) {
    ValidationReport rep;
    const std::size_t n = m.n;
    const TensorValue id = TensorValue::identity(n);

    real quat = 0;
    quat = std::max(quat, detail::endo_defect(compose(f.I, f.I), id * cplx(-1)));
    quat = std::max(quat, detail::endo_defect(compose(f.J, f.J), id * cplx(-1)));
    quat = std::max(quat, detail::endo_defect(compose(f.K, f.K), id * cplx(-1)));
    quat = std::max(quat, detail::endo_defect(compose(f.I, f.J), f.K));
    quat = std::max(quat, detail::endo_defect(compose(f.J, f.I), f.K * cplx(-1)));
    rep.add(CheckRecord::at_most("quaternionic-relations",
                                 "I^2 = J^2 = K^2 = -1, IJ = -JI = K", quat, 1e-10L));

    real biq = 0;
    biq = std::max(biq, detail::endo_defect(compose(f.H, f.H), id * cplx(-1)));
    biq = std::max(biq, detail::endo_defect(compose(f.H, f.I), compose(f.I, f.H)));
    biq = std::max(biq, detail::endo_defect(compose(f.H, f.J), compose(f.J, f.H)));
    biq = std::max(biq, detail::endo_defect(compose(f.H, f.K), compose(f.K, f.H)));
    rep.add(CheckRecord::at_most("biquaternionic-relations",
                                 "H^2 = -1, H central among I, J, K", biq, 1e-10L));

    real para = 0;
    para = std::max(para, detail::endo_defect(compose(f.F, f.F), id));
    para = std::max(para, detail::endo_defect(compose(f.G, f.G), id));
    para = std::max(para, detail::endo_defect(compose(f.I, f.F), f.G));
    para = std::max(para, detail::endo_defect(compose(f.F, f.I), f.G * cplx(-1)));
    rep.add(CheckRecord::at_most("para-quaternionic-relations",
                                 "F^2 = G^2 = 1, IF = -FI = G", para, 1e-10L));

    real ortho = 0;
    for (const TensorValue* A : {&f.H, &f.I, &f.J, &f.K})
        ortho = std::max(ortho, detail::orthogonality_defect(f.g, *A));
    rep.add(CheckRecord::at_most("g-orthogonality", "g(A., A.) = g for A in {H, I, J, K}",
                                 ortho, 1e-10L));

    const TensorValue admissible = f.omegaI - f.omegaK * cplx(0, 1);
    rep.add(CheckRecord::at_most("admissibility", "omega_I - i omega_K = omega0^c",
                                 admissible.max_abs_diff(pkg.omega), 1e-9L));
    rep.add(CheckRecord::at_most("admissibility-J", "J is the ambient complex structure",
                                 f.J.max_abs_diff(ambient_complex_structure(n)), 1e-9L));

    rep.add(CheckRecord::at_most("frame-foliations-agree", "F = HJ matches bi-Lagrangian F",
                                 f.F.max_abs_diff(pkg.F), 0));

    // omega_I and omega_K are the real and -imaginary parts of the closed
    // holomorphic symplectic form, so their exterior derivatives vanish
    const FormField omega_field = complex_symplectic_field(m);
    const FormField re_field = form_real_part(omega_field);
    const FormField im_field = form_imag_part(omega_field);
    const real dwi = exterior_derivative(re_field, p).norm_inf();
    const real dwk = exterior_derivative(im_field, p).norm_inf();
    rep.add(CheckRecord::at_most("domega-I", "d omega_I = 0", dwi, 1e-8L));
    rep.add(CheckRecord::at_most("domega-K", "d omega_K = 0", dwk, 1e-8L));
    rep.add(CheckRecord::at_most("omega-I-from-omega1", "omega_I = Re omega0^c",
                                 f.omegaI.max_abs_diff(pkg.omega1), 1e-9L));

    if (m.name == "cp1") {
        const real dwj = exterior_derivative(cp1_omega_j_field(), p).norm_inf();
        if (p.diagonal(1e-9L))
            // the structure restricts to the Kaehler structure on the
            // diagonal, so d omega_J vanishes there
            rep.add(CheckRecord::at_most("domega-J-on-diagonal", "d omega_J = 0 at w = conj(z)",
                                         dwj, 1e-10L));
        else
            rep.add(CheckRecord::witness("domega-J-nonzero", "||d omega_J|| > 0 (not integrable)",
                                         dwj, 1e-2L));
    } else if (m.name.rfind("flat", 0) == 0) {
        const FormField constant_wj = TensorField::constant(n, f.omegaJ);
        const real dwj = exterior_derivative(constant_wj, p).norm_inf();
        rep.add(CheckRecord::at_most("domega-J-flat", "d omega_J = 0 (hyper-Kaehler case)",
                                     dwj, 1e-12L));
    } else if (with_dwj_estimate) {
        // informational figure; no pinned bound away from the closed forms
        rep.add(CheckRecord::witness("domega-J-norm", "||d omega_J|| (finite-difference)",
                                     dwj_estimate(m, p), 0));
    }

    if (p.diagonal(1e-9L)) {
        const DiagonalKahlerData d = diagonal_kahler_data(m, p);
        const real g_res = diagonal_pullback(f.g, n).max_abs_diff(d.g0);
        const real w_res = diagonal_pullback(f.omegaI, n).max_abs_diff(d.omega0);

        // I restricts to I0: I(df v) = df(I0 v) on the (complexified)
        // diagonal tangent, with df(d/dz_j) = d/dz_j + d/dwbar_j and df
        // extended complex-linearly
        real i_res = 0;
        for (std::size_t j = 0; j < n; ++j) {
            TensorValue u = TensorValue::vector(n);
            u.at({j}) = cplx(1);
            u.at({3 * n + j}) = cplx(1);
            i_res = std::max(i_res, apply(f.I, u).max_abs_diff(u * cplx(0, 1)));
            TensorValue v = TensorValue::vector(n);
            v.at({2 * n + j}) = cplx(1);
            v.at({n + j}) = cplx(1);  // df(d/dzbar_j) = d/dzbar_j + d/dw_j
            i_res = std::max(i_res, apply(f.I, v).max_abs_diff(v * cplx(0, -1)));
        }
        rep.add(CheckRecord::at_most("diagonal-restriction-g", "g pulls back to g0", g_res,
                                     1e-10L));
        rep.add(CheckRecord::at_most("diagonal-restriction-omegaI", "omega_I pulls back to omega0",
                                     w_res, 1e-10L));
        rep.add(CheckRecord::at_most("diagonal-restriction-I", "I restricts to I0", i_res,
                                     1e-10L));
    }

    return rep;
}

}  // namespace kahlerc
