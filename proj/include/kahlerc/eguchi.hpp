#pragma once

#include <cmath>
#include <limits>

#include "kahlerc/bilag.hpp"
#include "kahlerc/calculus.hpp"
#include "kahlerc/report.hpp"
#include "kahlerc/tensor.hpp"

// The hyper-Kaehler structure on the cotangent bundle of CP^1 in the
// holomorphic coordinates (z, u), u dz being the covector: radial Kaehler
// potential phi = y(r) with r = 4 u ubar (1 + z zbar)^2, where y solves
//   8 r^2 y' y'' + 8 r (y')^2 = 1,
// and the full tensor set assembled from the second partials of phi. The
// frame reuses the complexification machinery with u in the w-slot.

namespace kahlerc {

struct CotangentPoint {
    cplx z;
    cplx u;

    ChartPoint chart() const { return ChartPoint(z, u); }

    bool finite() const { return chart().finite(); }

    real r() const {
        const real a2 = real(1) + std::norm(z);
        return real(4) * std::norm(u) * a2 * a2;
    }
};

// arcoth(x) = (1/2) ln((x+1)/(x-1)); +infinity at the x -> 1+ limit
inline real arcoth(real x) {
    if (x <= real(1) + 1e-12L) return std::numeric_limits<real>::infinity();
    return real(0.5L) * std::log((x + 1) / (x - 1));
}

// closed-form radial potential with integration constant a = 1 (the value
// that restricts to the Fubini-Study metric on the zero section); the
// potential itself is logarithmically singular at r = 0, where the limit is
// reported as infinite while the frame tensors below stay regular
struct EHPotential {
    real r = 0;
    real y = 0;
    real yp = 0;
    real ypp = 0;
    static constexpr real a = 1;

    // residual of 8 r^2 y' y'' + 8 r (y')^2 = 1, as stated
    real ode_residual() const {
        return std::abs(8 * r * r * yp * ypp + 8 * r * yp * yp - 1);
    }
};

inline EHPotential eh_potential(real r) {
    if (r < 0) throw argument_error("eh_potential: r >= 0 required");
    EHPotential p;
    p.r = r;
    if (r == 0) {
        p.y = -std::numeric_limits<real>::infinity();
        p.yp = std::numeric_limits<real>::infinity();
        p.ypp = -std::numeric_limits<real>::infinity();
        return p;
    }
    const real s = std::sqrt(1 + r);
    p.y = s - arcoth(s);
    p.yp = s / (2 * r);
    p.ypp = -(r + 2) / (4 * r * r * s);  // d/dr of sqrt(1+r)/(2r)
    return p;
}

// second partials of phi in closed form
struct EHPartials {
    cplx zz;  // phi_{z zbar}
    cplx uz;  // phi_{u zbar}
    cplx zu;  // phi_{z ubar}
    cplx uu;  // phi_{u ubar}
};

inline EHPartials eh_partials(const CotangentPoint& p) {
    if (!p.finite()) throw argument_error("eh_partials: non-finite point");
    const cplx z = p.z, u = p.u;
    const cplx zb = std::conj(z), ub = std::conj(u);
    const cplx a2 = cplx(1) + z * zb;
    const real r = p.r();
    const real s = std::sqrt(1 + r);
    EHPartials f;
    f.zz = (cplx(1) + cplx(r) * a2) / (cplx(s) * a2 * a2);
    f.uz = cplx(2) * ub * z * a2 / cplx(s);
    f.zu = cplx(2) * u * zb * a2 / cplx(s);
    f.uu = a2 * a2 / cplx(s);
    return f;
}

inline real monge_ampere_residual(const CotangentPoint& p) {
    const EHPartials f = eh_partials(p);
    return std::abs(f.zz * f.uu - f.uz * f.zu - cplx(1));
}

struct EHFrame {
    TensorValue g, I, J, K;
    TensorValue omegaI, omegaJ, omegaK;
    EHPartials phi;
};

inline EHFrame eh_frame(const CotangentPoint& p) {
    const EHPartials f = eh_partials(p);
    EHFrame frame;
    frame.phi = f;

    // g = phi_zz dz dzbar + phi_uz du dzbar + phi_zu dz dubar + phi_uu du dubar
    TensorValue g = TensorValue::bilinear(1);
    auto add_sym = [&g](std::size_t a, std::size_t b, const cplx& c) {
        g.at({a, b}) += c * cplx(0.5L);
        g.at({b, a}) += c * cplx(0.5L);
    };
    add_sym(0, 2, f.zz);
    add_sym(1, 2, f.uz);
    add_sym(0, 3, f.zu);
    add_sym(1, 3, f.uu);
    frame.g = g;

    // I is the standard complex structure of the holomorphic chart (z, u)
    frame.I = ambient_complex_structure(1);

    TensorValue J = TensorValue::endomorphism(1);
    J.at({2, 0}) = f.zu;
    J.at({3, 0}) = -f.zz;
    J.at({0, 2}) = f.uz;
    J.at({1, 2}) = -f.zz;
    J.at({2, 1}) = f.uu;
    J.at({3, 1}) = -f.uz;
    J.at({0, 3}) = f.uu;
    J.at({1, 3}) = -f.zu;
    frame.J = J;

    TensorValue K = TensorValue::endomorphism(1);
    K.at({2, 0}) = cplx(0, -1) * f.zu;
    K.at({3, 0}) = cplx(0, 1) * f.zz;
    K.at({0, 2}) = cplx(0, 1) * f.uz;
    K.at({1, 2}) = cplx(0, -1) * f.zz;
    K.at({2, 1}) = cplx(0, -1) * f.uu;
    K.at({3, 1}) = cplx(0, 1) * f.uz;
    K.at({0, 3}) = cplx(0, 1) * f.uu;
    K.at({1, 3}) = cplx(0, -1) * f.zu;
    frame.K = K;

    // omega_I = (i/2)(phi_zz dz^dzbar + phi_uz du^dzbar + phi_zu dz^dubar + phi_uu du^dubar)
    TensorValue wI = TensorValue::form(1, 2);
    auto add_wedge = [](TensorValue& t, std::size_t a, std::size_t b, const cplx& c) {
        t.at({a, b}) += c;
        t.at({b, a}) -= c;
    };
    add_wedge(wI, 0, 2, cplx(0, 0.5L) * f.zz);
    add_wedge(wI, 1, 2, cplx(0, 0.5L) * f.uz);
    add_wedge(wI, 0, 3, cplx(0, 0.5L) * f.zu);
    add_wedge(wI, 1, 3, cplx(0, 0.5L) * f.uu);
    frame.omegaI = wI;

    TensorValue wJ = TensorValue::form(1, 2);
    add_wedge(wJ, 0, 1, cplx(-0.5L));
    add_wedge(wJ, 2, 3, cplx(-0.5L));
    frame.omegaJ = wJ;

    TensorValue wK = TensorValue::form(1, 2);
    add_wedge(wK, 0, 1, cplx(0, 0.5L));
    add_wedge(wK, 2, 3, cplx(0, -0.5L));
    frame.omegaK = wK;

    return frame;
}

// phi as a jet-differentiable scalar (away from u = 0); the independent
// route to the second partials
inline Jet eh_potential_jet(const CotangentPoint& p) {
    const JetFrame v = p.chart().frame();
    const Jet a2 = cplx(1) + v.z() * v.zbar();
    const Jet r = cplx(4) * v.w() * v.wbar() * a2 * a2;
    const Jet s = sqrt(cplx(1) + r);
    // y = s - arcoth(s) = s - (1/2) log((s+1)/(s-1))
    const Jet y = s - cplx(0.5L) * log((s + cplx(1)) / (s - cplx(1)));
    return y;
}

// field versions of the three Kaehler forms, for closedness checks
inline FormField eh_omega_i_field() {
    FormField w = TensorField::form_field(1, 2);
    auto partial = [](int which) {
        return [which](const JetFrame& v) {
            const Jet a2 = cplx(1) + v.z() * v.zbar();
            const Jet r = cplx(4) * v.w() * v.wbar() * a2 * a2;
            const Jet s = sqrt(cplx(1) + r);
            switch (which) {
                case 0: return (cplx(1) + r * a2) / (s * a2 * a2);        // phi_zz
                case 1: return cplx(2) * v.wbar() * v.z() * a2 / s;       // phi_uz
                case 2: return cplx(2) * v.w() * v.zbar() * a2 / s;       // phi_zu
                default: return a2 * a2 / s;                              // phi_uu
            }
        };
    };
    auto scaled = [](ScalarFn f, cplx c) {
        return [f, c](const JetFrame& v) { return c * f(v); };
    };
    const cplx half_i = cplx(0, 0.5L);
    w.set({0, 2}, scaled(partial(0), half_i));
    w.set({2, 0}, scaled(partial(0), -half_i));
    w.set({1, 2}, scaled(partial(1), half_i));
    w.set({2, 1}, scaled(partial(1), -half_i));
    w.set({0, 3}, scaled(partial(2), half_i));
    w.set({3, 0}, scaled(partial(2), -half_i));
    w.set({1, 3}, scaled(partial(3), half_i));
    w.set({3, 1}, scaled(partial(3), -half_i));
    return w;
}

inline FormField eh_omega_j_field() {
    FormField w = TensorField::form_field(1, 2);
    w.set({0, 1}, scalar_constant(cplx(-0.5L)));
    w.set({1, 0}, scalar_constant(cplx(0.5L)));
    w.set({2, 3}, scalar_constant(cplx(-0.5L)));
    w.set({3, 2}, scalar_constant(cplx(0.5L)));
    return w;
}

inline FormField eh_omega_k_field() {
    FormField w = TensorField::form_field(1, 2);
    w.set({0, 1}, scalar_constant(cplx(0, 0.5L)));
    w.set({1, 0}, scalar_constant(cplx(0, -0.5L)));
    w.set({2, 3}, scalar_constant(cplx(0, -0.5L)));
    w.set({3, 2}, scalar_constant(cplx(0, 0.5L)));
    return w;
}

// || omega ^ conj(omega) - 2 omega_I ^ omega_I ||, omega = omega_J + i omega_K
inline real eh_wedge_identity_defect(const CotangentPoint& p) {
    const EHFrame f = eh_frame(p);
    const TensorValue omega = f.omegaJ + f.omegaK * cplx(0, 1);
    const TensorValue lhs = wedge(omega, omega.conjugate());
    const TensorValue rhs = wedge(f.omegaI, f.omegaI) * cplx(2);
    return lhs.max_abs_diff(rhs);
}

// pullback of g under fiber rotation (z, u) -> (z, e^{i theta} u) vs g
inline real eh_u1_invariance_defect(const CotangentPoint& p, real theta) {
    const cplx phase(std::cos(theta), std::sin(theta));
    const CotangentPoint q{p.z, phase * p.u};
    const TensorValue g_at_q = eh_frame(q).g;
    const TensorValue g_at_p = eh_frame(p).g;
    const cplx scale[4] = {cplx(1), phase, cplx(1), std::conj(phase)};
    TensorValue pulled = TensorValue::bilinear(1);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            pulled.at({a, b}) = g_at_q.at({a, b}) * scale[a] * scale[b];
    return pulled.max_abs_diff(g_at_p);
}

// restriction of g to the zero section vs the Fubini-Study metric
inline real eh_zero_section_defect(const cplx& z) {
    const EHFrame f = eh_frame(CotangentPoint{z, cplx(0)});
    const cplx a2 = cplx(1) + z * std::conj(z);
    const cplx fs = cplx(1) / (a2 * a2);
    real d = std::abs(f.g.at({0, 2}) + f.g.at({2, 0}) - fs);
    d = std::max(d, std::abs(f.g.at({1, 2})));
    d = std::max(d, std::abs(f.g.at({0, 3})));
    return d;
}

// consistency of the printed partials with jets of phi; requires u != 0
inline real eh_jet_consistency_defect(const CotangentPoint& p) {
    if (std::abs(p.u) < 1e-3L)
        throw argument_error("eh_jet_consistency_defect: keep away from the zero section");
    const Jet phi = eh_potential_jet(p);
    const EHPartials f = eh_partials(p);
    real d = 0;
    d = std::max(d, std::abs(phi.hess(0, 2) - f.zz));
    d = std::max(d, std::abs(phi.hess(1, 2) - f.uz));
    d = std::max(d, std::abs(phi.hess(0, 3) - f.zu));
    d = std::max(d, std::abs(phi.hess(1, 3) - f.uu));
    return d;
}

}  // namespace kahlerc
