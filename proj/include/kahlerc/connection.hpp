#pragma once

#include <cmath>
#include <vector>

#include "kahlerc/bilag.hpp"
#include "kahlerc/calculus.hpp"
#include "kahlerc/linalg.hpp"
#include "kahlerc/models.hpp"
#include "kahlerc/report.hpp"

// The holomorphic Levi-Civita connection of the bi-Lagrangian metric, from
// the Koszul formula in holomorphic coordinates:
//   Gamma^k_{ab} = 1/2 g^{kl} (d_a g_{bl} + d_b g_{al} - d_l g_{ab})
// over the 2n holomorphic indices (z^1..z^n, w^1..w^n). The connection is
// holomorphic, so mixed blocks vanish and the anti-holomorphic block is the
// conjugate of the holomorphic one.

namespace kahlerc {

namespace detail {

// jet representing d_dir f to first order (Hessian not propagated)
inline Jet derivative_jet(const Jet& f, std::size_t dir) {
    Jet r(f.nvars(), f.grad(dir));
    for (std::size_t c = 0; c < f.nvars(); ++c) r.grad(c) = f.hess(dir, c);
    return r;
}

}  // namespace detail

class ConnectionTable {
  public:
    ConnectionTable(std::size_t n, std::vector<Jet> gamma) : n_(n), gamma_(std::move(gamma)) {}

    std::size_t n() const { return n_; }
    std::size_t holo_dim() const { return 2 * n_; }

    const Jet& jet(std::size_t k, std::size_t a, std::size_t b) const {
        const std::size_t h = holo_dim();
        return gamma_[(k * h + a) * h + b];
    }

    cplx value(std::size_t k, std::size_t a, std::size_t b) const {
        return jet(k, a, b).value();
    }

    // d_dir Gamma^k_{ab} over holomorphic directions
    cplx derivative(std::size_t k, std::size_t a, std::size_t b, std::size_t dir) const {
        return jet(k, a, b).grad(dir);
    }

    // full-frame coefficient: conjugate block implied, mixed blocks zero
    cplx full(std::size_t a, std::size_t b, std::size_t c) const {
        const std::size_t h = holo_dim();
        const bool ah = a < h, bh = b < h, ch = c < h;
        if (ah && bh && ch) return value(a, b, c);
        if (!ah && !bh && !ch) return std::conj(value(a - h, b - h, c - h));
        return cplx(0);
    }

    real max_symmetry_defect() const {
        real d = 0;
        const std::size_t h = holo_dim();
        for (std::size_t k = 0; k < h; ++k)
            for (std::size_t a = 0; a < h; ++a)
                for (std::size_t b = 0; b < h; ++b)
                    d = std::max(d, std::abs(value(k, a, b) - value(k, b, a)));
        return d;
    }

  private:
    std::size_t n_;
    std::vector<Jet> gamma_;
};

// Christoffel symbols of the bi-Lagrangian metric at p, with first
// derivatives (so curvature needs no finite differencing).
inline ConnectionTable christoffel(const KahlerModel& m, const ChartPoint& p) {
    m.require_domain(p);
    const std::size_t n = m.n;
    const std::size_t h = 2 * n;
    const JetFrame frame = p.frame();
    const auto hj = m.h_c(frame);

    // metric over holomorphic indices: g_{j, n+k} = -(i/2) h_{jk}
    std::vector<Jet> g(h * h, frame.constant(cplx(0)));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const Jet v = cplx(0, -0.5L) * hj[j * n + k];
            g[j * h + (n + k)] = v;
            g[(n + k) * h + j] = v;
        }
    const auto ginv = inverse_jets(g, h);

    std::vector<Jet> gamma(h * h * h, frame.constant(cplx(0)));
    for (std::size_t a = 0; a < h; ++a)
        for (std::size_t b = a; b < h; ++b) {
            for (std::size_t k = 0; k < h; ++k) {
                Jet s = frame.constant(cplx(0));
                for (std::size_t l = 0; l < h; ++l) {
                    Jet term = detail::derivative_jet(g[b * h + l], a) +
                               detail::derivative_jet(g[a * h + l], b) -
                               detail::derivative_jet(g[a * h + b], l);
                    s += ginv[k * h + l] * term;
                }
                s *= cplx(0.5L);
                gamma[(k * h + a) * h + b] = s;
                gamma[(k * h + b) * h + a] = s;
            }
        }
    return ConnectionTable(n, std::move(gamma));
}

// covariant derivative of a tensor field in one frame direction:
// d_b T with one Gamma correction per slot
inline TensorValue covariant_derivative(const KahlerModel& m, const TensorField& T,
                                        std::size_t dir, const ChartPoint& p) {
    const std::size_t n = m.n;
    if (T.n() != n) throw argument_error("covariant_derivative: dimension mismatch");
    const std::size_t dim = 4 * n;
    if (dir >= dim) throw argument_error("covariant_derivative: bad direction");
    const ConnectionTable gamma = christoffel(m, p);
    const auto jets = T.jets(p);

    TensorValue out(n, T.valence());
    std::vector<std::size_t> idx(T.rank(), 0);
    do {
        cplx s = jets[out.flat_index(idx)].grad(dir);
        for (std::size_t slot = 0; slot < T.rank(); ++slot) {
            for (std::size_t mm = 0; mm < dim; ++mm) {
                std::vector<std::size_t> jdx = idx;
                jdx[slot] = mm;
                const cplx tv = jets[out.flat_index(jdx)].value();
                if (tv == cplx(0)) continue;
                if (T.valence()[slot] == Slot::Contra)
                    s += gamma.full(idx[slot], dir, mm) * tv;
                else
                    s -= gamma.full(mm, dir, idx[slot]) * tv;
            }
        }
        out.at(idx) = s;
    } while (out.advance(idx));
    return out;
}

// nabla_X Y for vector fields, evaluated pointwise
inline TensorValue covariant_derivative_vector(const KahlerModel& m, const VectorField& X,
                                               const VectorField& Y, const ChartPoint& p) {
    const std::size_t n = m.n;
    const std::size_t dim = 4 * n;
    const ConnectionTable gamma = christoffel(m, p);
    const auto xj = X.jets(p);
    const auto yj = Y.jets(p);
    TensorValue out = TensorValue::vector(n);
    for (std::size_t a = 0; a < dim; ++a) {
        cplx s(0);
        for (std::size_t b = 0; b < dim; ++b) {
            if (xj[b].value() == cplx(0)) continue;
            cplx t = yj[a].grad(b);
            for (std::size_t c = 0; c < dim; ++c) t += gamma.full(a, b, c) * yj[c].value();
            s += xj[b].value() * t;
        }
        out.at({a}) = s;
    }
    return out;
}

// curvature tensor R^l_{kab}, convention
//   R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z
inline TensorValue curvature_tensor(const KahlerModel& m, const ChartPoint& p) {
    const std::size_t n = m.n;
    const std::size_t h = 2 * n;
    const ConnectionTable gamma = christoffel(m, p);
    TensorValue R(n, {Slot::Contra, Slot::Cov, Slot::Cov, Slot::Cov});
    for (std::size_t l = 0; l < h; ++l)
        for (std::size_t k = 0; k < h; ++k)
            for (std::size_t a = 0; a < h; ++a)
                for (std::size_t b = 0; b < h; ++b) {
                    cplx s = gamma.derivative(l, b, k, a) - gamma.derivative(l, a, k, b);
                    for (std::size_t mm = 0; mm < h; ++mm)
                        s += gamma.value(l, a, mm) * gamma.value(mm, b, k) -
                             gamma.value(l, b, mm) * gamma.value(mm, a, k);
                    R.at({l, k, a, b}) = s;
                    R.at({l + h, k + h, a + h, b + h}) = std::conj(s);
                }
    return R;
}

struct CurvatureValue {
    TensorValue endo;  // R(X, Y) as an endomorphism of the tangent space

    TensorValue operator()(const TensorValue& Z) const { return apply(endo, Z); }
};

inline CurvatureValue curvature_endomorphism(const KahlerModel& m, const ChartPoint& p,
                                             const TensorValue& X, const TensorValue& Y) {
    const TensorValue R = curvature_tensor(m, p);
    const std::size_t dim = 4 * m.n;
    TensorValue endo = TensorValue::endomorphism(m.n);
    for (std::size_t l = 0; l < dim; ++l)
        for (std::size_t k = 0; k < dim; ++k) {
            cplx s(0);
            for (std::size_t a = 0; a < dim; ++a) {
                if (X.at({a}) == cplx(0)) continue;
                for (std::size_t b = 0; b < dim; ++b)
                    s += R.at({l, k, a, b}) * X.at({a}) * Y.at({b});
            }
            endo.at({l, k}) = s;
        }
    return CurvatureValue{endo};
}

// foliation tangency via the F-eigenvalue; returns +1 (vertical), -1
// (horizontal) or throws
inline int foliation_sign(const TensorValue& X, real tol = 1e-8L) {
    const std::size_t n = X.n();
    const TensorValue F = paracomplex_structure(n);
    const TensorValue FX = apply(F, X);
    const real scale = std::max(X.norm_inf(), real(1));
    if (FX.max_abs_diff(X) <= tol * scale) return +1;
    if (FX.max_abs_diff(X * cplx(-1)) <= tol * scale) return -1;
    throw argument_error("bott: field not tangent to a canonical foliation");
}

// Bott partial derivative nabla_X Y characterized by
//   X . omega(Y, Z) = omega(nabla_X Y, Z) + omega(Y, [X, Z])
// solved against the holomorphic frame basis of Z's. Fields are expected to
// have holomorphic-frame components; real fields follow by conjugation.
inline TensorValue bott_partial_derivative_generic(const FormField& omega, const VectorField& X,
                                                   const VectorField& Y, const ChartPoint& p) {
    const std::size_t n = omega.n();
    const std::size_t h = 2 * n;
    const std::size_t dim = 4 * n;
    const JetFrame frame = p.frame();
    const auto oj = omega.jets(frame);
    const auto xj = X.jets(frame);
    const auto yj = Y.jets(frame);

    auto omega_at = [&](std::size_t a, std::size_t b) -> const Jet& { return oj[a * dim + b]; };

    std::vector<cplx> A(h * h), rhs(h);
    for (std::size_t k = 0; k < h; ++k) {
        for (std::size_t j = 0; j < h; ++j) A[k * h + j] = omega_at(j, k).value();

        // s_k(p) = omega(Y, Z_k) as a function; derivative along X from jets
        Jet sk = frame.constant(cplx(0));
        for (std::size_t a = 0; a < dim; ++a) sk += omega_at(a, k) * yj[a];
        cplx xd(0);
        for (std::size_t b = 0; b < dim; ++b) xd += xj[b].value() * sk.grad(b);

        // omega(Y, [X, Z_k]) with [X, Z_k] = -d_k X
        cplx oyx(0);
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                oyx -= omega_at(a, b).value() * yj[a].value() * xj[b].grad(k);

        rhs[k] = xd - oyx;
    }
    const auto v = solve(std::move(A), std::move(rhs), h, 1e-10L);
    TensorValue out = TensorValue::vector(n);
    for (std::size_t j = 0; j < h; ++j) out.at({j}) = v[j];
    return out;
}

inline TensorValue bott_partial_derivative(const KahlerModel& m, const VectorField& X,
                                           const VectorField& Y, const ChartPoint& p) {
    m.require_domain(p);
    const int sx = foliation_sign(X.eval(p));
    const int sy = foliation_sign(Y.eval(p));
    if (sx != sy) throw argument_error("bott: X and Y tangent to different foliations");
    return bott_partial_derivative_generic(complex_symplectic_field(m), X, Y, p);
}

// canonical cotangent chart (q, p): xi = p_i dq^i, omega = dp_i ^ dq^i,
// with q in the z-slots and p in the w-slots
struct CotangentChart {
    std::size_t n;
    FormField xi;
    FormField omega;
};

inline CotangentChart cotangent_chart(std::size_t n) {
    if (n < 1) throw argument_error("cotangent_chart: n >= 1 required");
    FormField xi = TensorField::form_field(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        xi.set({i}, [i](const JetFrame& v) { return v.w(i); });
    FormField omega = TensorField::form_field(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        omega.set({n + i, i}, scalar_constant(cplx(1)));
        omega.set({i, n + i}, scalar_constant(cplx(-1)));
    }
    return CotangentChart{n, std::move(xi), std::move(omega)};
}

// Verifies omega = d xi exactly, then that the Bott derivative of random
// polynomial fiber fields equals the componentwise fiber derivative.
inline ValidationReport cotangent_canonical_check(std::size_t n, std::size_t samples,
                                                  std::uint64_t seed) {
    const CotangentChart chart = cotangent_chart(n);
    Rng rng(seed);

    real dxi_defect = 0;
    real bott_defect = 0;

    // random degree-2 polynomial in (q, p) with coefficients in the unit disk
    auto random_poly = [&rng, n]() {
        std::vector<cplx> c0 = rng.complex_vector(1, 1.0L);
        std::vector<cplx> cl = rng.complex_vector(2 * n, 1.0L);
        std::vector<cplx> cq = rng.complex_vector(4 * n * n, 1.0L);
        return [c0, cl, cq, n](const JetFrame& v) {
            Jet s = v.constant(c0[0]);
            for (std::size_t a = 0; a < 2 * n; ++a) s += cl[a] * v.var(a);
            for (std::size_t a = 0; a < 2 * n; ++a)
                for (std::size_t b = 0; b < 2 * n; ++b)
                    s += cq[a * 2 * n + b] * (v.var(a) * v.var(b));
            return s;
        };
    };

    for (std::size_t s = 0; s < samples; ++s) {
        const ChartPoint p(rng.complex_vector(n, 1.0L), rng.complex_vector(n, 1.0L));

        const TensorValue dxi = exterior_derivative(chart.xi, p);
        dxi_defect = std::max(dxi_defect, dxi.max_abs_diff(chart.omega.eval(p)));

        VectorField X = TensorField::vector_field(n);
        VectorField Y = TensorField::vector_field(n);
        std::vector<ScalarFn> a_fns, b_fns;
        for (std::size_t i = 0; i < n; ++i) {
            a_fns.push_back(random_poly());
            b_fns.push_back(random_poly());
            X.set({n + i}, a_fns.back());
            Y.set({n + i}, b_fns.back());
        }

        const TensorValue bott = bott_partial_derivative_generic(chart.omega, X, Y, p);

        // componentwise derivative in the fiber coordinates:
        // (nabla_X Y)^{p_j} = a_i db_j/dp_i
        const JetFrame frame = p.frame();
        TensorValue expected = TensorValue::vector(n);
        for (std::size_t j = 0; j < n; ++j) {
            cplx v(0);
            const Jet bj = b_fns[j](frame);
            for (std::size_t i = 0; i < n; ++i) v += a_fns[i](frame).value() * bj.grad(n + i);
            expected.at({n + j}) = v;
        }
        bott_defect = std::max(bott_defect, bott.max_abs_diff(expected));
    }

    ValidationReport rep;
    rep.add(CheckRecord::at_most("cotangent-omega-is-dxi", "omega = d(p_i dq^i)", dxi_defect, 0));
    rep.add(CheckRecord::at_most("cotangent-bott-componentwise",
                                 "Bott derivative = componentwise fiber derivative", bott_defect,
                                 1e-9L));
    return rep;
}

// CP^1 Cartan test fixture: orthonormal frame, coframe and connection form
//   E1 = alpha (d/dz + d/dw), chi^1 = (dz + dw) / (2 alpha),
//   alpha = (1+i)(1+zw)/sqrt(2)
struct CartanCoframe {
    VectorField E1, E2;
    FormField chi1, chi2, omega21;
    ScalarFn alpha;
};

inline CartanCoframe cartan_coframe_cp1() {
    const cplx c_alpha = cplx(1, 1) / std::sqrt(cplx(2));
    ScalarFn alpha = [c_alpha](const JetFrame& v) {
        return c_alpha * (cplx(1) + v.z() * v.w());
    };

    VectorField e1 = TensorField::vector_field(1);
    e1.set({0}, alpha);
    e1.set({1}, alpha);
    VectorField e2 = TensorField::vector_field(1);
    e2.set({0}, [alpha](const JetFrame& v) { return cplx(0, 1) * alpha(v); });
    e2.set({1}, [alpha](const JetFrame& v) { return cplx(0, -1) * alpha(v); });

    FormField chi1 = TensorField::form_field(1, 1);
    chi1.set({0}, [alpha](const JetFrame& v) { return cplx(0.5L) / alpha(v); });
    chi1.set({1}, [alpha](const JetFrame& v) { return cplx(0.5L) / alpha(v); });
    FormField chi2 = TensorField::form_field(1, 1);
    chi2.set({0}, [alpha](const JetFrame& v) { return cplx(0, -0.5L) / alpha(v); });
    chi2.set({1}, [alpha](const JetFrame& v) { return cplx(0, 0.5L) / alpha(v); });

    // omega_2^1 = -i (w dz - z dw) / (1 + zw); this is the normalization that
    // satisfies the first structural equations with the coframe above and
    // gives d omega_2^1 = 4 omega0^c
    FormField omega21 = TensorField::form_field(1, 1);
    omega21.set({0}, [](const JetFrame& v) {
        return cplx(0, -1) * v.w() / (cplx(1) + v.z() * v.w());
    });
    omega21.set({1}, [](const JetFrame& v) {
        return cplx(0, 1) * v.z() / (cplx(1) + v.z() * v.w());
    });

    return CartanCoframe{std::move(e1), std::move(e2), std::move(chi1), std::move(chi2),
                         std::move(omega21), std::move(alpha)};
}

// closed-form CP^1 Christoffels: Gamma^z_{zz} = -2w/(1+zw), Gamma^w_{ww} = -2z/(1+zw)
inline std::pair<cplx, cplx> cp1_christoffel_closed_form(const ChartPoint& p) {
    const cplx den = cplx(1) + p.z[0] * p.w[0];
    if (std::abs(den) < kDomainGuard) throw domain_error("cp1 christoffel: 1 + zw = 0");
    return {cplx(-2) * p.w[0] / den, cplx(-2) * p.z[0] / den};
}

}  // namespace kahlerc
