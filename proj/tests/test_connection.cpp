#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kahlerc/bilag.hpp"
#include "kahlerc/connection.hpp"
#include "kahlerc/models.hpp"

using namespace kahlerc;

namespace {

using JetVec = std::vector<Jet>;

VectorField const_field(std::size_t n, std::size_t index) {
    VectorField X = TensorField::vector_field(n);
    X.set({index}, scalar_constant(cplx(1)));
    return X;
}

VectorField random_holo_poly(Rng& rng, std::size_t n, bool vertical, bool horizontal) {
    VectorField X = TensorField::vector_field(n);
    const std::size_t h = 2 * n;
    for (std::size_t comp = 0; comp < h; ++comp) {
        if (vertical && comp < n) continue;
        if (horizontal && comp >= n) continue;
        const cplx c0 = rng.complex_in_disk(1);
        const auto cl = rng.complex_vector(h, 1);
        const auto cq = rng.complex_vector(h * h, 0.5L);
        X.set({comp}, [c0, cl, cq, h](const JetFrame& v) {
            Jet s = v.constant(c0);
            for (std::size_t a = 0; a < h; ++a) s += cl[a] * v.var(a);
            for (std::size_t a = 0; a < h; ++a)
                for (std::size_t b = 0; b < h; ++b) s += cq[a * h + b] * (v.var(a) * v.var(b));
            return s;
        });
    }
    return X;
}

JetVec project_jets(const JetVec& v, std::size_t n, bool vertical) {
    JetVec out(v.size(), Jet::constant(v[0].nvars(), cplx(0)));
    for (std::size_t j = 0; j < n; ++j) {
        if (vertical) {
            out[n + j] = v[n + j];
            out[3 * n + j] = v[3 * n + j];
        } else {
            out[j] = v[j];
            out[2 * n + j] = v[2 * n + j];
        }
    }
    return out;
}

TensorValue values_of(const JetVec& v, std::size_t n) {
    TensorValue t = TensorValue::vector(n);
    for (std::size_t a = 0; a < 4 * n; ++a) t.at({a}) = v[a].value();
    return t;
}

// [a, b] values from jets carrying gradients
TensorValue bracket_value(const JetVec& a, const JetVec& b, std::size_t n) {
    const std::size_t m = 4 * n;
    TensorValue out = TensorValue::vector(n);
    for (std::size_t i = 0; i < m; ++i) {
        cplx s(0);
        for (std::size_t k = 0; k < m; ++k)
            s += a[k].value() * b[i].grad(k) - b[k].value() * a[i].grad(k);
        out.at({i}) = s;
    }
    return out;
}

cplx gamma_full_value(const ConnectionTable& t, std::size_t a, std::size_t b, std::size_t c) {
    return t.full(a, b, c);
}

cplx gamma_full_grad(const ConnectionTable& t, std::size_t n, std::size_t a, std::size_t b,
                     std::size_t c, std::size_t dir) {
    const std::size_t h = 2 * n;
    const bool ah = a < h, bh = b < h, ch = c < h;
    if (ah && bh && ch) return t.jet(a, b, c).grad(dir);
    if (!ah && !bh && !ch)
        return std::conj(t.jet(a - h, b - h, c - h).grad(conj_index(dir, n)));
    return cplx(0);
}

// (nabla_X W) with first derivatives, from field jets and the Gamma table
JetVec covd_jets(const KahlerModel& m, const ConnectionTable& t, const JetVec& xj,
                 const JetVec& wj) {
    const std::size_t n = m.n;
    const std::size_t dim = 4 * n;
    JetVec out(dim, Jet::constant(dim, cplx(0)));
    for (std::size_t a = 0; a < dim; ++a) {
        Jet r = Jet::constant(dim, cplx(0));
        cplx val(0);
        for (std::size_t b = 0; b < dim; ++b) {
            cplx inner = wj[a].grad(b);
            for (std::size_t mm = 0; mm < dim; ++mm)
                inner += gamma_full_value(t, a, b, mm) * wj[mm].value();
            val += xj[b].value() * inner;
        }
        r.value() = val;
        for (std::size_t c = 0; c < dim; ++c) {
            cplx g(0);
            for (std::size_t b = 0; b < dim; ++b) {
                cplx inner = wj[a].grad(b);
                cplx dinner = wj[a].hess(b, c);
                for (std::size_t mm = 0; mm < dim; ++mm) {
                    inner += gamma_full_value(t, a, b, mm) * wj[mm].value();
                    dinner += gamma_full_grad(t, n, a, b, mm, c) * wj[mm].value() +
                              gamma_full_value(t, a, b, mm) * wj[mm].grad(c);
                }
                g += xj[b].grad(c) * inner + xj[b].value() * dinner;
            }
            r.grad(c) = g;
        }
        out[a] = r;
    }
    return out;
}

TensorValue covd_along_value(const KahlerModel& m, const ConnectionTable& t,
                             const TensorValue& V, const JetVec& wj) {
    const std::size_t n = m.n;
    const std::size_t dim = 4 * n;
    TensorValue out = TensorValue::vector(n);
    for (std::size_t a = 0; a < dim; ++a) {
        cplx s(0);
        for (std::size_t b = 0; b < dim; ++b) {
            cplx inner = wj[a].grad(b);
            for (std::size_t mm = 0; mm < dim; ++mm)
                inner += gamma_full_value(t, a, b, mm) * wj[mm].value();
            s += V.at({b}) * inner;
        }
        out.at({a}) = s;
    }
    return out;
}

TensorValue project_value(const TensorValue& v, std::size_t n, bool vertical) {
    TensorValue out = TensorValue::vector(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (vertical) {
            out.at({n + j}) = v.at({n + j});
            out.at({3 * n + j}) = v.at({3 * n + j});
        } else {
            out.at({j}) = v.at({j});
            out.at({2 * n + j}) = v.at({2 * n + j});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("cp1 Christoffel symbols") {
    const KahlerModel m = build_model("cp1");

    const ConnectionTable t1 = christoffel(m, ChartPoint(cplx(1), cplx(0)));
    CHECK(near(t1.value(1, 1, 1), cplx(-2)));
    CHECK(near(t1.value(0, 0, 0), cplx(0)));
    CHECK(t1.max_symmetry_defect() == 0);

    const ConnectionTable t0 = christoffel(m, ChartPoint(cplx(0), cplx(0)));
    real max0 = 0;
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) max0 = std::max(max0, std::abs(t0.value(k, a, b)));
    CHECK(max0 < 1e-18L);

    // closed form at seeded points
    Rng rng(7);
    real d = 0;
    for (int s = 0; s < 100; ++s) {
        const ChartPoint p = sample_point(m, rng);
        const ConnectionTable t = christoffel(m, p);
        const auto [gz, gw] = cp1_christoffel_closed_form(p);
        d = std::max(d, std::abs(t.value(0, 0, 0) - gz));
        d = std::max(d, std::abs(t.value(1, 1, 1) - gw));
        d = std::max(d, std::abs(t.value(0, 1, 1)));
        d = std::max(d, std::abs(t.value(1, 0, 0)));
    }
    CHECK(d < 1e-10L);
}

TEST_CASE("flat model has a vanishing connection") {
    const KahlerModel m = build_model("flat2");
    const ConnectionTable t = christoffel(m, ChartPoint({cplx(1), cplx(2)}, {cplx(3), cplx(4)}));
    real d = 0;
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) d = std::max(d, std::abs(t.value(k, a, b)));
    CHECK(d == 0);
}

TEST_CASE("covariant derivative examples") {
    const KahlerModel m = build_model("cp1");

    // nabla_w d/dw = Gamma^w_ww d/dw = -2 d/dw at (1, 0)
    const TensorField dw = TensorField::constant(1, frame_vector(1, 1));
    const TensorValue t = covariant_derivative(m, dw, 1, ChartPoint(cplx(1), cplx(0)));
    CHECK(near(t.at({1}), cplx(-2)));
    CHECK(near(t.at({0}), cplx(0)));

    // metricity at a generic point
    const TensorField g = bilagrangian_metric_field(m);
    const ChartPoint p(cplx(0.4L), cplx(0.2L));
    for (std::size_t dir = 0; dir < 4; ++dir)
        CHECK(covariant_derivative(m, g, dir, p).norm_inf() < 1e-10L);

    // flat model: plain derivative of constants
    const KahlerModel flat = build_model("flat1");
    const TensorField c = TensorField::constant(1, frame_vector(1, 0));
    CHECK(covariant_derivative(flat, c, 0, ChartPoint(cplx(1), cplx(1))).norm_inf() == 0);
}

TEST_CASE("parallel tensors of the bi-Lagrangian connection") {
    Rng rng(13);
    for (const char* id : {"cp1", "cpn:2", "disk"}) {
        const KahlerModel m = build_model(id);
        const TensorField g = bilagrangian_metric_field(m);
        const FormField omega = complex_symplectic_field(m);
        const TensorField F = TensorField::constant(m.n, paracomplex_structure(m.n));
        const TensorField J = TensorField::constant(m.n, ambient_complex_structure(m.n));
        real d = 0;
        for (int s = 0; s < 10; ++s) {
            const ChartPoint p = sample_point(m, rng);
            for (std::size_t dir = 0; dir < 4 * m.n; ++dir) {
                d = std::max(d, covariant_derivative(m, g, dir, p).norm_inf());
                d = std::max(d, covariant_derivative(m, omega, dir, p).norm_inf());
                d = std::max(d, covariant_derivative(m, F, dir, p).norm_inf());
                d = std::max(d, covariant_derivative(m, J, dir, p).norm_inf());
            }
        }
        CHECK(d < 1e-8L);
    }
}

TEST_CASE("curvature examples") {
    const KahlerModel m = build_model("cp1");

    // vertical pair: flat
    TensorValue X = TensorValue::vector(1), Y = TensorValue::vector(1);
    X.at({1}) = cplx(1);
    Y.at({1}) = cplx(0, 1);
    const CurvatureValue r0 =
        curvature_endomorphism(m, ChartPoint(cplx(0.4L), cplx(0.1L)), X, Y);
    CHECK(r0.endo.norm_inf() < 1e-12L);

    // R(dz, dw) dw = -2 dw at the origin
    TensorValue dz = frame_vector(1, 0), dwv = frame_vector(1, 1);
    const CurvatureValue r1 = curvature_endomorphism(m, ChartPoint(cplx(0), cplx(0)), dz, dwv);
    const TensorValue rdw = r1(dwv);
    CHECK(near(rdw.at({1}), cplx(-2)));
    CHECK(near(rdw.at({0}), cplx(0)));

    // flat model
    const KahlerModel flat = build_model("flat1");
    const CurvatureValue rf =
        curvature_endomorphism(flat, ChartPoint(cplx(1), cplx(2)), dz, dwv);
    CHECK(rf.endo.norm_inf() == 0);
}

TEST_CASE("curvature antisymmetry and foliation preservation") {
    const KahlerModel m = build_model("cp1");
    Rng rng(31);
    real asym = 0, pres = 0;
    for (int s = 0; s < 25; ++s) {
        const ChartPoint p = sample_point(m, rng);
        TensorValue X = real_tangent(1, {rng.complex_in_disk(1)}, {rng.complex_in_disk(1)});
        TensorValue Y = real_tangent(1, {rng.complex_in_disk(1)}, {rng.complex_in_disk(1)});
        const TensorValue rxy = curvature_endomorphism(m, p, X, Y).endo;
        const TensorValue ryx = curvature_endomorphism(m, p, Y, X).endo;
        asym = std::max(asym, (rxy + ryx).norm_inf());

        TensorValue Zv = TensorValue::vector(1);
        Zv.at({1}) = rng.complex_in_disk(1);
        pres = std::max(pres, project_value(apply(rxy, Zv), 1, false).norm_inf());
        TensorValue Zh = TensorValue::vector(1);
        Zh.at({0}) = rng.complex_in_disk(1);
        pres = std::max(pres, project_value(apply(rxy, Zh), 1, true).norm_inf());
    }
    CHECK(asym < 1e-12L);
    CHECK(pres < 1e-12L);
}

TEST_CASE("torsion-free identity on random polynomial fields") {
    Rng rng(47);
    real d = 0;
    for (const char* id : {"cp1", "disk"}) {
        const KahlerModel m = build_model(id);
        for (int s = 0; s < 25; ++s) {
            const ChartPoint p = sample_point(m, rng);
            const VectorField X = random_holo_poly(rng, m.n, false, false);
            const VectorField Y = random_holo_poly(rng, m.n, false, false);
            const TensorValue t = covariant_derivative_vector(m, X, Y, p) -
                                  covariant_derivative_vector(m, Y, X, p) -
                                  lie_bracket(X, Y, p);
            d = std::max(d, t.norm_inf());
        }
    }
    CHECK(d < 1e-8L);
}

TEST_CASE("Bott partial derivative") {
    const KahlerModel flat = build_model("flat1");

    // flat: componentwise fiber derivative
    VectorField X = const_field(1, 1);
    VectorField Y = TensorField::vector_field(1);
    Y.set({1}, [](const JetFrame& v) { return v.w(); });
    const TensorValue b = bott_partial_derivative(flat, X, Y, ChartPoint(cplx(0), cplx(2)));
    CHECK(near(b.at({1}), cplx(1)));
    CHECK(near(b.at({0}), cplx(0)));

    // constant field: zero
    const TensorValue b0 =
        bott_partial_derivative(flat, X, const_field(1, 1), ChartPoint(cplx(0.3L), cplx(1)));
    CHECK(b0.norm_inf() < 1e-18L);

    // cp1: agrees with the full connection on vertical fields
    const KahlerModel cp1 = build_model("cp1");
    const ChartPoint p(cplx(1), cplx(0));
    const TensorValue bott = bott_partial_derivative(cp1, X, const_field(1, 1), p);
    CHECK(near(bott.at({1}), cplx(-2)));
    const TensorValue full = covariant_derivative_vector(cp1, X, const_field(1, 1), p);
    CHECK(bott.max_abs_diff(full) < 1e-14L);

    // mismatched foliations are rejected
    CHECK_THROWS_AS(bott_partial_derivative(cp1, X, const_field(1, 0), p), argument_error);
    VectorField slanted = TensorField::vector_field(1);
    slanted.set({0}, scalar_constant(cplx(1)));
    slanted.set({1}, scalar_constant(cplx(1)));
    CHECK_THROWS_AS(bott_partial_derivative(cp1, slanted, slanted, p), argument_error);
}

TEST_CASE("Bott derivative of vertical fields lands on the same foliation") {
    const KahlerModel cp1 = build_model("cp1");
    Rng rng(3);
    real offleaf = 0;
    for (int s = 0; s < 20; ++s) {
        const ChartPoint p = sample_point(cp1, rng);
        const VectorField X = random_holo_poly(rng, 1, true, false);
        const VectorField Y = random_holo_poly(rng, 1, true, false);
        const TensorValue b = bott_partial_derivative(cp1, X, Y, p);
        offleaf = std::max(offleaf, std::abs(b.at({0})));
        offleaf = std::max(offleaf, std::abs(b.at({2})));
    }
    CHECK(offleaf < 1e-12L);
}

TEST_CASE("cotangent chart and canonical check") {
    const CotangentChart chart = cotangent_chart(1);
    const TensorValue xi = chart.xi.eval(ChartPoint(cplx(2), cplx(3)));
    CHECK(near(xi.at({0}), cplx(3)));  // xi = p dq at (q, p) = (2, 3)
    CHECK(xi.at({1}) == cplx(0));

    for (const std::size_t n : {1u, 2u}) {
        const ValidationReport rep = cotangent_canonical_check(n, 50, 7);
        CHECK(rep.pass());
        CHECK(rep.find("cotangent-omega-is-dxi")->defect == 0);
        CHECK(rep.find("cotangent-bott-componentwise")->defect < 1e-9L);
    }
}

TEST_CASE("Cartan coframe invariants") {
    const KahlerModel m = build_model("cp1");
    const CartanCoframe cf = cartan_coframe_cp1();
    Rng rng(7);
    real ortho = 0, structural = 0, curv = 0;
    for (int s = 0; s < 100; ++s) {
        const ChartPoint p = sample_point(m, rng);
        const TensorValue g = bilagrangian_metric(m, p);
        const TensorValue e1 = cf.E1.eval(p), e2 = cf.E2.eval(p);
        ortho = std::max(ortho, std::abs(g(e1, e1) - cplx(1)));
        ortho = std::max(ortho, std::abs(g(e2, e2) - cplx(1)));
        ortho = std::max(ortho, std::abs(g(e1, e2)));

        const TensorValue w21 = cf.omega21.eval(p);
        structural = std::max(structural, exterior_derivative(cf.chi1, p)
                                              .max_abs_diff(wedge(cf.chi2.eval(p), w21)));
        structural = std::max(structural,
                              exterior_derivative(cf.chi2, p)
                                  .max_abs_diff(wedge(cf.chi1.eval(p), w21 * cplx(-1))));
        curv = std::max(curv, exterior_derivative(cf.omega21, p)
                                  .max_abs_diff(complex_symplectic_form(m, p) * cplx(4)));
    }
    CHECK(ortho < 1e-10L);
    CHECK(structural < 1e-9L);
    CHECK(curv < 1e-8L);
}

// field-level identity for the mixed-foliation curvature, on polynomial
// fields: for X vertical and Y horizontal,
//   R(X,Y)Z = nabla_X [Y,Z1]_1 - [[X,Y]_2, Z1]_1 - nabla_{[X,Y]_1} Z1 - [Y, nabla_X Z1]_1
//           - nabla_Y [X,Z2]_2 - [[X,Y]_1, Z2]_2 - nabla_{[X,Y]_2} Z2 + [X, nabla_Y Z2]_2
// (the sign of the final term follows from expanding nabla_X nabla_Y Z2
// through the foliation decomposition of the connection)
TEST_CASE("mixed-case curvature formula on polynomial fields") {
    const KahlerModel m = build_model("cp1");
    const std::size_t n = 1;
    Rng rng(19);
    real d = 0;
    for (int s = 0; s < 10; ++s) {
        const ChartPoint p = sample_point(m, rng);
        const JetFrame frame = p.frame();
        const ConnectionTable t = christoffel(m, p);

        const VectorField X = random_holo_poly(rng, n, true, false);   // vertical
        const VectorField Y = random_holo_poly(rng, n, false, true);   // horizontal
        const VectorField Z = random_holo_poly(rng, n, false, false);

        const JetVec xj = X.jets(frame);
        const JetVec yj = Y.jets(frame);
        const JetVec zj = Z.jets(frame);
        const JetVec z1 = project_jets(zj, n, true);
        const JetVec z2 = project_jets(zj, n, false);

        const TensorValue lhs =
            apply(curvature_endomorphism(m, p, values_of(xj, n), values_of(yj, n)).endo,
                  values_of(zj, n));

        const JetVec xy = lie_bracket_jets(X, Y, frame);
        const TensorValue xy1 = project_value(values_of(xy, n), n, true);
        const TensorValue xy2 = project_value(values_of(xy, n), n, false);

        // vertical half
        // brackets against fields need the projected field itself; rebuild it
        VectorField Z1f = TensorField::vector_field(n);
        VectorField Z2f = TensorField::vector_field(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (Z.fn({n + j})) Z1f.set({n + j}, Z.fn({n + j}));
            if (Z.fn({j})) Z2f.set({j}, Z.fn({j}));
        }
        const JetVec yz1j = lie_bracket_jets(Y, Z1f, frame);
        const JetVec xz2j = lie_bracket_jets(X, Z2f, frame);

        const TensorValue term1 =
            project_value(covd_along_value(m, t, values_of(xj, n),
                                           project_jets(yz1j, n, true)),
                          n, true);
        const TensorValue term2 =
            project_value(bracket_value(project_jets(xy, n, false), z1, n), n, true);
        const TensorValue term3 =
            project_value(covd_along_value(m, t, xy1, z1), n, true);
        const JetVec nxz1 = covd_jets(m, t, xj, z1);
        const TensorValue term4 = project_value(bracket_value(yj, nxz1, n), n, true);

        const TensorValue term5 =
            project_value(covd_along_value(m, t, values_of(yj, n),
                                           project_jets(xz2j, n, false)),
                          n, false);
        const TensorValue term6 =
            project_value(bracket_value(project_jets(xy, n, true), z2, n), n, false);
        const TensorValue term7 =
            project_value(covd_along_value(m, t, xy2, z2), n, false);
        const JetVec nyz2 = covd_jets(m, t, yj, z2);
        const TensorValue term8 = project_value(bracket_value(xj, nyz2, n), n, false);

        const TensorValue rhs =
            term1 - term2 - term3 - term4 - term5 - term6 - term7 + term8;
        d = std::max(d, lhs.max_abs_diff(rhs));
    }
    CHECK(d < 1e-8L);
}
