#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kahlerc/quaternion.hpp"

using namespace kahlerc;

TEST_CASE("diagonal frame at the origin of cp1") {
    const KahlerModel m = build_model("cp1");
    const QuaternionFrame f = diagonal_hh_frame(m, {cplx(0)});

    // g = (1/2)(dz dzbar + dw dwbar)
    const TensorValue dz = frame_vector(1, 0), dzb = frame_vector(1, 2);
    const TensorValue dwv = frame_vector(1, 1), dwb = frame_vector(1, 3);
    CHECK(near(f.g(dz, dzb), cplx(0.25L)));
    CHECK(near(f.g(dwv, dwb), cplx(0.25L)));
    CHECK(f.g(dz, dwv) == cplx(0));

    // I on the real vector with components (p, q) = (0, 1): z-component i
    const TensorValue v = real_tangent(1, {cplx(0)}, {cplx(1)});
    const TensorValue iv = apply(f.I, v);
    CHECK(near(iv.at({0}), cplx(0, 1)));
    CHECK(near(iv.at({1}), cplx(0)));
    CHECK(near(iv.at({2}), cplx(0, -1)));
    CHECK(f.eta.has_value());
    CHECK(near(*f.eta, cplx(1)));
}

TEST_CASE("diagonal frame at z0 = 0.5 matches the closed forms") {
    const KahlerModel m = build_model("cp1");
    const QuaternionFrame f = diagonal_hh_frame(m, {cplx(0.5L)});
    const QuaternionFrame c = cp1_hh_closed_form(diagonal_point({cplx(0.5L)}));
    CHECK(f.g.max_abs_diff(c.g) < 1e-15L);
    CHECK(f.I.max_abs_diff(c.I) < 1e-15L);
    CHECK(f.K.max_abs_diff(c.K) < 1e-15L);

    // g coefficient (1/2)(1.25)^{-2} on dz dzbar: evaluates to 0.16
    CHECK(near(f.g(frame_vector(1, 0), frame_vector(1, 2)), cplx(0.16L)));
    CHECK(near(*c.eta, cplx(1)));
}

TEST_CASE("flat diagonal frame is constant in the chart") {
    const KahlerModel m = build_model("flat1");
    const QuaternionFrame a = diagonal_hh_frame(m, {cplx(0)});
    const QuaternionFrame b = diagonal_hh_frame(m, {cplx(0.7L, -0.4L)});
    CHECK(a.g.max_abs_diff(b.g) == 0);
    CHECK(a.I.max_abs_diff(b.I) == 0);
    CHECK(a.K.max_abs_diff(b.K) == 0);
}

TEST_CASE("transported frame at (0.5, 0)") {
    const KahlerModel m = build_model("cp1");
    const ChartPoint p(cplx(0.5L), cplx(0));
    const QuaternionFrame f = hh_frame(m, p);

    REQUIRE(f.eta.has_value());
    CHECK(near(*f.eta, cplx(1.5625L)));

    // I on (p, q) = (0, 1): z-component i * etabar = 1.5625 i, w-component 0
    const TensorValue v = real_tangent(1, {cplx(0)}, {cplx(1)});
    const TensorValue iv = apply(f.I, v);
    CHECK(std::abs(iv.at({0}) - cplx(0, 1.5625L)) < 1e-9L);
    CHECK(std::abs(iv.at({1})) < 1e-9L);

    // g = (1/2)[(1.25)^{-2} dz dzbar + (1.25)^2 dw dwbar]
    CHECK(std::abs(f.g(frame_vector(1, 0), frame_vector(1, 2)) - cplx(0.16L)) < 1e-9L);
    CHECK(std::abs(f.g(frame_vector(1, 1), frame_vector(1, 3)) - cplx(0.390625L)) < 1e-9L);

    CHECK(cp1_frame_defect(f, p) < 1e-9L);
}

TEST_CASE("flat transported frame equals the diagonal frame") {
    const KahlerModel m = build_model("flat1");
    const ChartPoint p(cplx(0.4L, 0.1L), cplx(-0.9L, 0.3L));
    const QuaternionFrame f = hh_frame(m, p);
    const QuaternionFrame d = diagonal_hh_frame(m, p.z);
    CHECK(f.g.max_abs_diff(d.g) < 1e-17L);
    CHECK(f.I.max_abs_diff(d.I) < 1e-17L);
    CHECK(f.J.max_abs_diff(d.J) < 1e-17L);
    CHECK(f.K.max_abs_diff(d.K) < 1e-17L);
}

TEST_CASE("closed-form agreement on seeded cp1 points") {
    const KahlerModel m = build_model("cp1");
    Rng rng(7);
    real d = 0;
    for (int s = 0; s < 25; ++s) {
        const ChartPoint p = sample_point(m, rng);
        d = std::max(d, cp1_frame_defect(hh_frame(m, p), p));
    }
    CHECK(d < 1e-7L);
}

TEST_CASE("relation report on cp1 at the witness point") {
    const KahlerModel m = build_model("cp1");
    const ChartPoint p(cplx(0.3L), cplx(0, 0.1L));
    const QuaternionFrame f = hh_frame(m, p);
    const ValidationReport rep = relation_report(m, p, f, bilagrangian_package(m, p));
    CHECK(rep.pass());
    const CheckRecord* dwj = rep.find("domega-J-nonzero");
    REQUIRE(dwj != nullptr);
    CHECK(dwj->defect > 1e-2L);
    CHECK(rep.find("admissibility")->defect < 1e-9L);
    CHECK(rep.find("frame-foliations-agree")->defect == 0);
}

TEST_CASE("relation report on the flat model") {
    const KahlerModel m = build_model("flat1");
    const ChartPoint p(cplx(0.2L, 0.5L), cplx(-0.3L));
    const QuaternionFrame f = hh_frame(m, p);
    const ValidationReport rep = relation_report(m, p, f, bilagrangian_package(m, p));
    CHECK(rep.pass());
    const CheckRecord* dwj = rep.find("domega-J-flat");
    REQUIRE(dwj != nullptr);
    CHECK(dwj->defect == 0);
}

TEST_CASE("diagonal restriction reproduces the Kaehler data") {
    Rng rng(23);
    for (const char* id : {"cp1", "cpn:2", "disk"}) {
        const KahlerModel m = build_model(id);
        real d = 0;
        for (int s = 0; s < 10; ++s) {
            const ChartPoint p = sample_diagonal_point(m, rng);
            const QuaternionFrame f = diagonal_hh_frame(m, p.z);
            const ValidationReport rep = relation_report(m, p, f, bilagrangian_package(m, p));
            CHECK(rep.pass());
            for (const char* name : {"diagonal-restriction-g", "diagonal-restriction-omegaI",
                                     "diagonal-restriction-I"})
                d = std::max(d, rep.find(name)->defect);
        }
        CHECK(d < 1e-10L);
    }
}

TEST_CASE("transport uniqueness between homotopic leaf paths") {
    const KahlerModel m = build_model("cp1");
    Rng rng(3);
    real d = 0;
    for (int s = 0; s < 5; ++s) {
        const ChartPoint p = sample_point(m, rng);
        const ChartPoint start = diagonal_point(p.z);
        const QuaternionFrame a = hh_frame_along(m, straight_path(start, p, 1500));
        const QuaternionFrame b = hh_frame_along(
            m, vertical_detour_path(p.z[0], start.w[0], p.w[0],
                                    cplx(0, 0.2L) * (p.w[0] - start.w[0]), 1500));
        d = std::max(d, a.g.max_abs_diff(b.g));
        d = std::max(d, a.I.max_abs_diff(b.I));
        d = std::max(d, a.K.max_abs_diff(b.K));
    }
    CHECK(d < 1e-7L);
}

TEST_CASE("omega_I - i omega_K recovers the complex symplectic form") {
    Rng rng(29);
    for (const char* id : {"cp1", "disk", "cpn:2"}) {
        const KahlerModel m = build_model(id);
        real d = 0;
        for (int s = 0; s < 5; ++s) {
            const ChartPoint p = sample_point(m, rng);
            const QuaternionFrame f = hh_frame(m, p);
            const TensorValue lhs = f.omegaI - f.omegaK * cplx(0, 1);
            d = std::max(d, lhs.max_abs_diff(complex_symplectic_form(m, p)));
        }
        CHECK(d < 1e-9L);
    }
}

TEST_CASE("hh_frame requires a reachable diagonal start") {
    const KahlerModel m = build_model("cp1");
    CHECK_THROWS_AS(hh_frame(m, ChartPoint(cplx(1), cplx(-1))), domain_error);
    CHECK_THROWS_AS(
        hh_frame_along(m, straight_path(ChartPoint(cplx(0.5L), cplx(0.1L)),
                                        ChartPoint(cplx(0.5L), cplx(0.2L)), 100)),
        argument_error);
}

TEST_CASE("finite-difference d omega_J estimate") {
    // cross-validated against the exact jet route on cp1
    const KahlerModel cp1 = build_model("cp1");
    const ChartPoint witness(cplx(0.3L), cplx(0, 0.1L));
    const real fd = dwj_estimate(cp1, witness);
    const real exact = exterior_derivative(cp1_omega_j_field(), witness).norm_inf();
    CHECK(std::abs(fd - exact) < 1e-6L);

    // generic models report the estimated norm; the disk is curved, so the
    // structure is not integrable there either
    const KahlerModel disk = build_model("disk");
    const ChartPoint p(cplx(0.3L), cplx(0, 0.2L));
    const ValidationReport rep =
        relation_report(disk, p, hh_frame(disk, p), bilagrangian_package(disk, p));
    const CheckRecord* r = rep.find("domega-J-norm");
    REQUIRE(r != nullptr);
    CHECK(r->defect > 1e-2L);
}
