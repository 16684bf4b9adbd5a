#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fd_check.hpp"
#include "kahlerc/calculus.hpp"
#include "kahlerc/jet.hpp"

using namespace kahlerc;

namespace {

// random rational scalar built from two low-degree polynomials with a
// denominator bounded away from zero on the sampling polydisk
ScalarFn random_rational(Rng& rng, std::size_t n) {
    const std::size_t m = 4 * n;
    const auto lin1 = rng.complex_vector(m, 1);
    const auto quad1 = rng.complex_vector(m * m, 1);
    const auto lin2 = rng.complex_vector(m, 1);
    const auto quad2 = rng.complex_vector(m * m, 1);
    const cplx c1 = rng.complex_in_disk(1);
    return [=](const JetFrame& v) {
        Jet p1 = v.constant(c1);
        Jet p2 = v.constant(cplx(0));
        for (std::size_t a = 0; a < m; ++a) {
            p1 += lin1[a] * v.var(a);
            p2 += lin2[a] * v.var(a);
            for (std::size_t b = 0; b < m; ++b) {
                p1 += quad1[a * m + b] * (v.var(a) * v.var(b));
                p2 += quad2[a * m + b] * (v.var(a) * v.var(b));
            }
        }
        const Jet den = cplx(3) + cplx(0.05L) * p2;
        return p1 / den;
    };
}

real max_grad_diff(const Jet& j, const std::vector<cplx>& fd_grad) {
    real d = 0;
    for (std::size_t i = 0; i < j.nvars(); ++i) d = std::max(d, std::abs(j.grad(i) - fd_grad[i]));
    return d;
}

real max_hess_diff(const Jet& j, const std::vector<cplx>& fd_hess) {
    const std::size_t m = j.nvars();
    real d = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k)
            d = std::max(d, std::abs(j.hess(i, k) - fd_hess[i * m + k]));
    return d;
}

}  // namespace

TEST_CASE("polynomial jet is exact") {
    ScalarFn f = [](const JetFrame& v) { return cplx(1) + v.z() * v.w(); };
    const Jet j = jet_eval(f, ChartPoint(cplx(1), cplx(1)));
    CHECK(j.value() == cplx(2));
    CHECK(j.grad(0) == cplx(1));   // d/dz = w
    CHECK(j.grad(1) == cplx(1));   // d/dw = z
    CHECK(j.hess(0, 1) == cplx(1));
    CHECK(j.grad(2) == cplx(0));
    CHECK(j.grad(3) == cplx(0));
    CHECK(j.hess_asymmetry() == 0);
}

TEST_CASE("rational jet at (1,1) with finite-difference cross-check") {
    ScalarFn f = [](const JetFrame& v) { return pow_int(cplx(1) + v.z() * v.w(), -2); };
    const ChartPoint p(cplx(1), cplx(1));
    const Jet j = jet_eval(f, p);
    CHECK(near(j.value(), cplx(0.25L)));
    CHECK(near(j.grad(0), cplx(-0.25L)));  // -2w/(1+zw)^3
    CHECK(near(j.grad(1), cplx(-0.25L)));
    CHECK(near(j.hess(0, 1), cplx(0.125L)));

    const auto g = fd::wirtinger_gradient(fd::value_fn(f), p);
    const auto h = fd::wirtinger_hessian(fd::value_fn(f), p);
    CHECK(max_grad_diff(j, g) < 1e-6L);
    CHECK(max_hess_diff(j, h) < 1e-6L);
}

TEST_CASE("pole raises a domain error") {
    ScalarFn f = [](const JetFrame& v) { return pow_int(cplx(1) + v.z() * v.w(), -2); };
    CHECK_THROWS_AS(jet_eval(f, ChartPoint(cplx(1), cplx(-1))), domain_error);
}

TEST_CASE("jets match finite differences on random rational descriptors") {
    Rng rng(2024);
    real grad_defect = 0, hess_defect = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + (trial % 2);
        ScalarFn f = random_rational(rng, n);
        const ChartPoint p(rng.complex_vector(n, 0.8L), rng.complex_vector(n, 0.8L));
        const Jet j = jet_eval(f, p);

        const auto g = fd::wirtinger_gradient(fd::value_fn(f), p);
        const auto h = fd::wirtinger_hessian(fd::value_fn(f), p);
        const real scale = std::max<real>(1, std::abs(j.value()));
        grad_defect = std::max(grad_defect, max_grad_diff(j, g) / scale);
        hess_defect = std::max(hess_defect, max_hess_diff(j, h) / scale);
        CHECK(j.hess_asymmetry() == 0);
    }
    CHECK(grad_defect < 1e-6L);
    CHECK(hess_defect < 1e-6L);
}

TEST_CASE("sqrt and log jets against finite differences") {
    ScalarFn f = [](const JetFrame& v) {
        const Jet s = sqrt(cplx(2) + v.z() * v.zbar() + v.w() * v.wbar());
        return s - cplx(0.5L) * log((s + cplx(1)) / (s - cplx(1)));
    };
    const ChartPoint p(cplx(0.4L, 0.1L), cplx(-0.3L, 0.2L));
    const Jet j = jet_eval(f, p);
    const auto g = fd::wirtinger_gradient(fd::value_fn(f), p);
    const auto h = fd::wirtinger_hessian(fd::value_fn(f), p);
    CHECK(max_grad_diff(j, g) < 1e-6L);
    CHECK(max_hess_diff(j, h) < 1e-6L);
}

TEST_CASE("conjugate jet swaps Wirtinger blocks") {
    ScalarFn f = [](const JetFrame& v) {
        return pow_int(cplx(1) + v.z() * v.w(), -1) + v.zbar() * v.w();
    };
    const ChartPoint p(cplx(0.3L, 0.2L), cplx(-0.1L, 0.4L));
    const Jet cj = conj_jet(jet_eval(f, p), 1);

    // the conjugate function, differentiated independently
    const auto conj_value = [&f](const ChartPoint& q) {
        return std::conj(f(q.frame()).value());
    };
    const auto g = fd::wirtinger_gradient(conj_value, p);
    const auto h = fd::wirtinger_hessian(conj_value, p);
    CHECK(max_grad_diff(cj, g) < 1e-6L);
    CHECK(max_hess_diff(cj, h) < 1e-6L);
}

TEST_CASE("division by a jet matches the product route") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarFn f = random_rational(rng, 1);
        ScalarFn g = random_rational(rng, 1);
        const ChartPoint p(rng.complex_vector(1, 0.8L), rng.complex_vector(1, 0.8L));
        const JetFrame frame = p.frame();
        const Jet a = f(frame), b = g(frame) + cplx(5);
        const Jet q = a / b;
        const Jet back = q * b;
        CHECK(near(back.value(), a.value(), 1e-15L));
        for (std::size_t i = 0; i < 4; ++i) CHECK(near(back.grad(i), a.grad(i), 1e-13L));
    }
}

TEST_CASE("analytic function guards") {
    const JetFrame v = ChartPoint(cplx(0), cplx(0)).frame();
    CHECK_THROWS_AS(sqrt(v.constant(cplx(0))), domain_error);
    CHECK_THROWS_AS(log(v.constant(cplx(0))), domain_error);
    CHECK_THROWS_AS(v.z().reciprocal(), domain_error);
    const Jet one = pow_int(v.z() + cplx(2), 0);
    CHECK(one.value() == cplx(1));
    CHECK(one.grad(0) == cplx(0));
    const Jet inv = pow_int(v.z() + cplx(2), -2);
    CHECK(near(inv.value(), cplx(0.25L)));
}
