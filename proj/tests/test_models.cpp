#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fd_check.hpp"
#include "kahlerc/models.hpp"

using namespace kahlerc;

TEST_CASE("built-in metric coefficient values") {
    const KahlerModel cp1 = build_model("cp1");
    CHECK(near(cp1.metric_values(ChartPoint(cplx(0), cplx(0)))[0], cplx(1)));
    CHECK(near(cp1.metric_values(ChartPoint(cplx(1), cplx(1)))[0], cplx(0.25L)));

    const KahlerModel flat2 = build_model("flat2");
    const auto h = flat2.metric_values(ChartPoint({cplx(0.3L), cplx(-2)}, {cplx(5), cplx(1)}));
    CHECK(h[0] == cplx(1));
    CHECK(h[3] == cplx(1));
    CHECK(h[1] == cplx(0));
    CHECK(h[2] == cplx(0));

    const KahlerModel disk = build_model("disk");
    CHECK(near(disk.metric_values(ChartPoint(cplx(0.5L), cplx(0.5L)))[0],
               cplx(1) / cplx(0.5625L)));
}

TEST_CASE("cpn restricts to the Fubini-Study metric on the diagonal") {
    const KahlerModel m = build_model("cpn:2");
    const std::vector<cplx> z{cplx(0.3L, 0.1L), cplx(-0.2L, 0.4L)};
    const ChartPoint p = diagonal_point(z);
    const auto h = m.metric_values(p);
    cplx dot(1);
    for (const auto& zi : z) dot += zi * std::conj(zi);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) {
            const cplx expected =
                ((j == k ? dot : cplx(0)) - std::conj(z[j]) * z[k]) / (dot * dot);
            CHECK(near(h[j * 2 + k], expected, 1e-15L));
        }
}

TEST_CASE("unknown model id is rejected") {
    CHECK_THROWS_AS(build_model("nope"), argument_error);
    CHECK_THROWS_AS(flat_model(0), argument_error);
}

TEST_CASE("domain guards") {
    const KahlerModel cp1 = build_model("cp1");
    CHECK(!cp1.in_domain(ChartPoint(cplx(1), cplx(-1))));
    CHECK_THROWS_AS(cp1.metric_values(ChartPoint(cplx(1), cplx(-1))), domain_error);
    const KahlerModel disk = build_model("disk");
    CHECK(!disk.in_domain(ChartPoint(cplx(1.2L), cplx(0))));
}

TEST_CASE("validation of the built-in models") {
    for (const char* id : {"flat1", "cp1", "cpn:2", "disk"}) {
        const ValidationReport rep = validate_model(build_model(id), 100, 7);
        CHECK(rep.pass());
        if (std::string(id) == "flat1")
            for (const auto& r : rep.records)
                if (!r.at_least) CHECK(r.defect == 0);
        if (const CheckRecord* r = rep.find("holomorphic-coefficients"))
            CHECK(r->defect < 1e-10L);
    }
}

TEST_CASE("a non-holomorphic model fails validation") {
    KahlerModel bad = build_model("cp1");
    bad.name = "cp1-corrupted";
    bad.h_c = [](const JetFrame& v) {
        const Jet den = cplx(1) + v.z() * v.wbar();  // wbar: not holomorphic
        return std::vector<Jet>{pow_int(den, -2)};
    };
    bad.domain = [](const ChartPoint& p) {
        return std::abs(cplx(1) + p.z[0] * std::conj(p.w[0])) >= kDomainGuard;
    };
    const ValidationReport rep = validate_model(bad, 50, 7);
    CHECK(!rep.pass());
    const CheckRecord* r = rep.find("holomorphic-coefficients");
    REQUIRE(r != nullptr);
    CHECK(r->defect > 0.01L);

    // cross-check the jet-based defect against finite differences
    Rng rng(3);
    const ChartPoint p = sample_point(bad, rng);
    const auto jets = bad.h_c(p.frame());
    const auto fd_grad = fd::wirtinger_gradient(
        [&bad](const ChartPoint& q) { return bad.h_c(q.frame())[0].value(); }, p);
    for (std::size_t a = 2; a < 4; ++a) CHECK(near(jets[0].grad(a), fd_grad[a], 1e-6L));
}

TEST_CASE("deterministic sampling") {
    const KahlerModel m = build_model("cp1");
    Rng a(42), b(42);
    for (int i = 0; i < 10; ++i) {
        const ChartPoint pa = sample_point(m, a);
        const ChartPoint pb = sample_point(m, b);
        CHECK(pa.z[0] == pb.z[0]);
        CHECK(pa.w[0] == pb.w[0]);
    }
}
