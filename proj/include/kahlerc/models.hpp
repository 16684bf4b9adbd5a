#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kahlerc/calculus.hpp"
#include "kahlerc/linalg.hpp"
#include "kahlerc/report.hpp"

// Built-in complexified Kaehler models. Each model supplies the
// holomorphically extended metric coefficients h^c_{jk}(z, w) in closed form
// (the substitution conj(z) -> w is exact for rational coefficients) plus a
// domain predicate that keeps evaluation away from the singular locus.

namespace kahlerc {

inline constexpr real kDomainGuard = 1e-6L;

struct KahlerModel {
    std::size_t n = 1;
    std::string name;
    // n x n matrix of holomorphic coefficient functions, row-major
    std::function<std::vector<Jet>(const JetFrame&)> h_c;
    std::function<bool(const ChartPoint&)> domain;

    bool in_domain(const ChartPoint& p) const { return p.finite() && domain(p); }

    void require_domain(const ChartPoint& p) const {
        if (!in_domain(p)) throw domain_error(name + ": point outside domain " + p.str());
    }

    std::vector<Jet> metric_jets(const ChartPoint& p) const {
        require_domain(p);
        return h_c(p.frame());
    }

    std::vector<cplx> metric_values(const ChartPoint& p) const {
        const auto jets = metric_jets(p);
        std::vector<cplx> h(jets.size());
        for (std::size_t i = 0; i < jets.size(); ++i) h[i] = jets[i].value();
        return h;
    }
};

inline KahlerModel flat_model(std::size_t n) {
    if (n < 1) throw argument_error("flat model: n >= 1 required");
    KahlerModel m;
    m.n = n;
    m.name = "flat" + std::to_string(n);
    m.h_c = [n](const JetFrame& v) {
        std::vector<Jet> h(n * n, v.constant(cplx(0)));
        for (std::size_t j = 0; j < n; ++j) h[j * n + j] = v.constant(cplx(1));
        return h;
    };
    m.domain = [](const ChartPoint&) { return true; };
    return m;
}

inline KahlerModel fubini_study_cp1() {
    KahlerModel m;
    m.n = 1;
    m.name = "cp1";
    m.h_c = [](const JetFrame& v) {
        const Jet den = cplx(1) + v.z() * v.w();
        return std::vector<Jet>{pow_int(den, -2)};
    };
    m.domain = [](const ChartPoint& p) {
        return std::abs(cplx(1) + p.z[0] * p.w[0]) >= kDomainGuard;
    };
    return m;
}

inline KahlerModel fubini_study_cpn(std::size_t n) {
    if (n < 1) throw argument_error("cpn model: n >= 1 required");
    if (n == 1) return fubini_study_cp1();
    KahlerModel m;
    m.n = n;
    m.name = "cpn:" + std::to_string(n);
    m.h_c = [n](const JetFrame& v) {
        Jet s = v.constant(cplx(1));
        for (std::size_t i = 0; i < n; ++i) s += v.z(i) * v.w(i);
        const Jet inv2 = pow_int(s, -2);
        std::vector<Jet> h(n * n, v.constant(cplx(0)));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Jet num = cplx(0) - v.w(j) * v.z(k);
                if (j == k) num += s;
                h[j * n + k] = num * inv2;
            }
        return h;
    };
    m.domain = [n](const ChartPoint& p) {
        cplx s(1);
        for (std::size_t i = 0; i < n; ++i) s += p.z[i] * p.w[i];
        return std::abs(s) >= kDomainGuard;
    };
    return m;
}

inline KahlerModel poincare_disk() {
    KahlerModel m;
    m.n = 1;
    m.name = "disk";
    m.h_c = [](const JetFrame& v) {
        const Jet den = cplx(1) - v.z() * v.w();
        return std::vector<Jet>{pow_int(den, -2)};
    };
    m.domain = [](const ChartPoint& p) {
        return std::abs(p.z[0]) < 1 && std::abs(p.w[0]) < 1 &&
               std::abs(cplx(1) - p.z[0] * p.w[0]) >= kDomainGuard;
    };
    return m;
}

// Model selection by CLI-style identifier: flat1, flatN, cp1, cpn:N, disk.
inline KahlerModel build_model(const std::string& id) {
    if (id.rfind("flat", 0) == 0) {
        const std::string suffix = id.substr(4);
        const std::size_t n = suffix.empty() ? 1 : std::stoul(suffix);
        return flat_model(n);
    }
    if (id == "cp1") return fubini_study_cp1();
    if (id.rfind("cpn:", 0) == 0) return fubini_study_cpn(std::stoul(id.substr(4)));
    if (id == "disk") return poincare_disk();
    throw argument_error("unknown model '" + id + "' (expected flatN|cp1|cpn:N|disk)");
}

// Seeded sample point in the polydisk of the given radius, intersected with
// the model domain.
inline ChartPoint sample_point(const KahlerModel& m, Rng& rng, real radius = 0.8L) {
    for (int tries = 0; tries < 1000; ++tries) {
        ChartPoint p(rng.complex_vector(m.n, radius), rng.complex_vector(m.n, radius));
        if (m.in_domain(p)) return p;
    }
    throw domain_error(m.name + ": could not sample the domain");
}

inline ChartPoint sample_diagonal_point(const KahlerModel& m, Rng& rng, real radius = 0.8L) {
    for (int tries = 0; tries < 1000; ++tries) {
        ChartPoint p = diagonal_point(rng.complex_vector(m.n, radius));
        if (m.in_domain(p)) return p;
    }
    throw domain_error(m.name + ": could not sample the diagonal");
}

// Hermiticity, positivity and holomorphy checks on random samples.
inline ValidationReport validate_model(const KahlerModel& m, std::size_t samples,
                                       std::uint64_t seed) {
    if (samples < 1) throw argument_error("validate_model: samples >= 1 required");
    Rng rng(seed);
    const std::size_t n = m.n;

    real herm_defect = 0;
    real min_eig = std::numeric_limits<real>::max();
    real antiholo = 0;

    for (std::size_t s = 0; s < samples; ++s) {
        // diagonal sample: restriction must be a positive Hermitian metric
        const ChartPoint d = sample_diagonal_point(m, rng);
        const auto hd = m.metric_values(d);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                herm_defect = std::max(herm_defect,
                                       std::abs(hd[k * n + j] - std::conj(hd[j * n + k])));
        const auto eig = hermitian_eigenvalues(hd, n);
        for (const real e : eig) min_eig = std::min(min_eig, e);

        // generic sample: coefficients must be holomorphic in (z, w)
        const ChartPoint p = sample_point(m, rng);
        const auto jets = m.metric_jets(p);
        for (const auto& jet : jets)
            for (std::size_t a = 2 * n; a < 4 * n; ++a)
                antiholo = std::max(antiholo, std::abs(jet.grad(a)));
    }

    ValidationReport rep;
    rep.add(CheckRecord::at_most("hermitian-on-diagonal",
                                 "h_{k jbar} = conj(h_{j kbar}) at w = conj(z)", herm_defect,
                                 1e-10L));
    rep.add(CheckRecord::witness("positive-definite-on-diagonal",
                                 "min eigenvalue of h(z, conj z) > 0", min_eig, 1e-10L));
    rep.add(CheckRecord::at_most("holomorphic-coefficients",
                                 "d h^c / d conj(z), d h^c / d conj(w) = 0", antiholo, 1e-6L));
    return rep;
}

}  // namespace kahlerc
