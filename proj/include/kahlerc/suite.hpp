#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "kahlerc/bilag.hpp"
#include "kahlerc/connection.hpp"
#include "kahlerc/eguchi.hpp"
#include "kahlerc/flows.hpp"
#include "kahlerc/models.hpp"
#include "kahlerc/quaternion.hpp"
#include "kahlerc/report.hpp"

// Deterministic identity-check runner over all modules. Every check draws
// its own points from a generator seeded with the configured seed, so
// records are independent of each other and reports are reproducible
// byte-for-byte given (model, suites, samples, seed).

namespace kahlerc {

struct SuiteConfig {
    std::string model = "cp1";
    std::vector<std::string> suites = {"all"};
    std::size_t samples = 100;
    std::uint64_t seed = 7;
    std::map<std::string, double> tol_overrides;
};

struct SuiteReport {
    SuiteConfig config;
    ValidationReport checks;

    bool pass() const { return checks.pass(); }
};

inline nlohmann::json to_json(const SuiteReport& rep, bool with_time = true) {
    nlohmann::json suites = nlohmann::json::array();
    for (const auto& s : rep.config.suites) suites.push_back(s);
    nlohmann::json tols = nlohmann::json::object();
    for (const auto& [k, v] : rep.config.tol_overrides) tols[k] = v;
    nlohmann::json cfg{{"model", rep.config.model},
                       {"suites", suites},
                       {"samples", rep.config.samples},
                       {"seed", rep.config.seed},
                       {"tol_overrides", tols}};
    nlohmann::json j = to_json(rep.checks, with_time);
    j["config"] = cfg;
    return j;
}

namespace detail {

struct Check {
    std::string name;
    std::string anchor;
    real tol;
    bool at_least;
    std::function<real()> run;
};

// random vector field with holomorphic polynomial components of degree <= 2
inline VectorField random_poly_field(std::size_t n, Rng& rng, bool vertical_only = false,
                                     bool horizontal_only = false) {
    VectorField X = TensorField::vector_field(n);
    const std::size_t h = 2 * n;
    for (std::size_t comp = 0; comp < h; ++comp) {
        if (vertical_only && comp < n) continue;
        if (horizontal_only && comp >= n) continue;
        const auto c0 = rng.complex_in_disk(1);
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

inline VectorField project_field(const VectorField& X, bool vertical) {
    const std::size_t n = X.n();
    VectorField out = TensorField::vector_field(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t comp = vertical ? n + j : j;
        if (X.fn({comp})) out.set({comp}, X.fn({comp}));
        const std::size_t conj_comp = vertical ? 3 * n + j : 2 * n + j;
        if (X.fn({conj_comp})) out.set({conj_comp}, X.fn({conj_comp}));
    }
    return out;
}

inline TensorValue project_value(const TensorValue& v, bool vertical) {
    const std::size_t n = v.n();
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

// shared per-point quaternion data, computed once on first use
struct QuatCache {
    std::vector<ChartPoint> points;
    std::vector<QuaternionFrame> frames;
    std::vector<BiLagrangianPackage> packages;
    bool ready = false;

    void ensure(const KahlerModel& m, std::size_t samples, std::uint64_t seed) {
        if (ready) return;
        Rng rng(seed);
        for (std::size_t s = 0; s < samples; ++s) {
            const ChartPoint p = sample_point(m, rng);
            points.push_back(p);
            frames.push_back(hh_frame(m, p));
            packages.push_back(bilagrangian_package(m, p));
        }
        ready = true;
    }
};

}  // namespace detail

inline SuiteReport run_suite(const SuiteConfig& cfg) {
    if (cfg.samples < 1) throw argument_error("suite: samples >= 1 required");
    const KahlerModel model = build_model(cfg.model);
    const std::size_t n = model.n;

    static const std::set<std::string> known = {"bilag",      "connection", "flows",
                                                "quaternion", "eguchi",     "cotangent"};
    std::set<std::string> enabled;
    for (const auto& s : cfg.suites) {
        if (s == "all") {
            enabled = known;
        } else if (known.count(s)) {
            enabled.insert(s);
        } else {
            throw argument_error("suite: unknown suite '" + s + "'");
        }
    }

    const std::size_t samples = cfg.samples;
    const std::uint64_t seed = cfg.seed;
    const bool is_cp1 = (model.name == "cp1");
    std::vector<detail::Check> checks;
    auto add = [&checks](std::string name, std::string anchor, real tol,
                         std::function<real()> run, bool at_least = false) {
        checks.push_back({std::move(name), std::move(anchor), tol, at_least, std::move(run)});
    };

    // ---- bilag ------------------------------------------------------------
    if (enabled.count("bilag")) {
        add("bilag-structure-relations", "H^2 = J^2 = -1, F = HJ = JH, F^2 = 1, tr F = 0",
            1e-12L, [model, samples, seed, n]() {
                Rng rng(seed);
                const TensorValue id = TensorValue::identity(n);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s) {
                    const auto pkg = bilagrangian_package(model, sample_point(model, rng));
                    d = std::max(d, compose(pkg.H, pkg.H).max_abs_diff(id * cplx(-1)));
                    d = std::max(d, compose(pkg.J, pkg.J).max_abs_diff(id * cplx(-1)));
                    d = std::max(d, compose(pkg.F, pkg.F).max_abs_diff(id));
                    d = std::max(d, compose(pkg.H, pkg.J).max_abs_diff(compose(pkg.J, pkg.H)));
                    d = std::max(d, compose(pkg.H, pkg.J).max_abs_diff(pkg.F));
                    d = std::max(d, std::abs(pkg.F.trace()));
                }
                return d;
            });

        add("bilag-F-eigenvectors", "F = +1 on d/dw (vertical), -1 on d/dz", 1e-12L,
            [model, n]() {
                const TensorValue F = paracomplex_structure(n);
                real d = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    d = std::max(d, apply(F, frame_vector(n, n + j))
                                        .max_abs_diff(frame_vector(n, n + j)));
                    d = std::max(d, apply(F, frame_vector(n, j))
                                        .max_abs_diff(frame_vector(n, j) * cplx(-1)));
                }
                return d;
            });

        add("bilag-metric-compatibility", "g = omega(F., .) = -i g0^c, g symmetric", 1e-12L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    const auto pkg = bilagrangian_package(model, p);
                    const auto h = model.metric_values(p);
                    TensorValue expected = TensorValue::bilinear(n);
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t k = 0; k < n; ++k) {
                            const cplx c = cplx(0, -0.5L) * h[j * n + k];
                            expected.at({j, n + k}) += c;
                            expected.at({n + k, j}) += c;
                        }
                    d = std::max(d, pkg.g.max_abs_diff(expected));
                    for (std::size_t a = 0; a < 4 * n; ++a)
                        for (std::size_t b = 0; b < 4 * n; ++b)
                            d = std::max(d, std::abs(pkg.g.at({a, b}) - pkg.g.at({b, a})));
                }
                return d;
            });

        add("bilag-compat-bicomplex", "omega(u, v) = g(Fu, v)", 1e-12L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    const auto pkg = bilagrangian_package(model, p);
                    const TensorValue u = real_tangent(n, rng.complex_vector(n, 1),
                                                       rng.complex_vector(n, 1));
                    const TensorValue v = real_tangent(n, rng.complex_vector(n, 1),
                                                       rng.complex_vector(n, 1));
                    d = std::max(d, std::abs(pkg.omega(u, v) - pkg.g(apply(pkg.F, u), v)));
                }
                return d;
            });

        add("bilag-lagrangian-foliations", "omega vanishes on each foliation", 1e-12L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s) {
                    const auto pkg = bilagrangian_package(model, sample_point(model, rng));
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t k = 0; k < n; ++k) {
                            d = std::max(d, std::abs(pkg.omega(frame_vector(n, n + j),
                                                               frame_vector(n, n + k))));
                            d = std::max(d, std::abs(pkg.omega(frame_vector(n, j),
                                                               frame_vector(n, k))));
                        }
                }
                return d;
            });

        add("bilag-omega-closed", "d omega0^c = 0, d omega1 = d omega2 = 0", 1e-10L,
            [model, samples, seed]() {
                Rng rng(seed);
                const FormField omega = complex_symplectic_field(model);
                const FormField w1 = form_real_part(omega);
                const FormField w2 = form_imag_part(omega);
                real d = 0;
                const std::size_t count = std::min<std::size_t>(samples, 25);
                for (std::size_t s = 0; s < count; ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    d = std::max(d, exterior_derivative(omega, p).norm_inf());
                    d = std::max(d, exterior_derivative(w1, p).norm_inf());
                    d = std::max(d, exterior_derivative(w2, p).norm_inf());
                }
                return d;
            });

        add("bilag-reality-parts", "omega1, omega2, g1, g2 satisfy the reality predicate",
            1e-12L, [model, samples, seed]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s) {
                    const auto pkg = bilagrangian_package(model, sample_point(model, rng));
                    d = std::max(d, pkg.omega1.reality_defect());
                    d = std::max(d, pkg.omega2.reality_defect());
                    d = std::max(d, pkg.g1.reality_defect());
                    d = std::max(d, pkg.g2.reality_defect());
                }
                return d;
            });

        add("bilag-g1-g2-compatibility", "g1(u, v) = g2(Ju, v)", 1e-10L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s) {
                    const auto pkg = bilagrangian_package(model, sample_point(model, rng));
                    const TensorValue u = real_tangent(n, rng.complex_vector(n, 1),
                                                       rng.complex_vector(n, 1));
                    const TensorValue v = real_tangent(n, rng.complex_vector(n, 1),
                                                       rng.complex_vector(n, 1));
                    d = std::max(d, std::abs(pkg.g1(u, v) - pkg.g2(apply(pkg.J, u), v)));
                }
                return d;
            });

        add("bilag-neutral-signature", "g1, g2 have signature (2n, 2n)", 0,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real bad = 0;
                const std::size_t count = std::min<std::size_t>(samples, 25);
                for (std::size_t s = 0; s < count; ++s) {
                    const auto pkg = bilagrangian_package(model, sample_point(model, rng));
                    for (const TensorValue* t : {&pkg.g1, &pkg.g2}) {
                        const auto [pos, neg] = signature(real_gram_matrix(*t), 4 * n);
                        bad += std::abs(int(pos) - int(2 * n)) + std::abs(int(neg) - int(2 * n));
                    }
                }
                return bad;
            });

        add("bilag-diagonal-pullback", "omega0^c pulls back to omega0 on the diagonal", 1e-10L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s) {
                    const ChartPoint p = sample_diagonal_point(model, rng);
                    const TensorValue omega = complex_symplectic_form(model, p);
                    const DiagonalKahlerData data = diagonal_kahler_data(model, p);
                    d = std::max(d, diagonal_pullback(omega, n).max_abs_diff(data.omega0));
                }
                return d;
            });
    }

    // ---- connection --------------------------------------------------------
    if (enabled.count("connection")) {
        add("connection-gamma-symmetric", "Gamma^a_{bc} = Gamma^a_{cb}", 0,
            [model, samples, seed]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 25); ++s)
                    d = std::max(d, christoffel(model, sample_point(model, rng))
                                        .max_symmetry_defect());
                return d;
            });

        add("connection-torsion-free", "nabla_X Y - nabla_Y X - [X, Y] = 0", 1e-8L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 50); ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    const VectorField X = detail::random_poly_field(n, rng);
                    const VectorField Y = detail::random_poly_field(n, rng);
                    const TensorValue t = covariant_derivative_vector(model, X, Y, p) -
                                          covariant_derivative_vector(model, Y, X, p) -
                                          lie_bracket(X, Y, p);
                    d = std::max(d, t.norm_inf());
                }
                return d;
            });

        add("connection-parallel-tensors", "nabla g = nabla omega = nabla F = nabla J = 0",
            1e-8L, [model, samples, seed, n]() {
                Rng rng(seed);
                const TensorField g = bilagrangian_metric_field(model);
                const FormField omega = complex_symplectic_field(model);
                const TensorField F = TensorField::constant(n, paracomplex_structure(n));
                const TensorField J = TensorField::constant(n, ambient_complex_structure(n));
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 25); ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    for (std::size_t dir = 0; dir < 4 * n; ++dir) {
                        d = std::max(d, covariant_derivative(model, g, dir, p).norm_inf());
                        d = std::max(d, covariant_derivative(model, omega, dir, p).norm_inf());
                        d = std::max(d, covariant_derivative(model, F, dir, p).norm_inf());
                        d = std::max(d, covariant_derivative(model, J, dir, p).norm_inf());
                    }
                }
                return d;
            });

        add("connection-curvature-same-leaf", "R(X, Y) = 0 for X, Y in one foliation", 1e-12L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 50); ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    for (const bool vertical : {true, false}) {
                        TensorValue X = TensorValue::vector(n), Y = TensorValue::vector(n);
                        for (std::size_t j = 0; j < n; ++j) {
                            const std::size_t base = vertical ? n : 0;
                            X.at({base + j}) = rng.complex_in_disk(1);
                            Y.at({base + j}) = rng.complex_in_disk(1);
                        }
                        d = std::max(d, curvature_endomorphism(model, p, X, Y).endo.norm_inf());
                    }
                }
                return d;
            });

        add("connection-curvature-preserves-foliations",
            "R(X1, Y2) maps each foliation to itself", 1e-8L, [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 50); ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    TensorValue X = TensorValue::vector(n), Y = TensorValue::vector(n);
                    for (std::size_t j = 0; j < n; ++j) {
                        X.at({n + j}) = rng.complex_in_disk(1);  // vertical
                        Y.at({j}) = rng.complex_in_disk(1);      // horizontal
                    }
                    const CurvatureValue R = curvature_endomorphism(model, p, X, Y);
                    TensorValue Zv = TensorValue::vector(n), Zh = TensorValue::vector(n);
                    for (std::size_t j = 0; j < n; ++j) {
                        Zv.at({n + j}) = rng.complex_in_disk(1);
                        Zh.at({j}) = rng.complex_in_disk(1);
                    }
                    const TensorValue Rv = R(Zv);
                    const TensorValue Rh = R(Zh);
                    d = std::max(d, detail::project_value(Rv, false).norm_inf());
                    d = std::max(d, detail::project_value(Rh, true).norm_inf());
                }
                return d;
            });

        add("connection-bilag-formula",
            "nabla_X Y = B1(X1, Y1) + B2(X2, Y2) + [X1, Y2]_2 + [X2, Y1]_1", 1e-8L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 20); ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    const VectorField X = detail::random_poly_field(n, rng);
                    const VectorField Y = detail::random_poly_field(n, rng);
                    const VectorField X1 = detail::project_field(X, true);
                    const VectorField X2 = detail::project_field(X, false);
                    const VectorField Y1 = detail::project_field(Y, true);
                    const VectorField Y2 = detail::project_field(Y, false);
                    const TensorValue rhs =
                        bott_partial_derivative(model, X1, Y1, p) +
                        bott_partial_derivative(model, X2, Y2, p) +
                        detail::project_value(lie_bracket(X1, Y2, p), false) +
                        detail::project_value(lie_bracket(X2, Y1, p), true);
                    const TensorValue lhs = covariant_derivative_vector(model, X, Y, p);
                    d = std::max(d, lhs.max_abs_diff(rhs));
                }
                return d;
            });

        if (is_cp1) {
            add("connection-cp1-christoffel", "Gamma^z_{zz} = -2w/(1+zw), Gamma^w_{ww} = -2z/(1+zw)",
                1e-10L, [model, samples, seed]() {
                    Rng rng(seed);
                    real d = 0;
                    for (std::size_t s = 0; s < samples; ++s) {
                        const ChartPoint p = sample_point(model, rng);
                        const ConnectionTable t = christoffel(model, p);
                        const auto [gz, gw] = cp1_christoffel_closed_form(p);
                        d = std::max(d, std::abs(t.value(0, 0, 0) - gz));
                        d = std::max(d, std::abs(t.value(1, 1, 1) - gw));
                        d = std::max(d, std::abs(t.value(0, 0, 1)));
                        d = std::max(d, std::abs(t.value(1, 0, 1)));
                        d = std::max(d, std::abs(t.value(0, 1, 1)));
                        d = std::max(d, std::abs(t.value(1, 0, 0)));
                    }
                    return d;
                });

            add("connection-cartan-orthonormal", "g(E_i, E_j) = delta_ij", 1e-10L,
                [model, samples, seed]() {
                    Rng rng(seed);
                    const CartanCoframe cf = cartan_coframe_cp1();
                    real d = 0;
                    for (std::size_t s = 0; s < samples; ++s) {
                        const ChartPoint p = sample_point(model, rng);
                        const TensorValue g = bilagrangian_metric(model, p);
                        const TensorValue e1 = cf.E1.eval(p);
                        const TensorValue e2 = cf.E2.eval(p);
                        d = std::max(d, std::abs(g(e1, e1) - cplx(1)));
                        d = std::max(d, std::abs(g(e2, e2) - cplx(1)));
                        d = std::max(d, std::abs(g(e1, e2)));
                    }
                    return d;
                });

            add("connection-cartan-structural", "d chi^1 = chi^2 ^ omega_2^1 (and swapped)",
                1e-8L, [model, samples, seed]() {
                    Rng rng(seed);
                    const CartanCoframe cf = cartan_coframe_cp1();
                    real d = 0;
                    for (std::size_t s = 0; s < samples; ++s) {
                        const ChartPoint p = sample_point(model, rng);
                        const TensorValue w21 = cf.omega21.eval(p);
                        const TensorValue chi1 = cf.chi1.eval(p);
                        const TensorValue chi2 = cf.chi2.eval(p);
                        d = std::max(d, exterior_derivative(cf.chi1, p)
                                            .max_abs_diff(wedge(chi2, w21)));
                        d = std::max(d, exterior_derivative(cf.chi2, p)
                                            .max_abs_diff(wedge(chi1, w21 * cplx(-1))));
                    }
                    return d;
                });

            add("connection-cartan-curvature", "d omega_2^1 = 4 omega0^c (curvature 4)", 1e-8L,
                [model, samples, seed]() {
                    Rng rng(seed);
                    const CartanCoframe cf = cartan_coframe_cp1();
                    real d = 0;
                    for (std::size_t s = 0; s < samples; ++s) {
                        const ChartPoint p = sample_point(model, rng);
                        const TensorValue expected =
                            complex_symplectic_form(model, p) * cplx(4);
                        d = std::max(d,
                                     exterior_derivative(cf.omega21, p).max_abs_diff(expected));
                    }
                    return d;
                });
        }
    }

    // ---- flows --------------------------------------------------------------
    if (enabled.count("flows")) {
        add("flows-geodesic-conservation", "g(gamma', gamma') constant along geodesics", 1e-8L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 10); ++s) {
                    for (int tries = 0; tries < 50; ++tries) {
                        const ChartPoint p = sample_point(model, rng);
                        const GeodesicState s0(p, rng.complex_vector(n, 0.3L),
                                               rng.complex_vector(n, 0.3L));
                        try {
                            const auto rows = geodesic_trajectory(model, s0, 0.5L, 1000, 10);
                            const TensorValue g0v = bilagrangian_metric(model, p);
                            const TensorValue v0 = real_tangent(n, s0.vel_z, s0.vel_w);
                            const cplx e0 = g0v(v0, v0);
                            for (const auto& [t, st] : rows) {
                                const TensorValue g = bilagrangian_metric(model, st.position);
                                const TensorValue v = real_tangent(n, st.vel_z, st.vel_w);
                                d = std::max(d, std::abs(g(v, v) - e0));
                            }
                            break;
                        } catch (const domain_error&) {
                            continue;
                        }
                    }
                }
                return d;
            });

        add("flows-vertical-leaves-geodesic", "vertical geodesics stay on their leaf", 1e-9L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 10); ++s) {
                    for (int tries = 0; tries < 50; ++tries) {
                        const ChartPoint p = sample_point(model, rng);
                        const GeodesicState s0(p, std::vector<cplx>(n, cplx(0)),
                                               rng.complex_vector(n, 0.3L));
                        try {
                            const GeodesicState end = integrate_geodesic(model, s0, 0.5L, 500);
                            for (std::size_t j = 0; j < n; ++j) {
                                d = std::max(d, std::abs(end.position.z[j] - p.z[j]));
                                d = std::max(d, std::abs(end.vel_z[j]));
                            }
                            break;
                        } catch (const domain_error&) {
                            continue;
                        }
                    }
                }
                return d;
            });

        add("flows-transport-path-independence",
            "leafwise transport depends only on endpoints", 1e-7L, [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 20); ++s) {
                    for (int tries = 0; tries < 50; ++tries) {
                        const cplx z0 = rng.complex_in_disk(0.8L);
                        const cplx w0 = rng.complex_in_disk(0.8L);
                        const cplx w1 = rng.complex_in_disk(0.8L);
                        const ChartPoint from({z0}, {w0}), to({z0}, {w1});
                        if (!model.in_domain(from) || !model.in_domain(to)) continue;
                        TensorValue T = TensorValue::bilinear(n);
                        std::vector<std::size_t> idx(2, 0);
                        do {
                            T.at(idx) = rng.complex_in_disk(1);
                        } while (T.advance(idx));
                        try {
                            const TensorValue a = transport_map(model,
                                straight_path(from, to, 1000)).apply(T);
                            const TensorValue b = transport_map(model,
                                vertical_detour_path(z0, w0, w1, cplx(0, 0.25L) * (w1 - w0),
                                                     1000)).apply(T);
                            d = std::max(d, a.max_abs_diff(b));
                            break;
                        } catch (const domain_error&) {
                            continue;
                        }
                    }
                }
                return d;
            });

        if (is_cp1) {
            add("flows-geodesic-closed-form",
                "w(t) = (at + w0(1+z0 w0)) / (-z0 a t + 1 + z0 w0)", 1e-7L,
                [model, samples, seed]() {
                    Rng rng(seed);
                    real d = 0;
                    for (std::size_t s = 0; s < std::min<std::size_t>(samples, 20); ++s) {
                        for (int tries = 0; tries < 50; ++tries) {
                            const cplx z0 = rng.complex_in_disk(0.8L);
                            const cplx w0 = rng.complex_in_disk(0.8L);
                            const cplx a = rng.complex_in_disk(0.5L);
                            const ChartPoint p({z0}, {w0});
                            if (!model.in_domain(p)) continue;
                            try {
                                const GeodesicState end = integrate_geodesic(
                                    model, GeodesicState(p, {cplx(0)}, {a}), 0.5L, 2000);
                                const cplx expected = cp1_geodesic_closed_form(z0, w0, a, 0.5L);
                                d = std::max(d, std::abs(end.position.w[0] - expected));
                                break;
                            } catch (const domain_error&) {
                                continue;
                            }
                        }
                    }
                    return d;
                });

            add("flows-transport-closed-form",
                "vertical transport factor ((1+z0 w1)/(1+z0 w0))^2", 1e-8L,
                [model, samples, seed, n]() {
                    Rng rng(seed);
                    real d = 0;
                    for (std::size_t s = 0; s < std::min<std::size_t>(samples, 20); ++s) {
                        const cplx z0 = rng.complex_in_disk(0.8L);
                        const cplx w0 = rng.complex_in_disk(0.8L);
                        const cplx w1 = rng.complex_in_disk(0.8L);
                        const ChartPoint from({z0}, {w0}), to({z0}, {w1});
                        if (!model.in_domain(from) || !model.in_domain(to)) continue;
                        const TransportMap map =
                            transport_map(model, straight_path(from, to, 1000));
                        const TensorValue out = map.apply(frame_vector(n, 1));
                        const cplx factor = cp1_transport_factor(z0, w0, w1);
                        d = std::max(d, std::abs(out.at({1}) - factor));
                        d = std::max(d, std::abs(out.at({0})));
                        const TensorValue dz = map.apply(frame_vector(n, 0));
                        d = std::max(d, dz.max_abs_diff(frame_vector(n, 0)));
                    }
                    return d;
                });

            add("flows-affine-exp-chart", "exp chart matches w -> -1/(z0(1+z0 w))", 1e-6L,
                [model, samples, seed]() {
                    Rng rng(seed);
                    real d = 0;
                    for (std::size_t s = 0; s < std::min<std::size_t>(samples, 20); ++s) {
                        cplx z0 = rng.complex_in_disk(0.8L);
                        if (std::abs(z0) < 0.1L) z0 += cplx(0.3L);
                        const cplx a = rng.complex_in_disk(0.3L);
                        const AffineChartCP1 chart(z0);
                        const GeodesicState end = integrate_geodesic(
                            model, GeodesicState(ChartPoint({z0}, {cplx(0)}), {cplx(0)}, {a}),
                            1.0L, 2000);
                        const cplx lhs = chart.chart(end.position.w[0]);
                        const cplx rhs = chart.chart(cplx(0)) + a;
                        d = std::max(d, std::abs(lhs - rhs));
                    }
                    return d;
                });

            add("flows-homography-group", "M_a M_b = M_{a+b}, M_a = P shear(a) P^{-1}", 1e-12L,
                [samples, seed]() {
                    Rng rng(seed);
                    real d = 0;
                    for (std::size_t s = 0; s < std::min<std::size_t>(samples, 50); ++s) {
                        cplx z0 = rng.complex_in_disk(0.8L);
                        if (std::abs(z0) < 0.1L) z0 += cplx(0.3L);
                        const AffineChartCP1 chart(z0);
                        const cplx a = rng.complex_in_disk(1);
                        const cplx b = rng.complex_in_disk(1);
                        d = std::max(d, (chart.homography(a) * chart.homography(b))
                                            .max_abs_diff(chart.homography(a + b)));
                        d = std::max(d, chart.homography(a).max_abs_diff(
                                            chart.homography_via_conjugator(a)));
                    }
                    return d;
                });
        }
    }

    // ---- quaternion -----------------------------------------------------------
    if (enabled.count("quaternion")) {
        auto cache = std::make_shared<detail::QuatCache>();
        const std::size_t qsamples = std::min<std::size_t>(samples, 100);

        add("quaternion-relations",
            "quaternionic + biquaternionic + para-quaternionic relations, g-orthogonality",
            1e-10L, [model, cache, qsamples, seed]() {
                cache->ensure(model, qsamples, seed);
                real d = 0;
                for (std::size_t i = 0; i < cache->points.size(); ++i) {
                    const auto rep = relation_report(model, cache->points[i], cache->frames[i],
                                                     cache->packages[i],
                                                     /*with_dwj_estimate=*/false);
                    for (const char* name :
                         {"quaternionic-relations", "biquaternionic-relations",
                          "para-quaternionic-relations", "g-orthogonality"})
                        if (const CheckRecord* r = rep.find(name)) d = std::max(d, r->defect);
                }
                return d;
            });

        add("quaternion-admissibility", "omega_I - i omega_K = omega0^c", 1e-9L,
            [model, cache, qsamples, seed]() {
                cache->ensure(model, qsamples, seed);
                real d = 0;
                for (std::size_t i = 0; i < cache->points.size(); ++i) {
                    const TensorValue lhs =
                        cache->frames[i].omegaI - cache->frames[i].omegaK * cplx(0, 1);
                    d = std::max(d, lhs.max_abs_diff(cache->packages[i].omega));
                }
                return d;
            });

        add("quaternion-omega-closedness", "d omega_I = d omega_K = 0", 1e-8L,
            [model, cache, qsamples, seed]() {
                cache->ensure(model, qsamples, seed);
                const FormField omega = complex_symplectic_field(model);
                const FormField re = form_real_part(omega);
                const FormField im = form_imag_part(omega);
                real d = 0;
                const std::size_t count = std::min<std::size_t>(cache->points.size(), 25);
                for (std::size_t i = 0; i < count; ++i) {
                    d = std::max(d, exterior_derivative(re, cache->points[i]).norm_inf());
                    d = std::max(d, exterior_derivative(im, cache->points[i]).norm_inf());
                }
                return d;
            });

        add("quaternion-foliation-agreement", "F = HJ equals the bi-Lagrangian F", 0,
            [model, cache, qsamples, seed]() {
                cache->ensure(model, qsamples, seed);
                real d = 0;
                for (std::size_t i = 0; i < cache->points.size(); ++i)
                    d = std::max(d, cache->frames[i].F.max_abs_diff(cache->packages[i].F));
                return d;
            });

        add("quaternion-transport-uniqueness", "two leaf paths produce the same frame", 1e-7L,
            [model, samples, seed, n]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 10); ++s) {
                    const ChartPoint p = sample_point(model, rng);
                    const ChartPoint start = diagonal_point(p.z);
                    if (!model.in_domain(start)) continue;
                    const QuaternionFrame a =
                        hh_frame_along(model, straight_path(start, p, 1500));
                    const QuaternionFrame b = hh_frame_along(
                        model, vertical_detour_path(p.z[0], start.w[0], p.w[0],
                                                    cplx(0, 0.2L) * (p.w[0] - start.w[0]),
                                                    1500));
                    d = std::max(d, a.g.max_abs_diff(b.g));
                    d = std::max(d, a.I.max_abs_diff(b.I));
                    d = std::max(d, a.K.max_abs_diff(b.K));
                }
                return d;
            });

        add("quaternion-diagonal-restriction", "g, omega_I, I restrict to g0, omega0, I0",
            1e-10L, [model, samples, seed]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 25); ++s) {
                    const ChartPoint p = sample_diagonal_point(model, rng);
                    const QuaternionFrame f = diagonal_hh_frame(model, p.z);
                    const auto rep = relation_report(model, p, f,
                                                     bilagrangian_package(model, p),
                                                     /*with_dwj_estimate=*/false);
                    for (const char* name :
                         {"diagonal-restriction-g", "diagonal-restriction-omegaI",
                          "diagonal-restriction-I"})
                        if (const CheckRecord* r = rep.find(name)) d = std::max(d, r->defect);
                }
                return d;
            });

        if (is_cp1) {
            add("quaternion-closed-form-match", "transported frame matches the printed tensors",
                1e-7L, [model, cache, qsamples, seed]() {
                    cache->ensure(model, qsamples, seed);
                    real d = 0;
                    for (std::size_t i = 0; i < cache->points.size(); ++i)
                        d = std::max(d, cp1_frame_defect(cache->frames[i], cache->points[i]));
                    return d;
                });

            add("quaternion-dwJ-nonzero", "||d omega_J|| > 0 at the witness point", 1e-2L,
                []() {
                    const ChartPoint witness(cplx(0.3L), cplx(0, 0.1L));
                    return exterior_derivative(cp1_omega_j_field(), witness).norm_inf();
                },
                /*at_least=*/true);
        } else if (model.name.rfind("flat", 0) == 0) {
            add("quaternion-dwJ-flat", "d omega_J = 0 (hyper-Kaehler case)", 1e-12L,
                [model, seed, n]() {
                    Rng rng(seed);
                    const ChartPoint p = sample_point(model, rng);
                    const QuaternionFrame f = hh_frame(model, p);
                    const FormField wj = TensorField::constant(n, f.omegaJ);
                    return exterior_derivative(wj, p).norm_inf();
                });
        }
    }

    // ---- eguchi (fixed T*CP^1 geometry, model-independent) --------------------
    if (enabled.count("eguchi")) {
        add("eguchi-monge-ampere", "phi_zz phi_uu - phi_uz phi_zu = 1", 1e-10L, [samples, seed]() {
            Rng rng(seed);
            real d = 0;
            for (std::size_t s = 0; s < samples; ++s) {
                const CotangentPoint p{rng.complex_in_disk(2), rng.complex_in_disk(2)};
                d = std::max(d, monge_ampere_residual(p));
            }
            return d;
        });

        add("eguchi-ode-residual", "8 r^2 y' y'' + 8 r (y')^2 = 1", 1e-10L, [samples]() {
            real d = 0;
            const std::size_t count = std::max<std::size_t>(samples, 50);
            for (std::size_t i = 0; i < count; ++i) {
                const real t = real(i) / real(count - 1);
                const real r = std::pow(real(10), -6 + 9 * t);  // 1e-6 .. 1e3
                d = std::max(d, eh_potential(r).ode_residual());
            }
            return d;
        });

        add("eguchi-wedge-identity", "omega ^ conj(omega) = 2 omega_I ^ omega_I", 1e-9L,
            [samples, seed]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s) {
                    const CotangentPoint p{rng.complex_in_disk(1.5L), rng.complex_in_disk(1.5L)};
                    d = std::max(d, eh_wedge_identity_defect(p));
                }
                return d;
            });

        add("eguchi-u1-invariance", "fiber rotation is a g-isometry", 1e-9L, [samples, seed]() {
            Rng rng(seed);
            real d = 0;
            for (std::size_t s = 0; s < std::min<std::size_t>(samples, 50); ++s) {
                const CotangentPoint p{rng.complex_in_disk(1.5L), rng.complex_in_disk(1.5L)};
                d = std::max(d, eh_u1_invariance_defect(p, rng.uniform(0, 6.28L)));
            }
            return d;
        });

        add("eguchi-zero-section", "g restricts to the Fubini-Study metric", 1e-10L,
            [samples, seed]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < samples; ++s)
                    d = std::max(d, eh_zero_section_defect(rng.complex_in_disk(1.5L)));
                return d;
            });

        add("eguchi-forms-closed", "d omega_I = d omega_J = d omega_K = 0", 1e-8L,
            [samples, seed]() {
                Rng rng(seed);
                const FormField wi = eh_omega_i_field();
                const FormField wj = eh_omega_j_field();
                const FormField wk = eh_omega_k_field();
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 25); ++s) {
                    const ChartPoint p(rng.complex_in_disk(1.5L), rng.complex_in_disk(1.5L));
                    d = std::max(d, exterior_derivative(wi, p).norm_inf());
                    d = std::max(d, exterior_derivative(wj, p).norm_inf());
                    d = std::max(d, exterior_derivative(wk, p).norm_inf());
                }
                return d;
            });

        add("eguchi-quaternionic-relations", "I^2 = J^2 = K^2 = -1, IJ = -JI = K, g-orthogonal",
            1e-10L, [samples, seed]() {
                Rng rng(seed);
                const TensorValue id = TensorValue::identity(1);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 50); ++s) {
                    const CotangentPoint p{rng.complex_in_disk(1.5L), rng.complex_in_disk(1.5L)};
                    const EHFrame f = eh_frame(p);
                    d = std::max(d, compose(f.I, f.I).max_abs_diff(id * cplx(-1)));
                    d = std::max(d, compose(f.J, f.J).max_abs_diff(id * cplx(-1)));
                    d = std::max(d, compose(f.K, f.K).max_abs_diff(id * cplx(-1)));
                    d = std::max(d, compose(f.I, f.J).max_abs_diff(f.K));
                    d = std::max(d, compose(f.J, f.I).max_abs_diff(f.K * cplx(-1)));
                    d = std::max(d, detail::endo_defect(f.omegaI, kahler_form_of(f.g, f.I)));
                    d = std::max(d, detail::orthogonality_defect(f.g, f.J));
                }
                return d;
            });

        add("eguchi-jet-consistency", "printed partials equal jets of phi = y(r)", 1e-8L,
            [samples, seed]() {
                Rng rng(seed);
                real d = 0;
                for (std::size_t s = 0; s < std::min<std::size_t>(samples, 50); ++s) {
                    CotangentPoint p{rng.complex_in_disk(1.5L), rng.complex_in_disk(1.5L)};
                    if (std::abs(p.u) < 0.05L) p.u += cplx(0.2L);
                    d = std::max(d, eh_jet_consistency_defect(p));
                }
                return d;
            });
    }

    // ---- cotangent -------------------------------------------------------------
    if (enabled.count("cotangent")) {
        add("cotangent-omega-is-dxi", "omega = d(p_i dq^i)", 0, [samples, seed]() {
            real d = 0;
            for (const std::size_t dim : {1u, 2u}) {
                const auto rep = cotangent_canonical_check(dim, std::min<std::size_t>(samples, 25),
                                                           seed);
                if (const CheckRecord* r = rep.find("cotangent-omega-is-dxi"))
                    d = std::max(d, r->defect);
            }
            return d;
        });

        add("cotangent-bott-componentwise",
            "Bott derivative = componentwise fiber derivative", 1e-9L, [samples, seed]() {
                real d = 0;
                for (const std::size_t dim : {1u, 2u}) {
                    const auto rep = cotangent_canonical_check(
                        dim, std::min<std::size_t>(samples, 50), seed);
                    if (const CheckRecord* r = rep.find("cotangent-bott-componentwise"))
                        d = std::max(d, r->defect);
                }
                return d;
            });
    }

    // execute with per-record timing, apply overrides, sort deterministically
    SuiteReport report;
    report.config = cfg;
    for (auto& chk : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        const real defect = chk.run();
        const auto t1 = std::chrono::steady_clock::now();
        real tol = chk.tol;
        if (const auto it = cfg.tol_overrides.find(chk.name); it != cfg.tol_overrides.end())
            tol = it->second;
        CheckRecord r = chk.at_least ? CheckRecord::witness(chk.name, chk.anchor, defect, tol)
                                     : CheckRecord::at_most(chk.name, chk.anchor, defect, tol);
        r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        report.checks.add(std::move(r));
    }
    report.checks.sort_by_name();
    return report;
}

}  // namespace kahlerc
