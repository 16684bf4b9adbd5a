#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "kahlerc/connection.hpp"
#include "kahlerc/linalg.hpp"
#include "kahlerc/models.hpp"

// Geodesic integration and parallel transport for the bi-Lagrangian
// connection, plus the CP^1 closed forms (geodesics, transport factors,
// affine leaf charts) used as integrator oracles.
//
// Integrators are fixed-step classical RK4 with a step-doubling error
// estimate; deterministic output matters more than adaptive efficiency here.

namespace kahlerc {

inline constexpr real kChartEscape = 1e8L;
inline constexpr int kDefaultSteps = 1000;

// Christoffel values only (no derivative propagation); the lean path for
// integrator right-hand sides.
struct GammaValues {
    std::size_t n;
    std::vector<cplx> v;  // [(k * 2n + a) * 2n + b]

    cplx at(std::size_t k, std::size_t a, std::size_t b) const {
        const std::size_t h = 2 * n;
        return v[(k * h + a) * h + b];
    }

    cplx full(std::size_t a, std::size_t b, std::size_t c) const {
        const std::size_t h = 2 * n;
        const bool ah = a < h, bh = b < h, ch = c < h;
        if (ah && bh && ch) return at(a, b, c);
        if (!ah && !bh && !ch) return std::conj(at(a - h, b - h, c - h));
        return cplx(0);
    }
};

inline GammaValues christoffel_values(const KahlerModel& m, const ChartPoint& p) {
    m.require_domain(p);
    const std::size_t n = m.n;
    const std::size_t h = 2 * n;
    const auto hj = m.h_c(p.frame());

    std::vector<cplx> g(h * h, cplx(0));
    std::vector<cplx> dg(h * h * h, cplx(0));  // dg[(a*h+b)*h+l] = d_l g_{ab}
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx c = cplx(0, -0.5L);
            g[j * h + (n + k)] = c * hj[j * n + k].value();
            g[(n + k) * h + j] = g[j * h + (n + k)];
            for (std::size_t l = 0; l < h; ++l) {
                const cplx d = c * hj[j * n + k].grad(l);
                dg[(j * h + (n + k)) * h + l] = d;
                dg[((n + k) * h + j) * h + l] = d;
            }
        }
    const auto ginv = inverse(g, h);

    GammaValues out{n, std::vector<cplx>(h * h * h, cplx(0))};
    for (std::size_t a = 0; a < h; ++a)
        for (std::size_t b = a; b < h; ++b)
            for (std::size_t k = 0; k < h; ++k) {
                cplx s(0);
                for (std::size_t l = 0; l < h; ++l)
                    s += ginv[k * h + l] * (dg[(b * h + l) * h + a] + dg[(a * h + l) * h + b] -
                                            dg[(a * h + b) * h + l]);
                s *= cplx(0.5L);
                out.v[(k * h + a) * h + b] = s;
                out.v[(k * h + b) * h + a] = s;
            }
    return out;
}

struct GeodesicState {
    ChartPoint position;
    std::vector<cplx> vel_z;  // holomorphic velocity components on dz^j
    std::vector<cplx> vel_w;  // and on dw^j; conjugates implied

    GeodesicState() = default;
    GeodesicState(ChartPoint pos, std::vector<cplx> pz, std::vector<cplx> qw)
        : position(std::move(pos)), vel_z(std::move(pz)), vel_w(std::move(qw)) {}
};

namespace detail {

using StateVec = std::vector<cplx>;

// one classical RK4 step of y' = f(t, y)
template <class Rhs>
inline StateVec rk4_step(const Rhs& f, real t, const StateVec& y, real h) {
    const StateVec k1 = f(t, y);
    StateVec y2(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y2[i] = y[i] + cplx(h / 2) * k1[i];
    const StateVec k2 = f(t + h / 2, y2);
    for (std::size_t i = 0; i < y.size(); ++i) y2[i] = y[i] + cplx(h / 2) * k2[i];
    const StateVec k3 = f(t + h / 2, y2);
    for (std::size_t i = 0; i < y.size(); ++i) y2[i] = y[i] + cplx(h) * k3[i];
    const StateVec k4 = f(t + h, y2);
    StateVec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = y[i] + cplx(h / 6) * (k1[i] + cplx(2) * k2[i] + cplx(2) * k3[i] + k4[i]);
    return out;
}

inline real state_diff(const StateVec& a, const StateVec& b) {
    real d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace detail

// geodesic equation x''^a + Gamma^a_{bc} x'^b x'^c = 0 in holomorphic
// components (the connection is holomorphic, so the system closes)
inline detail::StateVec geodesic_rhs(const KahlerModel& m, const detail::StateVec& y) {
    const std::size_t n = m.n;
    const std::size_t h = 2 * n;
    ChartPoint p(std::vector<cplx>(y.begin(), y.begin() + n),
                 std::vector<cplx>(y.begin() + n, y.begin() + 2 * n));
    for (const cplx& c : y)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > kChartEscape)
            throw domain_error("geodesic: chart escape");
    const GammaValues gamma = christoffel_values(m, p);
    detail::StateVec dy(2 * h);
    for (std::size_t a = 0; a < h; ++a) dy[a] = y[h + a];
    for (std::size_t a = 0; a < h; ++a) {
        cplx s(0);
        for (std::size_t b = 0; b < h; ++b)
            for (std::size_t c = 0; c < h; ++c) s += gamma.at(a, b, c) * y[h + b] * y[h + c];
        dy[h + a] = -s;
    }
    return dy;
}

namespace detail {

inline StateVec pack_state(const GeodesicState& s) {
    StateVec y;
    y.insert(y.end(), s.position.z.begin(), s.position.z.end());
    y.insert(y.end(), s.position.w.begin(), s.position.w.end());
    y.insert(y.end(), s.vel_z.begin(), s.vel_z.end());
    y.insert(y.end(), s.vel_w.begin(), s.vel_w.end());
    return y;
}

inline GeodesicState unpack_state(const StateVec& y, std::size_t n) {
    GeodesicState s;
    s.position = ChartPoint(std::vector<cplx>(y.begin(), y.begin() + n),
                            std::vector<cplx>(y.begin() + n, y.begin() + 2 * n));
    s.vel_z.assign(y.begin() + 2 * n, y.begin() + 3 * n);
    s.vel_w.assign(y.begin() + 3 * n, y.begin() + 4 * n);
    return s;
}

inline StateVec run_geodesic(const KahlerModel& m, StateVec y, real t, int steps) {
    const real h = t / steps;
    auto rhs = [&m](real, const StateVec& s) { return geodesic_rhs(m, s); };
    for (int i = 0; i < steps; ++i) {
        try {
            y = rk4_step(rhs, i * h, y, h);
        } catch (const domain_error& e) {
            throw domain_error(std::string(e.what()) + " at t = " +
                               std::to_string(double(i * h)));
        }
        ChartPoint p(std::vector<cplx>(y.begin(), y.begin() + m.n),
                     std::vector<cplx>(y.begin() + m.n, y.begin() + 2 * m.n));
        if (!m.in_domain(p))
            throw domain_error(m.name + ": geodesic left the domain at t = " +
                               std::to_string(double((i + 1) * h)));
    }
    return y;
}

}  // namespace detail

inline GeodesicState integrate_geodesic(const KahlerModel& m, const GeodesicState& s0, real t,
                                        int steps = kDefaultSteps, real err_tol = 1e-7L) {
    if (steps < 1) throw argument_error("integrate_geodesic: steps >= 1 required");
    m.require_domain(s0.position);
    const auto y0 = detail::pack_state(s0);
    const auto coarse = detail::run_geodesic(m, y0, t, steps);
    const auto fine = detail::run_geodesic(m, y0, t, 2 * steps);
    const real est = detail::state_diff(coarse, fine);
    if (est > err_tol)
        throw accuracy_error("integrate_geodesic: step-doubling estimate " +
                             std::to_string(double(est)) + " exceeds tolerance");
    return detail::unpack_state(coarse, m.n);
}

// sampled trajectory rows for data emission: (t, state)
inline std::vector<std::pair<real, GeodesicState>> geodesic_trajectory(
    const KahlerModel& m, const GeodesicState& s0, real t, int steps = kDefaultSteps,
    int samples = 100) {
    m.require_domain(s0.position);
    auto y = detail::pack_state(s0);
    std::vector<std::pair<real, GeodesicState>> rows;
    rows.emplace_back(0, s0);
    const real h = t / steps;
    auto rhs = [&m](real, const detail::StateVec& s) { return geodesic_rhs(m, s); };
    const int stride = std::max(1, steps / std::max(1, samples));
    for (int i = 0; i < steps; ++i) {
        y = detail::rk4_step(rhs, i * h, y, h);
        if ((i + 1) % stride == 0 || i + 1 == steps)
            rows.emplace_back((i + 1) * h, detail::unpack_state(y, m.n));
    }
    return rows;
}

// path in a chart with analytic velocity (2n holomorphic components)
struct PathSpec {
    std::function<std::pair<ChartPoint, std::vector<cplx>>(real)> map;
    int steps = kDefaultSteps;

    ChartPoint start() const { return map(0).first; }
    ChartPoint end() const { return map(1).first; }
};

inline PathSpec straight_path(const ChartPoint& from, const ChartPoint& to,
                              int steps = kDefaultSteps) {
    const std::size_t n = from.n();
    PathSpec path;
    path.steps = steps;
    path.map = [from, to, n](real t) {
        std::vector<cplx> z(n), w(n), vel(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            z[j] = from.z[j] + cplx(t) * (to.z[j] - from.z[j]);
            w[j] = from.w[j] + cplx(t) * (to.w[j] - from.w[j]);
            vel[j] = to.z[j] - from.z[j];
            vel[n + j] = to.w[j] - from.w[j];
        }
        return std::make_pair(ChartPoint(std::move(z), std::move(w)), std::move(vel));
    };
    return path;
}

// vertical path w0 -> w1 on the leaf {z = z0} with a sinusoidal detour;
// homotopic to the straight segment within the leaf
inline PathSpec vertical_detour_path(const cplx& z0, const cplx& w0, const cplx& w1,
                                     const cplx& bump, int steps = kDefaultSteps) {
    PathSpec path;
    path.steps = steps;
    path.map = [z0, w0, w1, bump](real t) {
        const real pi = 3.14159265358979323846264338327950288L;
        const cplx w = w0 + cplx(t) * (w1 - w0) + bump * cplx(std::sin(pi * t));
        const cplx dw = (w1 - w0) + bump * cplx(pi * std::cos(pi * t));
        return std::make_pair(ChartPoint({z0}, {w}),
                              std::vector<cplx>{cplx(0), dw});
    };
    return path;
}

// parallel transport along a path as a linear map of the full 4n-frame;
// P carries vectors forward, Q = P^{-1} carries covectors
struct TransportMap {
    std::size_t n;
    std::vector<cplx> P;
    std::vector<cplx> Q;
    real reality_drift = 0;
    real consistency = 0;  // max |PQ - id|

    TensorValue apply(const TensorValue& t) const {
        const std::size_t dim = 4 * n;
        TensorValue out(n, t.valence());
        std::vector<std::size_t> idx(t.rank(), 0);
        do {
            cplx s(0);
            std::vector<std::size_t> src(t.rank(), 0);
            // dense contraction over source indices
            for (;;) {
                cplx term = t.at(src);
                if (term != cplx(0)) {
                    for (std::size_t k = 0; k < t.rank(); ++k)
                        term *= (t.valence()[k] == Slot::Contra)
                                    ? P[idx[k] * dim + src[k]]
                                    : Q[src[k] * dim + idx[k]];
                    s += term;
                }
                bool carried = false;
                for (std::size_t k = t.rank(); k-- > 0;) {
                    if (++src[k] < dim) {
                        carried = true;
                        break;
                    }
                    src[k] = 0;
                }
                if (!carried) break;
            }
            out.at(idx) = s;
        } while (out.advance(idx));
        return out;
    }
};

namespace detail {

inline StateVec transport_rhs(const KahlerModel& m, const ChartPoint& x,
                              const std::vector<cplx>& vel, const StateVec& pq) {
    const std::size_t n = m.n;
    const std::size_t dim = 4 * n;
    if (!m.in_domain(x)) throw domain_error(m.name + ": transport path left the domain");
    const GammaValues gamma = christoffel_values(m, x);

    // A^a_d = Gamma^a_{cd} gammadot^c over the full frame
    std::vector<cplx> A(dim * dim, cplx(0));
    const std::size_t h = 2 * n;
    for (std::size_t a = 0; a < h; ++a)
        for (std::size_t d = 0; d < h; ++d) {
            cplx s(0);
            for (std::size_t c = 0; c < h; ++c) s += gamma.at(a, c, d) * vel[c];
            A[a * dim + d] = s;
            A[(a + h) * dim + (d + h)] = std::conj(s);
        }

    StateVec out(2 * dim * dim, cplx(0));
    // P' = -A P ; Q' = +Q A
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            cplx sp(0), sq(0);
            for (std::size_t k = 0; k < dim; ++k) {
                sp += A[i * dim + k] * pq[k * dim + j];
                sq += pq[dim * dim + i * dim + k] * A[k * dim + j];
            }
            out[i * dim + j] = -sp;
            out[dim * dim + i * dim + j] = sq;
        }
    return out;
}

}  // namespace detail

inline TransportMap transport_map(const KahlerModel& m, const PathSpec& path) {
    const std::size_t n = m.n;
    const std::size_t dim = 4 * n;
    detail::StateVec y(2 * dim * dim, cplx(0));
    for (std::size_t i = 0; i < dim; ++i) {
        y[i * dim + i] = cplx(1);
        y[dim * dim + i * dim + i] = cplx(1);
    }
    TransportMap map;
    map.n = n;

    const int steps = path.steps;
    const real h = real(1) / steps;
    auto rhs = [&m, &path](real t, const detail::StateVec& s) {
        const auto [x, vel] = path.map(t);
        return detail::transport_rhs(m, x, vel, s);
    };
    for (int i = 0; i < steps; ++i) {
        try {
            y = detail::rk4_step(rhs, i * h, y, h);
        } catch (const domain_error& e) {
            throw domain_error(std::string(e.what()) + " at t = " +
                               std::to_string(double(i * h)));
        }
        // re-project onto the reality-compatible subspace and log the drift
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) {
                const std::size_t ca = conj_index(a, n), cb = conj_index(b, n);
                if (a * dim + b < ca * dim + cb) {
                    const cplx pab = y[a * dim + b];
                    const cplx pcc = std::conj(y[ca * dim + cb]);
                    map.reality_drift = std::max(map.reality_drift, std::abs(pab - pcc));
                    const cplx avg = (pab + pcc) * cplx(0.5L);
                    y[a * dim + b] = avg;
                    y[ca * dim + cb] = std::conj(avg);
                    const cplx qab = y[dim * dim + a * dim + b];
                    const cplx qcc = std::conj(y[dim * dim + ca * dim + cb]);
                    const cplx qavg = (qab + qcc) * cplx(0.5L);
                    y[dim * dim + a * dim + b] = qavg;
                    y[dim * dim + ca * dim + cb] = std::conj(qavg);
                }
            }
    }
    map.P.assign(y.begin(), y.begin() + dim * dim);
    map.Q.assign(y.begin() + dim * dim, y.end());
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            cplx s(0);
            for (std::size_t k = 0; k < dim; ++k) s += map.P[i * dim + k] * map.Q[k * dim + j];
            map.consistency = std::max(map.consistency,
                                       std::abs(s - (i == j ? cplx(1) : cplx(0))));
        }
    return map;
}

inline TensorValue parallel_transport(const KahlerModel& m, const PathSpec& path,
                                      const TensorValue& T, real err_tol = 1e-7L) {
    const TransportMap coarse = transport_map(m, path);
    PathSpec refined = path;
    refined.steps = 2 * path.steps;
    const TransportMap fine = transport_map(m, refined);
    const TensorValue a = coarse.apply(T);
    const TensorValue b = fine.apply(T);
    if (a.max_abs_diff(b) > err_tol)
        throw accuracy_error("parallel_transport: step-doubling estimate exceeds tolerance");
    return a;
}

// ---- CP^1 closed forms -------------------------------------------------

// w(t) = (a t + w0 (1 + z0 w0)) / (-z0 a t + 1 + z0 w0)
inline cplx cp1_geodesic_closed_form(const cplx& z0, const cplx& w0, const cplx& a, real t) {
    const cplx c = cplx(1) + z0 * w0;
    const cplx den = -z0 * a * cplx(t) + c;
    if (std::abs(den) < kDomainGuard)
        throw domain_error("cp1 geodesic closed form: pole reached");
    return (a * cplx(t) + w0 * c) / den;
}

// transport factor for d/dw along a vertical path: ((1+z0 w1)/(1+z0 w0))^2
inline cplx cp1_transport_factor(const cplx& z0, const cplx& w0, const cplx& w1) {
    const cplx d0 = cplx(1) + z0 * w0;
    const cplx d1 = cplx(1) + z0 * w1;
    if (std::abs(d0) < kDomainGuard || std::abs(d1) < kDomainGuard)
        throw domain_error("cp1 transport factor: 1 + zw = 0");
    const cplx r = d1 / d0;
    return r * r;
}

// leaf chart w -> -1 / (z0 (1 + z0 w)) identifying the leaf minus a point
// with the affine complex line
inline cplx cp1_affine_chart(const cplx& z0, const cplx& w) {
    if (std::abs(z0) < kDomainGuard) throw domain_error("cp1 affine chart: z0 = 0");
    const cplx den = z0 * (cplx(1) + z0 * w);
    if (std::abs(den) < kDomainGuard) throw domain_error("cp1 affine chart: 1 + z0 w = 0");
    return cplx(-1) / den;
}

// connection 1-form omega_2^1 = -i (w dz - z dw) / (1 + zw), the
// normalization consistent with the structural equations and the
// Christoffel table (see connection.hpp)
inline TensorValue cp1_connection_form(const ChartPoint& p) {
    const cplx den = cplx(1) + p.z[0] * p.w[0];
    if (std::abs(den) < kDomainGuard) throw domain_error("cp1 connection form: 1 + zw = 0");
    TensorValue omega = TensorValue::covector(1);
    omega.at({0}) = cplx(0, -1) * p.w[0] / den;
    omega.at({1}) = cplx(0, 1) * p.z[0] / den;
    return omega;
}

// homography of the leafwise affine action and its conjugator
struct AffineChartCP1 {
    cplx z0;

    explicit AffineChartCP1(const cplx& leaf) : z0(leaf) {
        if (std::abs(leaf) < kDomainGuard) throw argument_error("affine chart: z0 = 0");
    }

    cplx chart(const cplx& w) const { return cp1_affine_chart(z0, w); }

    Mat2 homography(const cplx& a) const {
        return Mat2{{cplx(1) + a * z0, a, -a * z0 * z0, cplx(1) - a * z0}};
    }

    Mat2 conjugator() const { return Mat2{{z0, cplx(1), -z0 * z0, cplx(0)}}; }

    // M_a = P [[1, a], [0, 1]] P^{-1}
    Mat2 homography_via_conjugator(const cplx& a) const {
        const Mat2 P = conjugator();
        const Mat2 shear{{cplx(1), a, cplx(0), cplx(1)}};
        return P * shear * P.inverse();
    }

    cplx act(const cplx& a, const cplx& w) const { return homography(a).moebius(w); }
};

}  // namespace kahlerc
