#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kahlerc/numeric.hpp"

// Second-order forward-mode jets over m complex variables: a value together
// with its exact gradient and Hessian. Model metrics, frame coefficients and
// differential forms are all evaluated through this type, so curvature-level
// quantities come out of exact second derivatives rather than finite
// differences.

namespace kahlerc {

class Jet {
  public:
    Jet() : Jet(0, cplx(0)) {}

    Jet(std::size_t nvars, const cplx& value)
        : m_(nvars), value_(value), grad_(nvars, cplx(0)), hess_(nvars * nvars, cplx(0)) {}

    // seeded variable: d(var)/d(var_index) = 1
    static Jet variable(std::size_t nvars, std::size_t index, const cplx& value) {
        Jet j(nvars, value);
        j.grad_[index] = cplx(1);
        return j;
    }

    static Jet constant(std::size_t nvars, const cplx& value) { return Jet(nvars, value); }

    std::size_t nvars() const { return m_; }
    const cplx& value() const { return value_; }
    const cplx& grad(std::size_t i) const { return grad_[i]; }
    const cplx& hess(std::size_t i, std::size_t j) const { return hess_[i * m_ + j]; }

    cplx& value() { return value_; }
    cplx& grad(std::size_t i) { return grad_[i]; }
    cplx& hess(std::size_t i, std::size_t j) { return hess_[i * m_ + j]; }

    Jet operator-() const {
        Jet r(*this);
        r.value_ = -r.value_;
        for (auto& g : r.grad_) g = -g;
        for (auto& h : r.hess_) h = -h;
        return r;
    }

    Jet& operator+=(const Jet& o) {
        value_ += o.value_;
        for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += o.grad_[i];
        for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
        return *this;
    }

    Jet& operator-=(const Jet& o) {
        value_ -= o.value_;
        for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= o.grad_[i];
        for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= o.hess_[i];
        return *this;
    }

    Jet& operator+=(const cplx& c) {
        value_ += c;
        return *this;
    }

    Jet& operator-=(const cplx& c) {
        value_ -= c;
        return *this;
    }

    Jet& operator*=(const cplx& c) {
        value_ *= c;
        for (auto& g : grad_) g *= c;
        for (auto& h : hess_) h *= c;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, const cplx& c) { return a += c; }
    friend Jet operator+(const cplx& c, Jet a) { return a += c; }
    friend Jet operator-(Jet a, const cplx& c) { return a -= c; }
    friend Jet operator-(const cplx& c, const Jet& a) { return -a + c; }
    friend Jet operator*(Jet a, const cplx& c) { return a *= c; }
    friend Jet operator*(const cplx& c, Jet a) { return a *= c; }
    friend Jet operator/(Jet a, const cplx& c) { return a *= cplx(1) / c; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        const std::size_t m = a.m_;
        Jet r(m, a.value_ * b.value_);
        for (std::size_t i = 0; i < m; ++i)
            r.grad_[i] = a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                const cplx h = a.hess(i, j) * b.value_ + a.grad_[i] * b.grad_[j] +
                               a.grad_[j] * b.grad_[i] + a.value_ * b.hess(i, j);
                r.hess(i, j) = h;
                r.hess(j, i) = h;
            }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }
    friend Jet operator/(const cplx& c, const Jet& b) { return b.reciprocal() * c; }

    Jet reciprocal() const {
        if (value_ == cplx(0)) throw domain_error("jet: division by zero");
        const cplx iv = cplx(1) / value_;
        // f(u) = 1/u, f' = -1/u^2, f'' = 2/u^3
        return compose(iv, -iv * iv, cplx(2) * iv * iv * iv);
    }

    // chain rule for an analytic scalar function applied to this jet
    Jet compose(const cplx& f, const cplx& fp, const cplx& fpp) const {
        const std::size_t m = m_;
        Jet r(m, f);
        for (std::size_t i = 0; i < m; ++i) r.grad_[i] = fp * grad_[i];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                const cplx h = fpp * grad_[i] * grad_[j] + fp * hess(i, j);
                r.hess(i, j) = h;
                r.hess(j, i) = h;
            }
        return r;
    }

    friend Jet sqrt(const Jet& a) {
        const cplx s = std::sqrt(a.value_);
        if (s == cplx(0)) throw domain_error("jet: sqrt at branch point");
        return a.compose(s, cplx(0.5L) / s, cplx(-0.25L) / (s * s * s));
    }

    friend Jet log(const Jet& a) {
        if (a.value_ == cplx(0)) throw domain_error("jet: log of zero");
        const cplx iv = cplx(1) / a.value_;
        return a.compose(std::log(a.value_), iv, -iv * iv);
    }

    friend Jet pow_int(const Jet& a, int k) {
        if (k == 0) return constant(a.m_, cplx(1));
        if (k < 0) return pow_int(a, -k).reciprocal();
        Jet r = a;
        for (int i = 1; i < k; ++i) r = r * a;
        return r;
    }

    // Maximum Hessian asymmetry; exact-zero by construction, exposed for tests.
    real hess_asymmetry() const {
        real d = 0;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j) d = std::max(d, std::abs(hess(i, j) - hess(j, i)));
        return d;
    }

  private:
    std::size_t m_;
    cplx value_;
    std::vector<cplx> grad_;
    std::vector<cplx> hess_;  // row-major m x m, kept symmetric
};

// Seeded Wirtinger variables at a chart point. For an n-dimensional model the
// differentiation variables are (z^1..z^n, w^1..w^n, conj z^1..conj z^n,
// conj w^1..conj w^n) in that order, matching the tensor frame ordering.
class JetFrame {
  public:
    JetFrame(std::size_t n, const std::vector<cplx>& z, const std::vector<cplx>& w) : n_(n) {
        const std::size_t m = 4 * n;
        vars_.reserve(m);
        for (std::size_t j = 0; j < n; ++j) vars_.push_back(Jet::variable(m, j, z[j]));
        for (std::size_t j = 0; j < n; ++j) vars_.push_back(Jet::variable(m, n + j, w[j]));
        for (std::size_t j = 0; j < n; ++j)
            vars_.push_back(Jet::variable(m, 2 * n + j, std::conj(z[j])));
        for (std::size_t j = 0; j < n; ++j)
            vars_.push_back(Jet::variable(m, 3 * n + j, std::conj(w[j])));
    }

    std::size_t n() const { return n_; }
    std::size_t nvars() const { return 4 * n_; }

    const Jet& z(std::size_t j = 0) const { return vars_[j]; }
    const Jet& w(std::size_t j = 0) const { return vars_[n_ + j]; }
    const Jet& zbar(std::size_t j = 0) const { return vars_[2 * n_ + j]; }
    const Jet& wbar(std::size_t j = 0) const { return vars_[3 * n_ + j]; }
    const Jet& var(std::size_t i) const { return vars_[i]; }

    Jet constant(const cplx& c) const { return Jet::constant(nvars(), c); }

  private:
    std::size_t n_;
    std::vector<Jet> vars_;
};

// Index of the conjugate frame direction (z_j <-> zbar_j, w_j <-> wbar_j).
inline std::size_t conj_index(std::size_t i, std::size_t n) { return (i + 2 * n) % (4 * n); }

// Jet of the complex-conjugate function. Valid because every frame is seeded
// on the real slice where the last 2n variables are the conjugates of the
// first 2n: conjugating a function swaps Wirtinger blocks.
inline Jet conj_jet(const Jet& a, std::size_t n) {
    const std::size_t m = 4 * n;
    Jet r(m, std::conj(a.value()));
    for (std::size_t i = 0; i < m; ++i) r.grad(i) = std::conj(a.grad(conj_index(i, n)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            r.hess(i, j) = std::conj(a.hess(conj_index(i, n), conj_index(j, n)));
    return r;
}

}  // namespace kahlerc
