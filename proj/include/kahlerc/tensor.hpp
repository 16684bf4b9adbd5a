#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "kahlerc/jet.hpp"
#include "kahlerc/numeric.hpp"

// Pointwise tensors in the complexified coordinate frame. For an
// n-dimensional chart the frame is
//   (d/dz^1..d/dz^n, d/dw^1..d/dw^n, d/dzbar^1.., d/dwbar^1..)
// in that fixed order; index arithmetic below relies on it.

namespace kahlerc {

struct ChartPoint {
    std::vector<cplx> z;
    std::vector<cplx> w;

    ChartPoint() = default;
    ChartPoint(cplx z0, cplx w0) : z{z0}, w{w0} {}
    ChartPoint(std::vector<cplx> zv, std::vector<cplx> wv)
        : z(std::move(zv)), w(std::move(wv)) {}

    std::size_t n() const { return z.size(); }

    bool finite() const {
        for (const auto& c : z)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        for (const auto& c : w)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        return true;
    }

    // embedded copy of the underlying manifold: w = conj(z) entrywise
    bool diagonal(real tol = kDefaultTol) const {
        for (std::size_t j = 0; j < z.size(); ++j)
            if (!near(w[j], std::conj(z[j]), tol)) return false;
        return true;
    }

    JetFrame frame() const { return JetFrame(n(), z, w); }

    std::string str() const {
        std::string s = "(";
        auto app = [&s](const cplx& c) {
            s += std::to_string(double(c.real())) + (c.imag() < 0 ? "-" : "+") +
                 std::to_string(double(std::abs(c.imag()))) + "i";
        };
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (j) s += ",";
            app(z[j]);
        }
        s += "; ";
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (j) s += ",";
            app(w[j]);
        }
        return s + ")";
    }
};

inline ChartPoint diagonal_point(const std::vector<cplx>& z) {
    std::vector<cplx> w(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) w[j] = std::conj(z[j]);
    return ChartPoint(z, w);
}

enum class Slot { Contra, Cov };

class TensorValue {
  public:
    TensorValue() : n_(0), dim_(0) {}

    TensorValue(std::size_t n, std::vector<Slot> valence)
        : n_(n), dim_(4 * n), valence_(std::move(valence)) {
        std::size_t size = 1;
        for (std::size_t k = 0; k < valence_.size(); ++k) size *= dim_;
        c_.assign(size, cplx(0));
    }

    static TensorValue vector(std::size_t n) { return TensorValue(n, {Slot::Contra}); }
    static TensorValue covector(std::size_t n) { return TensorValue(n, {Slot::Cov}); }
    static TensorValue endomorphism(std::size_t n) {
        return TensorValue(n, {Slot::Contra, Slot::Cov});
    }
    static TensorValue form(std::size_t n, std::size_t degree) {
        return TensorValue(n, std::vector<Slot>(degree, Slot::Cov));
    }
    static TensorValue bilinear(std::size_t n) { return TensorValue(n, {Slot::Cov, Slot::Cov}); }

    static TensorValue identity(std::size_t n) {
        TensorValue t = endomorphism(n);
        for (std::size_t a = 0; a < 4 * n; ++a) t.at({a, a}) = cplx(1);
        return t;
    }

    std::size_t n() const { return n_; }
    std::size_t frame_dim() const { return dim_; }
    std::size_t rank() const { return valence_.size(); }
    const std::vector<Slot>& valence() const { return valence_; }
    const std::vector<cplx>& coeffs() const { return c_; }
    std::vector<cplx>& coeffs() { return c_; }

    std::size_t flat_index(const std::vector<std::size_t>& idx) const {
        std::size_t f = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) f = f * dim_ + idx[k];
        return f;
    }

    cplx& at(const std::vector<std::size_t>& idx) { return c_[flat_index(idx)]; }
    const cplx& at(const std::vector<std::size_t>& idx) const { return c_[flat_index(idx)]; }

    TensorValue& operator+=(const TensorValue& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    TensorValue& operator-=(const TensorValue& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    TensorValue& operator*=(const cplx& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
    friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
    friend TensorValue operator*(TensorValue a, const cplx& s) { return a *= s; }
    friend TensorValue operator*(const cplx& s, TensorValue a) { return a *= s; }

    real norm_inf() const {
        real m = 0;
        for (const auto& x : c_) m = std::max(m, std::abs(x));
        return m;
    }

    real max_abs_diff(const TensorValue& o) const {
        require_same_shape(o);
        real m = 0;
        for (std::size_t i = 0; i < c_.size(); ++i) m = std::max(m, std::abs(c_[i] - o.c_[i]));
        return m;
    }

    // coefficientwise conjugate at conjugated index tuples
    TensorValue conjugate() const {
        TensorValue r(n_, valence_);
        std::vector<std::size_t> idx(rank(), 0);
        do {
            std::vector<std::size_t> cid(rank());
            for (std::size_t k = 0; k < rank(); ++k) cid[k] = conj_index(idx[k], n_);
            r.at(cid) = std::conj(at(idx));
        } while (advance(idx));
        return r;
    }

    TensorValue real_part() const { return (*this + conjugate()) * cplx(0.5L); }
    TensorValue imag_part() const { return (*this - conjugate()) * cplx(0, -0.5L); }

    // defect of the reality predicate: 0 for tensors real on real vectors
    real reality_defect() const { return max_abs_diff(conjugate()); }
    bool is_real(real tol = kDefaultTol) const {
        return reality_defect() <= tol * std::max(norm_inf(), real(1));
    }

    friend TensorValue tensor_product(const TensorValue& a, const TensorValue& b) {
        std::vector<Slot> v = a.valence_;
        v.insert(v.end(), b.valence_.begin(), b.valence_.end());
        TensorValue r(a.n_, v);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i * b.c_.size() + j] = a.c_[i] * b.c_[j];
        return r;
    }

    // contract a contravariant slot against a covariant slot
    friend TensorValue contract(const TensorValue& t, std::size_t slot_a, std::size_t slot_b) {
        if (slot_a == slot_b || slot_a >= t.rank() || slot_b >= t.rank())
            throw argument_error("contract: bad slots");
        if (t.valence_[slot_a] == t.valence_[slot_b])
            throw argument_error("contract: slots must have opposite variance");
        std::vector<Slot> v;
        for (std::size_t k = 0; k < t.rank(); ++k)
            if (k != slot_a && k != slot_b) v.push_back(t.valence_[k]);
        TensorValue r(t.n_, v);
        std::vector<std::size_t> out(v.size(), 0);
        do {
            cplx s(0);
            for (std::size_t d = 0; d < t.dim_; ++d) {
                std::vector<std::size_t> full(t.rank());
                std::size_t pos = 0;
                for (std::size_t k = 0; k < t.rank(); ++k) {
                    if (k == slot_a || k == slot_b)
                        full[k] = d;
                    else
                        full[k] = out[pos++];
                }
                s += t.at(full);
            }
            r.at(out) = s;
        } while (r.advance(out));
        return r;
    }

    // apply an endomorphism-valued tensor to a vector-valued tensor
    friend TensorValue apply(const TensorValue& endo, const TensorValue& vec) {
        TensorValue r = TensorValue::vector(endo.n_);
        for (std::size_t a = 0; a < endo.dim_; ++a) {
            cplx s(0);
            for (std::size_t b = 0; b < endo.dim_; ++b)
                s += endo.at({a, b}) * vec.at({b});
            r.at({a}) = s;
        }
        return r;
    }

    // endomorphism composition (matrix product)
    friend TensorValue compose(const TensorValue& x, const TensorValue& y) {
        TensorValue r = TensorValue::endomorphism(x.n_);
        for (std::size_t a = 0; a < x.dim_; ++a)
            for (std::size_t b = 0; b < x.dim_; ++b) {
                cplx s(0);
                for (std::size_t m = 0; m < x.dim_; ++m) s += x.at({a, m}) * y.at({m, b});
                r.at({a, b}) = s;
            }
        return r;
    }

    cplx trace() const {
        cplx s(0);
        for (std::size_t a = 0; a < dim_; ++a) s += at({a, a});
        return s;
    }

    // evaluate a fully covariant tensor on a list of frame vectors
    cplx operator()(const std::vector<TensorValue>& vectors) const {
        if (vectors.size() != rank()) throw argument_error("tensor evaluation: arity mismatch");
        for (const Slot s : valence_)
            if (s != Slot::Cov) throw argument_error("tensor evaluation: covariant slots only");
        std::vector<std::size_t> idx(rank(), 0);
        cplx s(0);
        do {
            cplx term = at(idx);
            if (term != cplx(0))
                for (std::size_t k = 0; k < rank(); ++k) term *= vectors[k].at({idx[k]});
            s += term;
        } while (advance(idx));
        return s;
    }

    cplx operator()(const TensorValue& u, const TensorValue& v) const {
        return (*this)(std::vector<TensorValue>{u, v});
    }

    // full antisymmetrization (sum over permutations with sign / k!)
    TensorValue alternate() const {
        const std::size_t k = rank();
        TensorValue r(n_, valence_);
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        real count = 0;
        std::vector<std::pair<std::vector<std::size_t>, int>> perms;
        do {
            int sign = permutation_sign(perm);
            perms.emplace_back(perm, sign);
            count += 1;
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::vector<std::size_t> idx(k, 0);
        do {
            cplx s(0);
            for (const auto& [p, sign] : perms) {
                std::vector<std::size_t> pid(k);
                for (std::size_t a = 0; a < k; ++a) pid[a] = idx[p[a]];
                s += cplx(sign) * at(pid);
            }
            r.at(idx) = s / count;
        } while (r.advance(idx));
        return r;
    }

    // advance a multi-index odometer-style; returns false after wrapping
    bool advance(std::vector<std::size_t>& idx) const {
        for (std::size_t k = idx.size(); k-- > 0;) {
            if (++idx[k] < dim_) return true;
            idx[k] = 0;
        }
        return false;
    }

  private:
    void require_same_shape(const TensorValue& o) const {
        if (n_ != o.n_ || valence_ != o.valence_)
            throw argument_error("tensor: shape mismatch");
    }

    static int permutation_sign(const std::vector<std::size_t>& p) {
        int sign = 1;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j)
                if (p[i] > p[j]) sign = -sign;
        return sign;
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<Slot> valence_;
    std::vector<cplx> c_;
};

// wedge normalized so that (a ^ b) = a (x) b - b (x) a for 1-forms
inline TensorValue wedge(const TensorValue& a, const TensorValue& b) {
    const std::size_t p = a.rank(), q = b.rank();
    real factorial = 1;
    for (std::size_t i = 2; i <= p + q; ++i) factorial *= real(i);
    real pf = 1, qf = 1;
    for (std::size_t i = 2; i <= p; ++i) pf *= real(i);
    for (std::size_t i = 2; i <= q; ++i) qf *= real(i);
    return tensor_product(a, b).alternate() * cplx(factorial / (pf * qf));
}

// symmetric product a b = (a (x) b + b (x) a) / 2 for 1-forms
inline TensorValue sym_product(const TensorValue& a, const TensorValue& b) {
    TensorValue t = tensor_product(a, b);
    TensorValue u = tensor_product(b, a);
    return (t + u) * cplx(0.5L);
}

// frame basis vector / covector
inline TensorValue frame_vector(std::size_t n, std::size_t index) {
    TensorValue v = TensorValue::vector(n);
    v.at({index}) = cplx(1);
    return v;
}

inline TensorValue frame_covector(std::size_t n, std::size_t index) {
    TensorValue v = TensorValue::covector(n);
    v.at({index}) = cplx(1);
    return v;
}

// real tangent vector with holomorphic components (p, q); conjugate slots
// filled so the vector is fixed by conjugation
inline TensorValue real_tangent(std::size_t n, const std::vector<cplx>& p,
                                const std::vector<cplx>& q) {
    TensorValue v = TensorValue::vector(n);
    for (std::size_t j = 0; j < n; ++j) {
        v.at({j}) = p[j];
        v.at({n + j}) = q[j];
        v.at({2 * n + j}) = std::conj(p[j]);
        v.at({3 * n + j}) = std::conj(q[j]);
    }
    return v;
}

}  // namespace kahlerc
