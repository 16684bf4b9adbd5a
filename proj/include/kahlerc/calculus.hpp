#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "kahlerc/jet.hpp"
#include "kahlerc/numeric.hpp"
#include "kahlerc/tensor.hpp"

// Scalar, vector and form fields over a chart, with the two derived
// operations everything downstream is built from: Lie brackets and exterior
// derivatives. Field coefficients are callables evaluated on seeded jet
// variables, so derivatives up to second order are exact.

namespace kahlerc {

using ScalarFn = std::function<Jet(const JetFrame&)>;

inline ScalarFn scalar_constant(const cplx& c) {
    return [c](const JetFrame& v) { return v.constant(c); };
}

// Evaluate an analytic scalar descriptor at a chart point.
inline Jet jet_eval(const ScalarFn& f, const ChartPoint& p) {
    if (!p.finite()) throw domain_error("jet_eval: non-finite point " + p.str());
    try {
        return f(p.frame());
    } catch (const domain_error& e) {
        throw domain_error(std::string(e.what()) + " at " + p.str());
    }
}

class TensorField {
  public:
    TensorField(std::size_t n, std::vector<Slot> valence)
        : n_(n), dim_(4 * n), valence_(std::move(valence)) {
        std::size_t size = 1;
        for (std::size_t k = 0; k < valence_.size(); ++k) size *= dim_;
        fns_.assign(size, nullptr);
    }

    static TensorField vector_field(std::size_t n) { return TensorField(n, {Slot::Contra}); }
    static TensorField form_field(std::size_t n, std::size_t degree) {
        return TensorField(n, std::vector<Slot>(degree, Slot::Cov));
    }

    static TensorField constant(std::size_t n, const TensorValue& value) {
        TensorField f(n, value.valence());
        std::vector<std::size_t> idx(value.rank(), 0);
        do {
            const cplx c = value.at(idx);
            if (c != cplx(0)) f.set(idx, scalar_constant(c));
        } while (value.advance(idx));
        return f;
    }

    std::size_t n() const { return n_; }
    std::size_t frame_dim() const { return dim_; }
    std::size_t rank() const { return valence_.size(); }
    const std::vector<Slot>& valence() const { return valence_; }

    void set(const std::vector<std::size_t>& idx, ScalarFn fn) {
        fns_[flat(idx)] = std::move(fn);
    }

    const ScalarFn& fn(const std::vector<std::size_t>& idx) const { return fns_[flat(idx)]; }

    // coefficient jets at a point, structural zeros included
    std::vector<Jet> jets(const JetFrame& v) const {
        std::vector<Jet> out;
        out.reserve(fns_.size());
        for (const auto& f : fns_) out.push_back(f ? f(v) : v.constant(cplx(0)));
        return out;
    }

    std::vector<Jet> jets(const ChartPoint& p) const { return jets(p.frame()); }

    TensorValue eval(const ChartPoint& p) const {
        const auto j = jets(p);
        TensorValue t(n_, valence_);
        for (std::size_t i = 0; i < j.size(); ++i) t.coeffs()[i] = j[i].value();
        return t;
    }

  private:
    std::size_t flat(const std::vector<std::size_t>& idx) const {
        std::size_t f = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) f = f * dim_ + idx[k];
        return f;
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<Slot> valence_;
    std::vector<ScalarFn> fns_;
};

using VectorField = TensorField;
using FormField = TensorField;

namespace detail {

inline TensorValue values_of(const std::vector<Jet>& jets, std::size_t n,
                             const std::vector<Slot>& valence) {
    TensorValue t(n, valence);
    for (std::size_t i = 0; i < jets.size(); ++i) t.coeffs()[i] = jets[i].value();
    return t;
}

}  // namespace detail

// [X, Y]^a = X^b d_b Y^a - Y^b d_b X^a, with first derivatives of the
// result carried along (needed for nested brackets in the Jacobi identity).
inline std::vector<Jet> lie_bracket_jets(const VectorField& X, const VectorField& Y,
                                         const JetFrame& v) {
    if (X.rank() != 1 || Y.rank() != 1 || X.valence()[0] != Slot::Contra ||
        Y.valence()[0] != Slot::Contra)
        throw argument_error("lie_bracket: arguments must be vector fields");
    const std::size_t m = 4 * X.n();
    const auto xj = X.jets(v);
    const auto yj = Y.jets(v);
    std::vector<Jet> out(m, v.constant(cplx(0)));
    for (std::size_t a = 0; a < m; ++a) {
        Jet r = v.constant(cplx(0));
        cplx val(0);
        for (std::size_t b = 0; b < m; ++b)
            val += xj[b].value() * yj[a].grad(b) - yj[b].value() * xj[a].grad(b);
        r.value() = val;
        for (std::size_t c = 0; c < m; ++c) {
            cplx g(0);
            for (std::size_t b = 0; b < m; ++b)
                g += xj[b].grad(c) * yj[a].grad(b) + xj[b].value() * yj[a].hess(b, c) -
                     yj[b].grad(c) * xj[a].grad(b) - yj[b].value() * xj[a].hess(b, c);
            r.grad(c) = g;
        }
        out[a] = r;
    }
    return out;
}

inline TensorValue lie_bracket(const VectorField& X, const VectorField& Y, const ChartPoint& p) {
    const auto jets = lie_bracket_jets(X, Y, p.frame());
    TensorValue t = TensorValue::vector(p.n());
    for (std::size_t a = 0; a < jets.size(); ++a) t.at({a}) = jets[a].value();
    return t;
}

// Exterior derivative on coefficient jets of a degree-k form:
//   (d omega)_{i0..ik} = sum_a (-1)^a d_{i_a} omega_{i0..^a..ik}
// The result's first derivatives are filled from the input Hessians so that
// d can be applied twice.
inline std::vector<Jet> exterior_derivative_jets(const std::vector<Jet>& omega, std::size_t n,
                                                 std::size_t degree) {
    const std::size_t dim = 4 * n;
    const std::size_t m = dim;
    std::size_t out_size = 1;
    for (std::size_t k = 0; k <= degree; ++k) out_size *= dim;
    std::vector<Jet> out(out_size, Jet::constant(m, cplx(0)));

    std::vector<std::size_t> idx(degree + 1, 0);
    std::size_t flat = 0;
    for (;;) {
        Jet r = Jet::constant(m, cplx(0));
        for (std::size_t a = 0; a <= degree; ++a) {
            // index tuple with position a removed
            std::size_t sub = 0;
            for (std::size_t k = 0; k <= degree; ++k)
                if (k != a) sub = sub * dim + idx[k];
            const Jet& src = omega[sub];
            const cplx sign = (a % 2 == 0) ? cplx(1) : cplx(-1);
            r.value() += sign * src.grad(idx[a]);
            for (std::size_t b = 0; b < m; ++b) r.grad(b) += sign * src.hess(idx[a], b);
        }
        out[flat] = r;
        ++flat;
        bool carried = false;
        for (std::size_t k = degree + 1; k-- > 0;) {
            if (++idx[k] < dim) {
                carried = true;
                break;
            }
            idx[k] = 0;
        }
        if (!carried) break;
    }
    return out;
}

inline TensorValue exterior_derivative(const FormField& omega, const ChartPoint& p) {
    const std::size_t degree = omega.rank();
    for (const Slot s : omega.valence())
        if (s != Slot::Cov) throw argument_error("exterior_derivative: not a form");
    if (degree > 3) throw argument_error("exterior_derivative: degree overflow");
    const auto dj = exterior_derivative_jets(omega.jets(p), omega.n(), degree);
    return detail::values_of(dj, omega.n(), std::vector<Slot>(degree + 1, Slot::Cov));
}

// d(d omega); identically zero by symmetry of second derivatives
inline TensorValue second_exterior_derivative(const FormField& omega, const ChartPoint& p) {
    const std::size_t degree = omega.rank();
    const auto dj = exterior_derivative_jets(omega.jets(p), omega.n(), degree);
    const auto ddj = exterior_derivative_jets(dj, omega.n(), degree + 1);
    return detail::values_of(ddj, omega.n(), std::vector<Slot>(degree + 2, Slot::Cov));
}

// derivative of a scalar field along a pointwise vector
inline cplx directional_derivative(const Jet& f, const TensorValue& X) {
    cplx s(0);
    for (std::size_t a = 0; a < f.nvars(); ++a) s += X.at({a}) * f.grad(a);
    return s;
}

}  // namespace kahlerc
