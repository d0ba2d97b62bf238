#pragma once

// Dense univariate polynomials over any of the coefficient fields used in the
// project (KElt, Fq, PadicNum, PadicExt). A coefficient type F must provide
// +, -, *, /, unary -, and the free functions is_zero, is_negligible,
// zero_like, one_like, from_int_like, same_value. Leading coefficients that are
// zero to the known precision are dropped (is_negligible); elsewhere is_zero
// may throw PrecisionLoss for p-adic coefficients.

#include <cassert>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "chab/errors.hpp"

namespace chab {

template <class F>
class Poly {
public:
    using Coeffs = boost::container::small_vector<F, 8>;

    Poly() = default;
    explicit Poly(F zero) : zero_(zero_like(zero)) {}
    Poly(F zero, Coeffs coeffs) : zero_(zero_like(zero)), c_(std::move(coeffs)) { normalize(); }
    Poly(F zero, const std::vector<F>& coeffs) : zero_(zero_like(zero)), c_(coeffs.begin(), coeffs.end()) { normalize(); }

    static Poly constant(const F& a) { return Poly(a, Coeffs{a}); }
    static Poly x(const F& exemplar) { return Poly(exemplar, Coeffs{zero_like(exemplar), one_like(exemplar)}); }

    const F& zero() const { return zero_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero_poly() const { return c_.empty(); }
    const Coeffs& coeffs() const { return c_; }

    // Coefficient of x^i (zero past the degree).
    F operator[](int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : zero_; }
    const F& lead() const { return c_.back(); }

    Poly operator+(const Poly& o) const {
        Coeffs r(std::max(c_.size(), o.c_.size()), zero_);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = (*this)[int(i)] + o[int(i)];
        return Poly(zero_, std::move(r));
    }
    Poly operator-(const Poly& o) const {
        Coeffs r(std::max(c_.size(), o.c_.size()), zero_);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = (*this)[int(i)] - o[int(i)];
        return Poly(zero_, std::move(r));
    }
    Poly operator-() const {
        Coeffs r(c_);
        for (auto& a : r) a = -a;
        return Poly(zero_, std::move(r));
    }
    Poly operator*(const Poly& o) const {
        if (c_.empty() || o.c_.empty()) return Poly(zero_);
        Coeffs r(c_.size() + o.c_.size() - 1, zero_);
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
        return Poly(zero_, std::move(r));
    }
    Poly scale(const F& a) const {
        Coeffs r(c_);
        for (auto& x : r) x = x * a;
        return Poly(zero_, std::move(r));
    }

    // Quotient and remainder; the divisor's leading coefficient must be invertible.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.c_.empty()) throw DomainError("polynomial division by zero");
        const int dn = d.degree();
        Coeffs rem(c_);
        if (degree() < dn) return {Poly(zero_), *this};
        Coeffs q(c_.size() - dn, zero_);
        const F inv_lead = one_like(zero_) / d.lead();
        for (int i = degree(); i >= dn; --i) {
            F coef = rem[i] * inv_lead;
            q[i - dn] = coef;
            for (int j = 0; j <= dn; ++j) rem[i - dn + j] = rem[i - dn + j] - coef * d.c_[j];
        }
        rem.resize(dn);
        return {Poly(zero_, std::move(q)), Poly(zero_, std::move(rem))};
    }
    Poly operator%(const Poly& d) const { return divmod(d).second; }
    // Quotient only; the remainder is never inspected, so exact divisions over
    // approximate fields do not trip on a remainder that is zero to precision.
    Poly operator/(const Poly& d) const {
        if (d.c_.empty()) throw DomainError("polynomial division by zero");
        const int dn = d.degree();
        if (degree() < dn) return Poly(zero_);
        Coeffs rem(c_);
        Coeffs q(c_.size() - dn, zero_);
        const F inv_lead = one_like(zero_) / d.lead();
        for (int i = degree(); i >= dn; --i) {
            F coef = rem[i] * inv_lead;
            q[i - dn] = coef;
            for (int j = 0; j < dn; ++j) rem[i - dn + j] = rem[i - dn + j] - coef * d.c_[j];
        }
        return Poly(zero_, std::move(q));
    }

    Poly monic() const {
        if (c_.empty()) return *this;
        return scale(one_like(zero_) / lead());
    }

    F eval(const F& x) const {
        F r = zero_;
        for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
        return r;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly(zero_);
        Coeffs r(c_.size() - 1, zero_);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * from_int_like(zero_, long(i));
        return Poly(zero_, std::move(r));
    }

    // Structural equality (no precision reasoning).
    bool same(const Poly& o) const {
        if (c_.size() != o.c_.size()) return false;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!same_value(c_[i], o.c_[i])) return false;
        return true;
    }

    template <class G, class Fn>
    Poly<G> map(const G& gzero, Fn&& fn) const {
        typename Poly<G>::Coeffs r;
        for (const auto& a : c_) r.push_back(fn(a));
        return Poly<G>(gzero, std::move(r));
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            if (!s.empty()) s += " + ";
            s += "(" + to_str(c_[i]) + ")";
            if (i >= 1) s += "x";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

private:
    static std::string to_str(const F& a) { return a.str(); }

    void normalize() {
        while (!c_.empty() && is_negligible(c_.back())) c_.pop_back();
    }

    F zero_{};
    Coeffs c_;
};

// Extended gcd: returns (g, s, t) with g = s a + t b and g monic (or zero).
template <class F>
struct XGcd {
    Poly<F> g, s, t;
};

template <class F>
XGcd<F> xgcd(const Poly<F>& a, const Poly<F>& b) {
    const F z = a.zero();
    Poly<F> r0 = a, r1 = b;
    Poly<F> s0 = Poly<F>::constant(one_like(z)), s1(z);
    Poly<F> t0(z), t1 = Poly<F>::constant(one_like(z));
    while (!r1.is_zero_poly()) {
        auto [q, r] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly<F> s2 = s0 - q * s1;
        Poly<F> t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero_poly()) return {r0, s0, t0};
    F inv = one_like(z) / r0.lead();
    return {r0.scale(inv), s0.scale(inv), t0.scale(inv)};
}

}  // namespace chab
