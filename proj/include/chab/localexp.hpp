#pragma once

// Truncated Laurent series and local charts on y^2 = F(x) at a point: an affine
// non-Weierstrass point (x - x0), an affine Weierstrass point (c*y) and the
// point at infinity (c*x^2/y).

#include <string>
#include <utility>
#include <vector>

#include "chab/errors.hpp"
#include "chab/hyperell.hpp"
#include "chab/numfield.hpp"
#include "chab/padic.hpp"

namespace chab {

inline bool exact_zero(const PadicNum& a) { return a.is_exact_zero(); }
inline bool exact_zero(const PadicExtElt& a) { return a.is_exact_zero(); }
inline bool exact_zero(const KElt& a) { return a.is_zero(); }
inline bool exact_zero(const Fq& a) { return a.is_zero(); }

inline long val_of(const PadicNum& a) { return a.valuation(); }
inline long val_of(const PadicExtElt& a) { return a.valuation(); }

// sum_{i<n} c[i] T^(val+i) + O(T^(val+n))
template <class F>
class PowerSeries {
public:
    PowerSeries() = default;
    PowerSeries(F zero, int val, std::vector<F> coeffs) : zero_(zero_like(zero)), val_(val), c_(std::move(coeffs)) {}

    // a + O(T^prec)
    static PowerSeries constant(const F& a, int prec) {
        std::vector<F> c(std::size_t(std::max(prec, 0)), zero_like(a));
        if (prec > 0) c[0] = a;
        return PowerSeries(a, 0, std::move(c));
    }
    // T + O(T^prec)
    static PowerSeries variable(const F& exemplar, int prec) {
        std::vector<F> c(std::size_t(std::max(prec - 1, 0)), zero_like(exemplar));
        if (prec > 1) c[0] = one_like(exemplar);
        return PowerSeries(exemplar, 1, std::move(c));
    }
    // Polynomial evaluated as a series, truncated at prec.
    static PowerSeries from_poly(const Poly<F>& f, int prec) {
        std::vector<F> c(std::size_t(std::max(prec, 0)), f.zero());
        for (int i = 0; i < prec && i <= f.degree(); ++i) c[i] = f[i];
        return PowerSeries(f.zero(), 0, std::move(c));
    }

    const F& zero() const { return zero_; }
    int val() const { return val_; }
    int prec() const { return val_ + int(c_.size()); }
    int terms() const { return int(c_.size()); }
    // Coefficient of T^k (zero below the stored range; PrecisionLoss beyond it).
    F operator[](int k) const {
        if (k < val_) return zero_;
        if (k >= prec()) throw PrecisionLoss("series coefficient beyond truncation order");
        return c_[k - val_];
    }
    const std::vector<F>& coeffs() const { return c_; }

    // Drop leading exact zeros.
    PowerSeries normalized() const {
        std::size_t s = 0;
        while (s < c_.size() && exact_zero(c_[s])) ++s;
        return PowerSeries(zero_, val_ + int(s), std::vector<F>(c_.begin() + s, c_.end()));
    }
    // Order of the first coefficient that is not an exact zero (prec() if none).
    int order() const { return normalized().val(); }

    PowerSeries truncate(int prec) const {
        if (prec >= this->prec()) return *this;
        return PowerSeries(zero_, val_, std::vector<F>(c_.begin(), c_.begin() + std::max(0, prec - val_)));
    }

    PowerSeries operator+(const PowerSeries& o) const {
        const int v = std::min(val_, o.val_), pr = std::min(prec(), o.prec());
        std::vector<F> c(std::size_t(std::max(pr - v, 0)), zero_);
        for (int k = v; k < pr; ++k) c[k - v] = (*this)[k] + o[k];
        return PowerSeries(zero_, v, std::move(c));
    }
    PowerSeries operator-() const {
        std::vector<F> c(c_);
        for (auto& a : c) a = -a;
        return PowerSeries(zero_, val_, std::move(c));
    }
    PowerSeries operator-(const PowerSeries& o) const { return *this + (-o); }
    PowerSeries operator*(const PowerSeries& o) const {
        const PowerSeries a = normalized(), b = o.normalized();
        const int n = std::min(a.terms(), b.terms());
        std::vector<F> c(std::size_t(n), zero_);
        for (int i = 0; i < n; ++i) {
            if (exact_zero(a.c_[i])) continue;
            for (int j = 0; i + j < n; ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return PowerSeries(zero_, a.val_ + b.val_, std::move(c));
    }
    PowerSeries scale(const F& s) const {
        std::vector<F> c(c_);
        for (auto& a : c) a = a * s;
        return PowerSeries(zero_, val_, std::move(c));
    }
    // The same series with its T^0 coefficient replaced by an exact zero.
    PowerSeries drop_constant() const {
        std::vector<F> c(c_);
        if (val_ <= 0 && -val_ < int(c.size())) c[std::size_t(-val_)] = zero_;
        return PowerSeries(zero_, val_, std::move(c));
    }
    // Multiply by T^k.
    PowerSeries shift(int k) const { return PowerSeries(zero_, val_ + k, c_); }
    // T -> s T
    PowerSeries rescale(const F& s) const {
        std::vector<F> c(c_);
        F pw = one_like(zero_);
        int k0 = val_;
        if (k0 < 0) {
            const F si = one_like(zero_) / s;
            for (int k = 0; k < -k0; ++k) pw = pw * si;
        } else {
            for (int k = 0; k < k0; ++k) pw = pw * s;
        }
        for (auto& a : c) {
            a = a * pw;
            pw = pw * s;
        }
        return PowerSeries(zero_, val_, std::move(c));
    }

    // Requires the leading coefficient to be invertible.
    PowerSeries inverse() const {
        const PowerSeries a = normalized();
        const int n = a.terms();
        if (n == 0) throw PrecisionLoss("inverse of a series with no known nonzero term");
        std::vector<F> b(std::size_t(n), zero_);
        const F inv0 = one_like(zero_) / a.c_[0];
        b[0] = inv0;
        for (int k = 1; k < n; ++k) {
            F s = zero_;
            for (int i = 1; i <= k; ++i)
                if (!exact_zero(a.c_[i])) s += a.c_[i] * b[k - i];
            b[k] = -(s * inv0);
        }
        return PowerSeries(zero_, -a.val_, std::move(b));
    }
    PowerSeries operator/(const PowerSeries& o) const { return *this * o.inverse(); }

    // Square root with the given square root r of the leading coefficient.
    PowerSeries sqrt_with_lead(const F& r) const {
        const PowerSeries a = normalized();
        if (a.val_ % 2 != 0) throw DomainError("square root of a series of odd order");
        const int n = a.terms();
        std::vector<F> s(std::size_t(n), zero_);
        if (n == 0) return PowerSeries(zero_, a.val_ / 2, std::move(s));
        const F inv2r = one_like(zero_) / (r * from_int_like(zero_, 2));
        s[0] = r;
        for (int k = 1; k < n; ++k) {
            F acc = a.c_[k];
            for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
            s[k] = acc * inv2r;
        }
        return PowerSeries(zero_, a.val_ / 2, std::move(s));
    }

    PowerSeries derivative() const {
        std::vector<F> c(c_.size(), zero_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const long k = val_ + long(i);
            if (k != 0) c[i] = c_[i] * from_int_like(zero_, k);
        }
        return PowerSeries(zero_, val_ - 1, std::move(c));
    }

    // Termwise antiderivative with zero constant term.
    PowerSeries integrate() const {
        std::vector<F> c(c_.size(), zero_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const long k = val_ + long(i);
            if (k == -1) {
                if (!is_zero(c_[i])) throw DomainError("series has a residue term T^-1");
                continue;
            }
            c[i] = c_[i] / from_int_like(zero_, k + 1);
        }
        return PowerSeries(zero_, val_ + 1, std::move(c));
    }

    // this(g(T)); requires val() >= 0 and g of positive order. The result is
    // known to O(T^prec) with prec <= out_prec.
    PowerSeries compose(const PowerSeries& g, int out_prec) const {
        const PowerSeries gn = g.normalized();
        if (val_ < 0) throw DomainError("compose needs a power series (no poles)");
        if (gn.val() < 1) throw DomainError("compose needs an argument of positive order");
        const int pr = std::min({out_prec, gn.prec() + 0, prec() * gn.val()});
        PowerSeries r = constant(zero_, pr);
        for (int k = prec() - 1; k >= 0; --k) {
            r = (r * gn).truncate(pr);
            if (r.prec() < pr) r = r.padded(pr);
            r = r + constant((*this)[k], pr);
        }
        return r.truncate(pr);
    }

    // Compositional inverse of a series a1 T + a2 T^2 + ... with a1 invertible.
    PowerSeries revert() const {
        const PowerSeries s = normalized();
        if (s.val() != 1) throw DomainError("reversion needs a series of order exactly 1");
        const int pr = s.prec();
        const F inv1 = one_like(zero_) / s.c_[0];
        PowerSeries T = variable(zero_, pr);
        PowerSeries tail = s - PowerSeries(zero_, 1, std::vector<F>{s.c_[0]}).padded(pr);
        PowerSeries r = T.scale(inv1);
        for (int it = 1; it < pr; ++it) r = (T - tail.compose(r, pr)).scale(inv1);
        return r;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (exact_zero(c_[i])) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c_[i].str() + ")*T^" + std::to_string(val_ + int(i));
        }
        return (s.empty() ? "0" : s) + " + O(T^" + std::to_string(prec()) + ")";
    }

private:
    // Extend with zero coefficients up to prec (only valid for exactly known tails).
    PowerSeries padded(int pr) const {
        std::vector<F> c(c_);
        while (val_ + int(c.size()) < pr) c.push_back(zero_);
        return PowerSeries(zero_, val_, std::move(c));
    }

    F zero_{};
    int val_ = 0;
    std::vector<F> c_;
};

// ---------------------------------------------------------------------------
// Uniformizers and charts

enum class UniKind { XShift, Scaled };

// XShift: x - x0.  Scaled: c * x^a / y^b (a=2, b=1 at infinity; a=0, b=-1 at
// a Weierstrass point).
struct UniformizerSpec {
    UniKind kind = UniKind::XShift;
    KElt c;
    int a = 0, b = 0;

    static UniformizerSpec xshift() { return {}; }
    static UniformizerSpec scaled(KElt c, int a, int b) { return {UniKind::Scaled, std::move(c), a, b}; }
    std::string str() const;
};

enum class PointType { affine, weierstrass, infinity };

template <class F>
struct LocalChart {
    PointType type = PointType::affine;
    CurvePoint<F> P0;
    F c{};   // uniformizer scaling (1 for XShift)
    PowerSeries<F> x, y;
};

template <class F>
struct PsiExpansion {
    int e = 1;
    F upsilon{};
    PowerSeries<F> series;  // psi - psi(P0), or 1/x at infinity
};

namespace detail {

template <class F>
bool is_unit(const F& a) {
    return !exact_zero(a) && !a.is_indistinguishable_from_zero() && val_of(a) == 0;
}

// z(t) with z = t^2 * Fhat(z), Fhat(z) = z^5 F(1/z); z = c5 t^2 + ...
template <class F>
PowerSeries<F> infinity_z(const Poly<F>& f, int prec) {
    const F z0 = f.zero();
    std::vector<F> tc(std::size_t(std::max(prec - 2, 0)), z0);
    if (!tc.empty()) tc[0] = one_like(z0);
    const PowerSeries<F> t2(z0, 2, std::move(tc));
    PowerSeries<F> z = PowerSeries<F>::constant(z0, prec);
    const int iters = prec / 2 + 2;
    for (int it = 0; it < iters; ++it) {
        // Fhat(z) = c5 + c4 z + ... + c0 z^5 by Horner
        PowerSeries<F> h = PowerSeries<F>::constant(f[0], prec);
        for (int k = 1; k <= 5; ++k) h = (h * z).truncate(prec) + PowerSeries<F>::constant(f[k], prec);
        z = (t2 * h).truncate(prec);
    }
    return z;
}

// delta(s) with s = b1 delta + b2 delta^2 + ... + b5 delta^5 (b_k coefficients of F(e + delta)).
template <class F>
PowerSeries<F> weierstrass_delta(const std::vector<F>& b, int prec) {
    const F z0 = zero_like(b[1]);
    const F inv1 = one_like(z0) / b[1];
    PowerSeries<F> s = PowerSeries<F>::variable(z0, prec);
    PowerSeries<F> d = s.scale(inv1);
    for (int it = 0; it < prec + 1; ++it) {
        PowerSeries<F> tail = PowerSeries<F>::constant(z0, prec);
        for (int k = int(b.size()) - 1; k >= 2; --k) tail = (tail + PowerSeries<F>::constant(b[k], prec)) * d;
        tail = (tail * d).truncate(prec);
        d = (s - tail).scale(inv1).truncate(prec);
    }
    return d;
}

// Coefficients of F(e + delta) in delta.
template <class F>
std::vector<F> taylor_shift(const Poly<F>& f, const F& e) {
    std::vector<F> b(std::size_t(f.degree()) + 1, f.zero());
    Poly<F> g = f;
    for (std::size_t k = 0; k < b.size(); ++k) {
        b[k] = g.eval(e);
        g = g.derivative();
        // divide by (k+1) at the next step through the factorial below
    }
    F fact = one_like(f.zero());
    for (std::size_t k = 1; k < b.size(); ++k) {
        fact = fact * from_int_like(f.zero(), long(k));
        b[k] = b[k] / fact;
    }
    return b;
}

}  // namespace detail

// N is the number of series terms kept in x and y (relative precision).
template <class F>
LocalChart<F> expand_chart(const HyperCurve<F>& C, const CurvePoint<F>& P0, const UniformizerSpec& tau, const F& c,
                           int N) {
    const F z0 = C.zero();
    const F one = one_like(z0);
    LocalChart<F> ch;
    ch.P0 = P0;
    ch.c = tau.kind == UniKind::XShift ? one : c;
    if (P0.infinity) {
        if (tau.kind != UniKind::Scaled || tau.a != 2 || tau.b != 1)
            throw NotUniformizer("at infinity the uniformizer must be c*x^2/y");
        if (!detail::is_unit(c) || !detail::is_unit(C.f[5]))
            throw NotUniformizer("c*x^2/y does not reduce to a uniformizer at infinity");
        ch.type = PointType::infinity;
        PowerSeries<F> z = detail::infinity_z(C.f, N + 2);  // t-series, val 2
        PowerSeries<F> t = PowerSeries<F>::variable(z0, N + 1);
        PowerSeries<F> x = z.inverse();
        PowerSeries<F> y = (z * z * t).inverse();
        const F ci = one / c;  // t = T / c
        ch.x = x.rescale(ci);
        ch.y = y.rescale(ci);
        return ch;
    }
    const bool weier = exact_zero(P0.y);
    if (!weier) {
        if (tau.kind != UniKind::XShift) throw NotUniformizer("only x - x0 is supported at affine non-Weierstrass points");
        if (!detail::is_unit(P0.y))
            throw NotUniformizer("point reduces to a Weierstrass point; x - x0 is not a uniformizer there");
        ch.type = PointType::affine;
        std::vector<F> b = detail::taylor_shift(C.f, P0.x);
        std::vector<F> g(std::size_t(N), z0);
        const F inv0 = one / b[0];
        for (int k = 0; k < N && k < int(b.size()); ++k) g[k] = b[k] * inv0;
        PowerSeries<F> ratio(z0, 0, std::move(g));
        ch.x = PowerSeries<F>::constant(P0.x, N) + PowerSeries<F>::variable(z0, N);
        ch.y = ratio.sqrt_with_lead(one).scale(P0.y);
        return ch;
    }
    if (tau.kind != UniKind::Scaled || tau.a != 0 || tau.b != -1)
        throw NotUniformizer("at a Weierstrass point the uniformizer must be c*y");
    std::vector<F> b = detail::taylor_shift(C.f, P0.x);
    if (!detail::is_unit(b[1]) || !detail::is_unit(c))
        throw NotUniformizer("c*y does not reduce to a uniformizer at this Weierstrass point");
    ch.type = PointType::weierstrass;
    b[0] = z0;
    const int ns = (N + 1) / 2 + 1;
    PowerSeries<F> d = detail::weierstrass_delta(b, ns);  // in s = y^2
    PowerSeries<F> yT = PowerSeries<F>::variable(z0, N).scale(one / c);
    PowerSeries<F> s = (yT * yT).truncate(N);
    ch.y = yT;
    ch.x = PowerSeries<F>::constant(P0.x, N) + d.compose(s, N);
    return ch;
}

template <class F>
PsiExpansion<F> psi_expansion(const LocalChart<F>& ch) {
    PsiExpansion<F> out;
    if (ch.type == PointType::infinity)
        out.series = ch.x.inverse();
    else
        out.series = ch.x.drop_constant();
    PowerSeries<F> s = out.series.normalized();
    if (s.terms() == 0) throw PrecisionLoss("psi expansion has no known nonzero term");
    out.e = s.val();
    out.upsilon = s.coeffs()[0];
    const int expected = ch.type == PointType::affine ? 1 : 2;
    if (out.e != expected) throw RamificationMismatch("unexpected ramification index of psi");
    if (!detail::is_unit(out.upsilon))
        throw RamificationMismatch("leading coefficient of psi is not a unit: reduced ramification differs");
    return out;
}

// omega_f / dT as a series, omega_f = x^(f-1) dx / (2y).
template <class F>
PowerSeries<F> omega_series(int f, const LocalChart<F>& ch) {
    const F z0 = ch.x.zero();
    PowerSeries<F> num = ch.x.derivative();
    for (int i = 1; i < f; ++i) num = num * ch.x;
    return num * ch.y.scale(from_int_like(z0, 2)).inverse();
}

template <class F>
F alpha_of(int f, const LocalChart<F>& ch) {
    PowerSeries<F> w = omega_series(f, ch);
    if (w.normalized().val() < 0) throw NonIntegral("differential has a pole at the chart center");
    F a = w[0];
    if (!exact_zero(a) && !a.is_indistinguishable_from_zero() && val_of(a) < 0)
        throw NonIntegral("alpha is not integral");
    return a;
}

template <class F>
PowerSeries<F> integrate_series(const PowerSeries<F>& s) {
    return s.integrate();
}

}  // namespace chab
