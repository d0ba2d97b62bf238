#pragma once

// Genus-2 curves y^2 = F(x) with deg F = 5, their points, and Jacobian
// arithmetic on Mumford pairs (u, v). The Cantor code is generic over the
// coefficient type; finite-field specific routines (point counts, group
// structure, discrete logs) live further down.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "chab/errors.hpp"
#include "chab/numfield.hpp"
#include "chab/poly.hpp"

namespace chab {

template <class F>
struct HyperCurve {
    Poly<F> f;

    HyperCurve() = default;
    explicit HyperCurve(Poly<F> rhs) : f(std::move(rhs)) {
        if (f.degree() != 5) throw DomainError("curve model must have a degree-5 right-hand side");
    }
    F zero() const { return f.zero(); }
    int genus() const { return 2; }
};

template <class F>
struct CurvePoint {
    bool infinity = true;
    F x{}, y{};

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(F x0, F y0) { return {false, std::move(x0), std::move(y0)}; }
};

template <class F>
bool on_curve(const HyperCurve<F>& C, const CurvePoint<F>& P) {
    if (P.infinity) return true;
    return is_zero(P.y * P.y - C.f.eval(P.x));
}

template <class F>
struct MumfordDiv {
    Poly<F> u, v;

    int degree() const { return u.degree(); }
    bool is_identity() const { return u.degree() == 0; }
    bool same(const MumfordDiv& o) const { return u.same(o.u) && v.same(o.v); }
    std::string str() const { return "(" + u.str() + ", " + v.str() + ")"; }
};

template <class F>
MumfordDiv<F> identity(const HyperCurve<F>& C) {
    const F z = C.zero();
    return {Poly<F>::constant(one_like(z)), Poly<F>(z)};
}

template <class F>
MumfordDiv<F> negate(const MumfordDiv<F>& D) {
    return {D.u, -D.v};
}

// [P - inf]; the identity for P = inf.
template <class F>
MumfordDiv<F> point_divisor(const HyperCurve<F>& C, const CurvePoint<F>& P) {
    if (P.infinity) return identity(C);
    const F z = C.zero();
    typename Poly<F>::Coeffs u{-P.x, one_like(z)}, v{P.y};
    return {Poly<F>(z, std::move(u)), Poly<F>(z, std::move(v))};
}

// u monic of degree <= 2, deg v < deg u, u | v^2 - F.
template <class F>
bool is_valid(const HyperCurve<F>& C, const MumfordDiv<F>& D) {
    if (D.u.is_zero_poly() || D.u.degree() > 2) return false;
    if (!same_value(D.u.lead(), one_like(C.zero()))) return false;
    if (D.v.degree() >= D.u.degree()) return false;
    return ((D.v * D.v - C.f) % D.u).is_zero_poly();
}

namespace detail {

template <class F>
MumfordDiv<F> cantor_reduce(const HyperCurve<F>& C, Poly<F> u, Poly<F> v) {
    while (u.degree() > 2) {
        Poly<F> u2 = (C.f - v * v) / u;
        v = (-v) % u2;
        u = std::move(u2);
    }
    u = u.monic();
    v = v % u;
    return {std::move(u), std::move(v)};
}

}  // namespace detail

// Cantor composition and reduction. Structurally equal inputs are doubled and
// structurally opposite inputs give the identity without any zero test, which
// keeps the p-adic instantiation away from indeterminate cancellations.
template <class F>
MumfordDiv<F> cantor_double(const HyperCurve<F>& C, const MumfordDiv<F>& D) {
    if (D.is_identity()) return D;
    const F z = C.zero();
    Poly<F> two_v = D.v.scale(from_int_like(z, 2));
    auto g = xgcd(D.u, two_v);  // g = c1 u + c2 (2v)
    Poly<F> u = (D.u * D.u) / (g.g * g.g);
    Poly<F> num = g.s * D.u * D.v + g.t * (D.v * D.v + C.f);
    Poly<F> v = (num / g.g) % u;
    return detail::cantor_reduce(C, std::move(u), std::move(v));
}

template <class F>
MumfordDiv<F> cantor_add(const HyperCurve<F>& C, const MumfordDiv<F>& A, const MumfordDiv<F>& B) {
    if (A.is_identity()) return B;
    if (B.is_identity()) return A;
    if (A.u.same(B.u)) {
        if (A.v.same(B.v)) return cantor_double(C, A);
        if (A.v.same(-B.v)) return identity(C);
    }
    auto g0 = xgcd(A.u, B.u);  // d0 = e1 u1 + e2 u2
    Poly<F> d = g0.g, s1 = g0.s, s2 = g0.t;
    Poly<F> s3(C.zero());
    if (d.degree() > 0) {
        auto g1 = xgcd(d, A.v + B.v);  // d = c1 d0 + c2 (v1 + v2)
        s1 = g1.s * s1;
        s2 = g1.s * s2;
        s3 = g1.t;
        d = g1.g;
    }
    Poly<F> u = (A.u * B.u) / (d * d);
    Poly<F> num = s1 * A.u * B.v + s2 * B.u * A.v;
    if (!s3.is_zero_poly()) num = num + s3 * (A.v * B.v + C.f);
    Poly<F> v = (num / d) % u;
    return detail::cantor_reduce(C, std::move(u), std::move(v));
}

template <class F>
MumfordDiv<F> cantor_sub(const HyperCurve<F>& C, const MumfordDiv<F>& A, const MumfordDiv<F>& B) {
    return cantor_add(C, A, negate(B));
}

template <class F>
MumfordDiv<F> scalar_mul(const HyperCurve<F>& C, const MumfordDiv<F>& D, const mpz_class& n) {
    if (n < 0) return scalar_mul(C, negate(D), mpz_class(-n));
    MumfordDiv<F> r = identity(C);
    const std::size_t bits = n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = cantor_double(C, r);
        if (mpz_tstbit(n.get_mpz_t(), i)) r = cantor_add(C, r, D);
    }
    return r;
}

template <class F>
MumfordDiv<F> scalar_mul(const HyperCurve<F>& C, const MumfordDiv<F>& D, long n) {
    return scalar_mul(C, D, mpz_class(n));
}

// ---------------------------------------------------------------------------
// Finite fields.

using FqCurve = HyperCurve<Fq>;
using FqDiv = MumfordDiv<Fq>;
using FqPoint = CurvePoint<Fq>;

// Map a curve over K to k_P. Throws BadReduction if the leading coefficient
// vanishes or the reduced quintic is not squarefree.
FqCurve reduce_curve(const HyperCurve<KElt>& C, const PrimeOfK& P, const FqCtx* k);
bool has_good_reduction(const HyperCurve<KElt>& C, const PrimeOfK& P);
FqDiv reduce_divisor(const MumfordDiv<KElt>& D, const PrimeOfK& P, const FqCurve& Cbar);

// Squarefree test over F_q.
bool is_squarefree(const Poly<Fq>& f);

// Base change of a curve to another field context containing its coefficients.
FqCurve base_change(const FqCurve& C, const FqCtx* k);

// #C(F_q) including the point at infinity.
std::uint64_t count_points_serial(const FqCurve& C);
std::uint64_t count_points(const FqCurve& C);  // OpenMP

std::vector<FqPoint> rational_points(const FqCurve& C);

// #J(F_q). Curves over a prime field use the zeta function through #C(F_p^2);
// curves over F_{p^2} combine #C(F_q) with a baby-step giant-step search for
// the remaining L-polynomial coefficient.
mpz_class jacobian_order(const FqCurve& C, std::uint64_t seed = 1);

FqDiv random_divisor(const FqCurve& C, std::mt19937_64& rng);

// Every reduced Mumford pair over a small field (testing oracle).
std::vector<FqDiv> enumerate_divisors(const FqCurve& C);

std::uint64_t div_hash(const FqDiv& D);

struct AbGroupStruct {
    std::vector<std::uint64_t> orders;  // d_1 | d_2 | ...
    std::vector<FqDiv> generators;
    std::uint64_t order = 1;
};

// Baby-step table for discrete logs in a finite abelian group given by a basis.
class BabyTable;

class JacobianGroup {
public:
    JacobianGroup(FqCurve C, std::uint64_t order, std::uint64_t seed = 1);
    // Computes the order first.
    static JacobianGroup of_curve(FqCurve C, std::uint64_t seed = 1);
    ~JacobianGroup();
    JacobianGroup(JacobianGroup&&) noexcept;
    JacobianGroup& operator=(JacobianGroup&&) noexcept;

    const FqCurve& curve() const { return C_; }
    const AbGroupStruct& structure() const { return S_; }
    std::uint64_t order() const { return S_.order; }

    // Coordinates w.r.t. structure().generators, reduced mod the orders.
    // Throws NotInGroup if D is not an element of J(F_q).
    std::vector<std::uint64_t> dlog(const FqDiv& D) const;
    FqDiv combine(const std::vector<std::uint64_t>& coords) const;

    // Prepare baby tables sized for roughly `expected_targets` discrete logs.
    void prepare(std::size_t expected_targets) const;

    std::vector<std::vector<std::uint64_t>> dlog_batch_serial(const std::vector<FqDiv>& Ds) const;
    std::vector<std::vector<std::uint64_t>> dlog_batch(const std::vector<FqDiv>& Ds) const;  // OpenMP

private:
    struct Sylow;
    void build(std::uint64_t seed);
    std::vector<std::uint64_t> sylow_dlog(const Sylow& S, const FqDiv& x) const;

    FqCurve C_;
    AbGroupStruct S_;
    std::vector<std::unique_ptr<Sylow>> sylow_;
};

AbGroupStruct group_structure(const JacobianGroup& G);
std::vector<std::uint64_t> dlog_vector(const JacobianGroup& G, const FqDiv& D);

}  // namespace chab
