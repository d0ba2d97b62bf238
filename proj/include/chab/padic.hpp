#pragma once

// p-adic numbers with capped relative precision, the unramified quadratic
// extension (and the split algebra Q_p x Q_p), Hensel lifting and the
// linear-factor searches used by the ramified criteria.

#include <climits>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "chab/errors.hpp"
#include "chab/numfield.hpp"
#include "chab/poly.hpp"

namespace chab {

// Shared data for a prime p and a working precision cap M.
class PadicCtx {
public:
    static const PadicCtx* get(long p, int M);

    long p() const { return p_; }
    int cap() const { return M_; }
    const mpz_class& pz() const { return pz_; }
    // p^k for 0 <= k (cached up to a generous bound).
    const mpz_class& pow(int k) const;

private:
    PadicCtx(long p, int M);
    long p_;
    int M_;
    mpz_class pz_;
    std::vector<mpz_class> pow_;
};

constexpr long kInfPrec = LONG_MAX / 4;

// value = p^val * unit + O(p^(val + rel)); rel = 0 means "zero to absolute
// precision val". The exact zero is a separate state.
class PadicNum {
public:
    PadicNum() = default;
    static PadicNum zero(const PadicCtx* c) { return PadicNum(c); }
    static PadicNum exact_zero(const PadicCtx* c) { return PadicNum(c); }
    // Zero known only modulo p^absprec.
    static PadicNum approx_zero(const PadicCtx* c, long absprec);
    static PadicNum from_int(const PadicCtx* c, const mpz_class& n, int rel = -1);
    static PadicNum from_rational(const PadicCtx* c, const mpq_class& x, int rel = -1);
    // p^val * unit with the given relative precision (unit need not be reduced).
    static PadicNum make(const PadicCtx* c, long val, const mpz_class& unit, int rel);

    const PadicCtx* ctx() const { return ctx_; }
    long p() const { return ctx_->p(); }
    bool is_exact_zero() const { return exact_; }
    // Zero to all known digits (exact or approximate).
    bool is_indistinguishable_from_zero() const { return exact_ || rel_ == 0; }
    // Valuation; for an approximate zero this is its absolute precision (a lower bound).
    long valuation() const { return exact_ ? kInfPrec : val_; }
    int rel_prec() const { return exact_ ? INT_MAX : rel_; }
    long abs_prec() const { return exact_ ? kInfPrec : val_ + rel_; }
    const mpz_class& unit() const { return unit_; }

    // Valuation, or PrecisionLoss if this is an approximate zero.
    long checked_valuation() const;

    PadicNum operator+(const PadicNum& o) const;
    PadicNum operator-(const PadicNum& o) const;
    PadicNum operator*(const PadicNum& o) const;
    PadicNum operator/(const PadicNum& o) const;
    PadicNum operator-() const;
    PadicNum& operator+=(const PadicNum& o) { return *this = *this + o; }
    PadicNum& operator-=(const PadicNum& o) { return *this = *this - o; }
    PadicNum& operator*=(const PadicNum& o) { return *this = *this * o; }

    PadicNum inverse() const;
    // Multiply by an exact integer without capping precision.
    PadicNum scale(long n) const;
    // Multiply by p^k exactly.
    PadicNum shift(long k) const;
    // Lower the absolute precision to at most absprec.
    PadicNum cap_abs(long absprec) const;
    // Raise the relative precision by padding with zero digits (used for exact inputs).
    PadicNum with_rel(int rel) const;

    // Integer representative of the value mod p^k (requires valuation >= 0 and abs_prec >= k).
    mpz_class mod_pk(int k) const;
    long residue() const { return mod_pk(1).get_si(); }
    // Rational representative p^val * unit.
    mpq_class lift() const;
    // Symmetric residue representative in (-p^k/2, p^k/2].
    mpz_class centered(int k) const;

    // Structural equality.
    bool same(const PadicNum& o) const;
    // Agreement modulo p^k (both must be known there).
    bool equal_mod(const PadicNum& o, long k) const;

    std::string str() const;

private:
    explicit PadicNum(const PadicCtx* c) : ctx_(c) {}
    void normalize();

    const PadicCtx* ctx_ = nullptr;
    bool exact_ = true;
    long val_ = 0;
    int rel_ = 0;
    mpz_class unit_ = 0;
};

// Generic-field glue.
bool is_zero(const PadicNum& x);  // throws PrecisionLoss for approximate zeros
// Zero to at least half the working precision; a coarser approximate zero
// makes is_negligible throw like is_zero.
bool is_negligible(const PadicNum& x);
inline PadicNum zero_like(const PadicNum& x) { return PadicNum::zero(x.ctx()); }
inline PadicNum one_like(const PadicNum& x) { return PadicNum::from_int(x.ctx(), 1); }
inline PadicNum from_int_like(const PadicNum& x, long n) { return PadicNum::from_int(x.ctx(), n); }
inline bool same_value(const PadicNum& a, const PadicNum& b) { return a.same(b); }

// ---------------------------------------------------------------------------

enum class ExtMode { split, inert };

// In inert mode: c0 + c1 theta with theta^2 + u theta + v = 0 over Z_p.
// In split mode: the pair of images of an element of K under the two
// embeddings K -> Q_p (c0 at the first prime, c1 at the second).
class PadicExtElt {
public:
    PadicExtElt() = default;
    PadicExtElt(ExtMode mode, long u, long v, PadicNum c0, PadicNum c1);
    static PadicExtElt inert(long u, long v, PadicNum c0, PadicNum c1) {
        return PadicExtElt(ExtMode::inert, u, v, std::move(c0), std::move(c1));
    }

    ExtMode mode() const { return mode_; }
    long u() const { return u_; }
    long v() const { return v_; }
    const PadicCtx* ctx() const { return c0_.ctx(); }
    const PadicNum& c0() const { return c0_; }
    const PadicNum& c1() const { return c1_; }

    PadicExtElt operator+(const PadicExtElt& o) const;
    PadicExtElt operator-(const PadicExtElt& o) const;
    PadicExtElt operator*(const PadicExtElt& o) const;
    PadicExtElt operator/(const PadicExtElt& o) const;
    PadicExtElt operator-() const;
    PadicExtElt& operator+=(const PadicExtElt& o) { return *this = *this + o; }
    PadicExtElt& operator-=(const PadicExtElt& o) { return *this = *this - o; }
    PadicExtElt& operator*=(const PadicExtElt& o) { return *this = *this * o; }

    PadicExtElt conj() const;   // inert: Frobenius; split: swap components
    PadicNum norm() const;      // inert only
    PadicNum trace() const;     // inert only
    PadicExtElt inverse() const;
    // Inert: min of coordinate valuations (exact since the extension is unramified).
    long valuation() const;
    long abs_prec() const { return std::min(c0_.abs_prec(), c1_.abs_prec()); }
    PadicExtElt cap_abs(long absprec) const;
    PadicExtElt shift(long k) const { return {mode_, u_, v_, c0_.shift(k), c1_.shift(k)}; }
    bool same(const PadicExtElt& o) const { return c0_.same(o.c0_) && c1_.same(o.c1_); }
    bool is_exact_zero() const { return c0_.is_exact_zero() && c1_.is_exact_zero(); }
    bool is_indistinguishable_from_zero() const {
        return c0_.is_indistinguishable_from_zero() && c1_.is_indistinguishable_from_zero();
    }
    PadicExtElt scalar(long n) const;
    PadicExtElt from_base(const PadicNum& a) const;

    // Reduction to the residue field F_p[t]/(t^2+ut+v) (inert mode).
    Fq residue(const FqCtx* k) const;

    std::string str() const;

private:
    ExtMode mode_ = ExtMode::inert;
    long u_ = 0, v_ = 0;
    PadicNum c0_, c1_;
};

bool is_zero(const PadicExtElt& x);
inline bool is_negligible(const PadicExtElt& x) { return is_negligible(x.c0()) && is_negligible(x.c1()); }
inline PadicExtElt zero_like(const PadicExtElt& x) { return x.from_base(PadicNum::zero(x.ctx())); }
inline PadicExtElt one_like(const PadicExtElt& x) { return x.from_base(PadicNum::from_int(x.ctx(), 1)); }
inline PadicExtElt from_int_like(const PadicExtElt& x, long n) { return x.from_base(PadicNum::from_int(x.ctx(), n)); }
inline bool same_value(const PadicExtElt& a, const PadicExtElt& b) { return a.same(b); }

// ---------------------------------------------------------------------------

// Image of theta in Q_p for a split prime (Hensel lift of theta_residue).
PadicNum theta_image(const QuadField& F, const PrimeOfK& P, int M);

// Split primes: x -> Q_p via theta -> theta_image.
PadicNum embed_split(const KElt& x, const PrimeOfK& P, int M);
// Inert primes: exact coordinates over {1, theta}.
PadicExtElt embed_inert(const KElt& x, const PrimeOfK& P, int M);
// K tensor Q_p for a split p as a pair of completions (split mode).
PadicExtElt embed_split_pair(const KElt& x, long p, int M);

// Coefficient-type-generic embedding used by templates.
template <class F>
F embed_as(const KElt& x, const PrimeOfK& P, int M);
template <>
inline PadicNum embed_as<PadicNum>(const KElt& x, const PrimeOfK& P, int M) {
    return embed_split(x, P, M);
}
template <>
inline PadicExtElt embed_as<PadicExtElt>(const KElt& x, const PrimeOfK& P, int M) {
    return embed_inert(x, P, M);
}

// Newton lifting of a simple root r0 of f mod p to precision M.
PadicNum hensel_lift_root(const Poly<PadicNum>& f, long r0, int M);

// All gamma in Z_p^* with u1 gamma^e = uc (to precision M).
std::vector<PadicNum> linear_factors_power(const PadicNum& u1, const PadicNum& uc, int e, int M);

// Linear factors g1 T1 - g2 T2 of the binary form sum_i w[i] T1^(e-i) T2^i over Z_p,
// normalized so that min(val g1, val g2) = 0 and the first unit coordinate is 1.
std::vector<std::pair<PadicNum, PadicNum>> factor_binary_form(const std::vector<PadicNum>& w, int M);

}  // namespace chab
