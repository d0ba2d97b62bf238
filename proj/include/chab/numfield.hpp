#pragma once

// Exact arithmetic in a quadratic field K = Q[x]/(x^2 + u x + v), its primes
// above odd rational primes, and the residue fields k_P (F_p or F_{p^2}).

#include <compare>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "chab/errors.hpp"

namespace chab {

struct QuadField {
    long u = -1;  // minimal polynomial x^2 + u x + v of theta
    long v = 3;

    long disc() const { return u * u - 4 * v; }
    bool operator==(const QuadField&) const = default;

    // Throws DomainError when x^2+ux+v is reducible over Q.
    void validate() const;
};

class KElt {
public:
    KElt() = default;
    KElt(const QuadField& F, mpq_class c0, mpq_class c1 = 0);
    static KElt theta(const QuadField& F) { return KElt(F, 0, 1); }

    const QuadField& field() const { return F_; }
    const mpq_class& c0() const { return c0_; }
    const mpq_class& c1() const { return c1_; }

    KElt operator+(const KElt& o) const;
    KElt operator-(const KElt& o) const;
    KElt operator*(const KElt& o) const;
    KElt operator/(const KElt& o) const;
    KElt operator-() const { return KElt(F_, -c0_, -c1_); }
    KElt& operator+=(const KElt& o) { return *this = *this + o; }
    KElt& operator-=(const KElt& o) { return *this = *this - o; }
    KElt& operator*=(const KElt& o) { return *this = *this * o; }
    bool operator==(const KElt& o) const { return c0_ == o.c0_ && c1_ == o.c1_; }

    bool is_zero() const { return c0_ == 0 && c1_ == 0; }
    bool is_rational() const { return c1_ == 0; }

    // Lowest common denominator of both coordinates.
    mpz_class denominator() const;

    std::string str() const;

private:
    QuadField F_;
    mpq_class c0_ = 0, c1_ = 0;
};

KElt conj(const KElt& x);
mpq_class norm(const KElt& x);
mpq_class trace(const KElt& x);

std::ostream& operator<<(std::ostream& os, const KElt& x);

// Generic-field glue used by the polynomial and Cantor templates.
inline bool is_zero(const KElt& x) { return x.is_zero(); }
inline bool is_negligible(const KElt& x) { return x.is_zero(); }
inline KElt zero_like(const KElt& x) { return KElt(x.field(), 0); }
inline KElt one_like(const KElt& x) { return KElt(x.field(), 1); }
inline KElt from_int_like(const KElt& x, long n) { return KElt(x.field(), n); }
inline bool same_value(const KElt& a, const KElt& b) { return a == b; }

enum class PrimeKind { split, inert, ramified };
std::string to_string(PrimeKind k);

struct PrimeOfK {
    long p = 0;
    PrimeKind kind = PrimeKind::split;
    long theta_residue = -1;  // root of the minimal polynomial mod p (split / ramified)
    int index = 1;            // 1 or 2 for the two primes above a split p

    int residue_degree() const { return kind == PrimeKind::inert ? 2 : 1; }
    std::string str() const;
    bool operator==(const PrimeOfK&) const = default;
};

// Primes of K above the odd prime p; split primes ordered by theta_residue.
std::vector<PrimeOfK> splitting_type(const QuadField& F, long p);

// ---------------------------------------------------------------------------
// Residue fields. A context describes F_p (degree 1) or F_p[t]/(t^2+u t+v)
// (degree 2); elements carry a pointer to their context.

class FqCtx {
public:
    // Degree-1 field F_p.
    static std::shared_ptr<const FqCtx> prime_field(std::uint32_t p);
    // Degree-2 field F_p[t]/(t^2 + u t + v); t^2+ut+v must be irreducible mod p.
    static std::shared_ptr<const FqCtx> quadratic(std::uint32_t p, std::uint32_t u, std::uint32_t v);
    // Some quadratic extension of F_p (t^2 - n for the least non-residue n).
    static std::shared_ptr<const FqCtx> quadratic_ext(std::uint32_t p);
    // Residue field at a prime of K.
    static std::shared_ptr<const FqCtx> residue_field(const QuadField& F, const PrimeOfK& P);

    std::uint32_t p() const { return p_; }
    int degree() const { return deg_; }
    std::uint64_t order() const { return deg_ == 1 ? p_ : std::uint64_t(p_) * p_; }
    std::uint32_t poly_u() const { return u_; }
    std::uint32_t poly_v() const { return v_; }

    std::uint32_t inv_p(std::uint32_t a) const { return inv_[a]; }
    bool is_square_p(std::uint32_t a) const { return sq_[a] != 0; }

private:
    FqCtx(std::uint32_t p, int deg, std::uint32_t u, std::uint32_t v);

    std::uint32_t p_;
    int deg_;
    std::uint32_t u_ = 0, v_ = 0;
    std::vector<std::uint32_t> inv_;
    std::vector<std::uint8_t> sq_;
};

// Element a + b t of a residue field.
struct Fq {
    std::uint32_t a = 0, b = 0;
    const FqCtx* k = nullptr;

    Fq() = default;
    Fq(const FqCtx* ctx, std::uint32_t a_, std::uint32_t b_ = 0) : a(a_), b(b_), k(ctx) {}
    static Fq from_int(const FqCtx* ctx, long n);

    Fq operator+(const Fq& o) const {
        std::uint32_t p = k->p();
        std::uint32_t x = a + o.a, y = b + o.b;
        return Fq(k, x >= p ? x - p : x, y >= p ? y - p : y);
    }
    Fq operator-(const Fq& o) const {
        std::uint32_t p = k->p();
        return Fq(k, a >= o.a ? a - o.a : a + p - o.a, b >= o.b ? b - o.b : b + p - o.b);
    }
    Fq operator-() const {
        std::uint32_t p = k->p();
        return Fq(k, a ? p - a : 0, b ? p - b : 0);
    }
    Fq operator*(const Fq& o) const {
        const std::uint64_t p = k->p();
        if (k->degree() == 1) return Fq(k, std::uint32_t((std::uint64_t(a) * o.a) % p), 0);
        // t^2 = -u t - v
        std::uint64_t bb = (std::uint64_t(b) * o.b) % p;
        std::uint64_t c0 = (std::uint64_t(a) * o.a + (p - k->poly_v()) * bb) % p;
        std::uint64_t c1 = (std::uint64_t(a) * o.b + std::uint64_t(b) * o.a + (p - k->poly_u()) * bb) % p;
        return Fq(k, std::uint32_t(c0), std::uint32_t(c1));
    }
    Fq& operator+=(const Fq& o) { return *this = *this + o; }
    Fq& operator-=(const Fq& o) { return *this = *this - o; }
    Fq& operator*=(const Fq& o) { return *this = *this * o; }

    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const Fq& o) const { return a == o.a && b == o.b; }

    Fq conj() const;   // Frobenius (identity on F_p)
    std::uint32_t norm() const;  // into F_p
    Fq inv() const;
    Fq operator/(const Fq& o) const { return *this * o.inv(); }
    bool is_square() const;
    Fq pow(std::uint64_t e) const;
    // Index in [0, q): a + p*b.
    std::uint64_t index() const { return std::uint64_t(a) + std::uint64_t(k->p()) * b; }
    static Fq from_index(const FqCtx* ctx, std::uint64_t i) {
        return Fq(ctx, std::uint32_t(i % ctx->p()), std::uint32_t(i / ctx->p()));
    }
    std::string str() const;
};

inline bool is_zero(const Fq& x) { return x.is_zero(); }
inline bool is_negligible(const Fq& x) { return x.is_zero(); }
inline Fq zero_like(const Fq& x) { return Fq(x.k, 0, 0); }
inline Fq one_like(const Fq& x) { return Fq(x.k, 1, 0); }
inline Fq from_int_like(const Fq& x, long n) { return Fq::from_int(x.k, n); }
inline bool same_value(const Fq& a, const Fq& b) { return a == b; }

// Square root in F_q; returns false if x is a non-square.
bool fq_sqrt(const Fq& x, Fq& root);

using ResidueFieldElt = Fq;

// Reduction O_K -> k_P. Throws NonIntegral when the denominator is divisible by p.
Fq reduce(const KElt& x, const PrimeOfK& P, const FqCtx* k);
Fq reduce(const mpq_class& x, const FqCtx* k);

}  // namespace chab
