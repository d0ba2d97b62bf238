#pragma once

// Two-cover descent for Y : y^2 = q(x) Phi(x) with q, Phi in Z[x] and Phi
// splitting over K as f * conj(f). The rational points of Y are recovered from
// points with rational x on the twists y^2 = alpha f(x) over K.

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "chab/hyperell.hpp"
#include "chab/numfield.hpp"

namespace chab {

using ZPoly = std::vector<mpz_class>;  // low to high

Poly<KElt> to_k(const ZPoly& a, const QuadField& F);
Poly<KElt> conj(const Poly<KElt>& a);

struct ConjugateFactorization {
    Poly<KElt> f, g;  // Phi = f g, g = conj(f)
};

// Splits Phi (monic, even degree 2n) into conjugate degree-n factors over K.
// The factor returned as f is the one whose highest non-rational coefficient
// has positive theta-coordinate. Throws NoConjugateFactorization.
ConjugateFactorization factor_over_K(const ZPoly& Phi, const QuadField& F);

// Sylvester resultants.
mpz_class resultant(const ZPoly& a, const ZPoly& b);
KElt resultant(const Poly<KElt>& a, const Poly<KElt>& b);

// v_P(x) for nonzero x in K.
int valuation(const KElt& x, const PrimeOfK& P);

struct ResultantSupports {
    mpz_class res1;  // Res(q, f g)
    KElt res2;       // Res(f, q g)
    std::vector<long> S1;
    std::vector<PrimeOfK> S2_raw;  // support of res2
    std::vector<PrimeOfK> S2;      // after dropping primes that cannot occur in the norm kernel
    std::vector<std::string> notes;
};

ResultantSupports resultant_supports(const ZPoly& q, const Poly<KElt>& f, const Poly<KElt>& g);

struct TwistPair {
    mpq_class a1;  // in Q*/Q*^2
    KElt a2;       // in K*/K*^2
    mpq_class nu;  // nu^2 a1 N(a2) = 1, nu > 0
    std::string str() const;
};

// Imaginary quadratic fields with class number one and unit group {+-1}.
bool norm_kernel_supported(const QuadField& F);

// A generator of the prime P (principal since the class number is one).
KElt prime_generator(const PrimeOfK& P, const QuadField& F);

std::vector<TwistPair> norm_kernel(const std::vector<long>& S1, const std::vector<PrimeOfK>& S2, const QuadField& F);

struct TwistCurve {
    TwistPair pair;
    HyperCurve<KElt> C;  // y^2 = a2 f(x)
    mpq_class q_twist;   // y1^2 = a1 q(x)
    KElt g_twist;        // y3^2 = conj(a2) g(x)
    std::string str() const;
};

std::vector<TwistCurve> twist_curves(const std::vector<TwistPair>& pairs, const Poly<KElt>& f);

struct RationalPoint {
    bool infinity = false;
    mpq_class x, y;
    bool operator==(const RationalPoint&) const = default;
    std::string str() const;
};

struct CoverInput {
    TwistCurve cover;
    bool certified = false;
    std::string certificate;               // short description of how H was obtained
    std::vector<CurvePoint<KElt>> H;       // all points of the twist with rational x
};

// Lifts every x of psi(H_i) through the covers and returns the points of Y,
// sorted and without repetition. Throws UncertifiedInput.
std::vector<RationalPoint> assemble(const std::vector<CoverInput>& covers, const ZPoly& q, const Poly<KElt>& f);

// Points of Y(Q) with |numerator|, |denominator| of x at most bound (plus infinity).
std::vector<RationalPoint> search_points(const ZPoly& q, const ZPoly& Phi, long bound);

// Bound on #J(K)_tors from reduction at the good primes above the listed
// rational primes: for each l, the smallest l-adic valuation of #J(k_P) over
// primes P of residue characteristic different from l. Returns 0 when some l
// is seen in only one characteristic.
mpz_class torsion_bound(const HyperCurve<KElt>& C, const std::vector<long>& primes);

// Square root in K, if any.
std::optional<KElt> sqrt_in_K(const KElt& a);

}  // namespace chab
