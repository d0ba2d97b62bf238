#pragma once

// Abelian integrals of the holomorphic differentials x^(f-1) dx/(2y), f = 1, 2,
// against divisor classes D in J(K), evaluated in the completion K_P.
//
// The class n*D with n = #J(k_P) lies in the kernel of reduction; its two
// points sit in a single residue disk (up to the hyperelliptic involution), so
// the integral is a sum of tiny integrals. The sum over the points of a
// Mumford pair is taken as a trace in the algebra F[X]/(u), which avoids
// extracting roots of u.

#include <memory>
#include <vector>

#include <gmpxx.h>

#include "chab/hyperell.hpp"
#include "chab/numfield.hpp"
#include "chab/padic.hpp"
#include "chab/plinalg.hpp"

namespace chab {

// Coefficient type of K_P: PadicNum at a split prime, PadicExtElt at an inert one.
template <class F>
HyperCurve<F> embed_curve(const HyperCurve<KElt>& C, const PrimeOfK& P, int M);
template <class F>
MumfordDiv<F> embed_divisor(const MumfordDiv<KElt>& D, const PrimeOfK& P, int M);
template <class F>
CurvePoint<F> embed_point(const CurvePoint<KElt>& Q, const PrimeOfK& P, int M);

enum class KernelCase { identity, infinity_disk, affine_disk, weierstrass_disk };

template <class F>
class AbelianIntegrator {
public:
    // multiplier: the kernel multiple used is multiplier * #J(k_P).
    AbelianIntegrator(const HyperCurve<KElt>& C, const PrimeOfK& P, int M, long multiplier = 1);

    const PrimeOfK& prime() const { return P_; }
    const mpz_class& group_order() const { return n_; }
    int precision() const { return M_; }

    // (int_D omega_1, int_D omega_2), each known at least modulo p^M.
    std::vector<F> integrals(const MumfordDiv<KElt>& D) const;
    F integral(const MumfordDiv<KElt>& D, int f) const { return integrals(D).at(std::size_t(f - 1)); }

    // Integrals over a divisor of J(K_P) already in the kernel of reduction,
    // computed with working precision Mw.
    std::vector<F> kernel_integrals(const MumfordDiv<F>& E, const HyperCurve<F>& CF, int Mw) const;
    KernelCase classify(const MumfordDiv<F>& E, const HyperCurve<F>& CF) const;

private:
    std::vector<F> attempt(const MumfordDiv<KElt>& D, int Mw, const mpz_class& mult) const;

    HyperCurve<KElt> C_;
    PrimeOfK P_;
    int M_;
    long multiplier_;
    mpz_class n_;
};

struct IntegralMatrix {
    long p = 0;
    std::vector<PrimeOfK> primes;
    // Rows: for each prime above p and each f, one row per Z_p-coordinate
    // (one at a split prime, two over {1, theta} at an inert prime).
    PadicMatrix A;
};

IntegralMatrix integral_matrix(const HyperCurve<KElt>& C, long p, const std::vector<MumfordDiv<KElt>>& gens, int M,
                               long multiplier = 1);

// Rebase a p-adic number onto another context with the same p.
PadicNum rebase(const PadicNum& a, const PadicCtx* c);

}  // namespace chab
