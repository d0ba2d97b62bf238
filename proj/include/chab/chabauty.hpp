#pragma once

// Criterion matrices and verdicts for the x-map psi : C -> P^1 at a known
// point P0, in the unramified case and in the two ramified cases (p split in
// K, p inert in K).

#include <optional>
#include <string>
#include <vector>

#include "chab/abelint.hpp"
#include "chab/hyperell.hpp"
#include "chab/localexp.hpp"
#include "chab/plinalg.hpp"

namespace chab {

enum class CriterionCase { unramified, ramified_split, ramified_inert };
std::string to_string(CriterionCase c);

struct ChabautyProblem {
    HyperCurve<KElt> C;
    std::vector<MumfordDiv<KElt>> gens;
    long N = 1;
    long p = 0;
    CurvePoint<KElt> P0;
    UniformizerSpec tau;
    int M = 12;
};

// Default uniformizer: x - x0 at ordinary affine points, x^2/y at infinity,
// y at affine Weierstrass points.
UniformizerSpec default_uniformizer(const HyperCurve<KElt>& C, const CurvePoint<KElt>& P0);

struct PrimeCheck {
    bool ok = false;
    CriterionCase tag = CriterionCase::unramified;
    int e = 1;              // ramification index of psi at P0
    std::string condition;  // failed condition label when !ok
    std::string reason;
};

PrimeCheck check_prime(const ChabautyProblem& pb);

struct CriterionBundle {
    CriterionCase tag = CriterionCase::unramified;
    int e = 1;
    PadicMatrix A;  // dg x r
    PadicMatrix w;  // dg x 1 (unramified) or dg x d (ramified)
    long h = 0;
    PadicMatrix U, Ap;
    int j = 0;
    PadicMatrix E0;                  // last j rows of U w
    std::vector<PadicMatrix> tails;  // the E_(i) rows appended under E0
    std::vector<PadicMatrix> calE;   // the test matrices
    std::vector<int> ranks;          // rank over F_p of each test matrix
    bool verdict = false;
    std::string note;
};

// Each builder accepts a precomputed integral matrix for (C, p, gens) so that
// several points can share it.
CriterionBundle build_unramified(const ChabautyProblem& pb, const IntegralMatrix* A = nullptr);
CriterionBundle build_ramified_split(const ChabautyProblem& pb, const IntegralMatrix* A = nullptr);
CriterionBundle build_ramified_inert(const ChabautyProblem& pb, const IntegralMatrix* A = nullptr);
// check_prime followed by the matching builder; throws DomainError on rejection.
CriterionBundle build_bundle(const ChabautyProblem& pb, const IntegralMatrix* A = nullptr);

struct PointVerdict {
    CurvePoint<KElt> P0;
    UniformizerSpec tau;
    PrimeCheck check;
    std::optional<CriterionBundle> bundle;
    bool verdict = false;
    std::string error;  // set when the point could not be processed
    std::string error_kind;
};

struct ChabautyReport {
    long p = 0;
    int M = 0;
    std::vector<PrimeOfK> primes;
    std::optional<IntegralMatrix> A;
    std::vector<PointVerdict> points;
    bool all_true() const;
};

struct KnownPoint {
    CurvePoint<KElt> P;
    std::optional<UniformizerSpec> tau;
};

ChabautyReport chabauty_report(const HyperCurve<KElt>& C, const std::vector<MumfordDiv<KElt>>& gens, long N, long p,
                               const std::vector<KnownPoint>& points, int M, int jobs = 1);

}  // namespace chab
