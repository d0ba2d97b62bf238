#pragma once

// Mordell-Weil sieve restricted to the x-map. A residue class at an unramified
// prime p is a tuple of points, one on the reduction at each prime above p,
// whose x-coordinates agree in P^1(F_p). The class is eliminated when no coset
// of the lattice chain L_0 > L_1 > ... is compatible with every sieving prime.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "chab/hyperell.hpp"
#include "chab/intmat.hpp"

namespace chab {

struct ResidueClass {
    long p = 0;
    std::optional<std::uint32_t> x;  // common x-image in F_p; empty for infinity
    std::vector<FqPoint> pts;        // one per prime above p, in splitting_type order

    bool same(const ResidueClass& o) const;
    std::string str() const;
};

// All classes at p. Throws BadReduction if some prime above p is bad and
// DomainError if p ramifies.
std::vector<ResidueClass> compute_G(const HyperCurve<KElt>& C, long p);

// Reduction of a K-point at every prime above p (points with a pole in x go
// to infinity).
ResidueClass reduce_point(const HyperCurve<KElt>& C, const CurvePoint<KElt>& P, long p);

struct ConditionCheck {
    long p = 0;
    bool unramified = false;     // (i)
    bool good_reduction = false; // (ii)
    bool coprime_index = false;  // (iii)
    mpz_class group_order;       // product of #J(k_P) over P | p (0 if unknown)
    std::vector<std::string> reasons;

    bool ok() const { return unramified && good_reduction && coprime_index; }
};

ConditionCheck check_conditions(const HyperCurve<KElt>& C, const std::vector<MumfordDiv<KElt>>& gens, long N,
                                long p);

// Reduction of the generators at one prime p: the target group is the
// product of J(k_P) over P | p, written as a direct sum of cyclic groups.
class PrimeTables {
public:
    PrimeTables(const HyperCurve<KElt>& C, const std::vector<MumfordDiv<KElt>>& gens, long p, bool parallel = true,
                std::uint64_t seed = 1);
    ~PrimeTables();
    PrimeTables(PrimeTables&&) noexcept;
    PrimeTables& operator=(PrimeTables&&) noexcept;

    long p() const { return p_; }
    const std::vector<PrimeOfK>& primes() const { return primes_; }
    const std::vector<std::uint64_t>& moduli() const { return moduli_; }
    const std::vector<mpz_class>& orders() const { return orders_; }  // #J(k_P) per prime
    const std::vector<ResidueClass>& classes() const { return classes_; }
    // Coordinates of iota(class) for every class, same order as classes().
    const std::vector<std::vector<std::uint64_t>>& images() const { return images_; }
    // k x r matrix: column g holds the reduction of generator g.
    const IntMatrix& generator_images() const { return gen_images_; }

    bool contains_image(const std::vector<std::uint64_t>& v) const;
    std::vector<std::uint64_t> image_of_class(const ResidueClass& c) const;
    // Reduction of the lattice vector a (coefficients on the generators).
    std::vector<std::uint64_t> reduce_vector(const std::vector<mpz_class>& a) const;

private:
    struct Impl;
    long p_;
    std::vector<PrimeOfK> primes_;
    std::vector<std::uint64_t> moduli_;
    std::vector<mpz_class> orders_;
    std::vector<ResidueClass> classes_;
    std::vector<std::vector<std::uint64_t>> images_;
    IntMatrix gen_images_;
    std::unique_ptr<Impl> impl_;
};

struct SieveInput {
    HyperCurve<KElt> C;
    std::vector<MumfordDiv<KElt>> gens;
    long N = 1;
    std::vector<long> primes;                 // p_0, p_1, ..., in the given order
    std::vector<CurvePoint<KElt>> known;      // H'
    std::optional<std::vector<ResidueClass>> targets;  // default: all of G_0
};

// How W_i is refined from W_{i-1}: by walking the coset representatives of
// L_{i-1}/L_i, or by solving for each element of iota(G_i). Both give the
// same sets; automatic picks the smaller enumeration.
enum class RefineStrategy { automatic, cosets, targets };

struct SieveOptions {
    std::size_t coset_cap = 200000;
    bool parallel = true;
    std::uint64_t seed = 1;
    RefineStrategy strategy = RefineStrategy::automatic;
};

struct SieveStage {
    long p = 0;
    std::vector<mpz_class> orders;
    std::vector<std::uint64_t> moduli;
    std::size_t num_classes = 0;
    mpz_class index;  // [L_{i-1} : L_i]
    IntMatrix L;      // Hermite basis of L_i (rows, generator coordinates)
};

struct ClassOutcome {
    ResidueClass cls;
    bool known = false;  // in red(H')
    std::vector<std::size_t> w_sizes;
    bool eliminated = false;
    bool blowup = false;
};

struct SieveReport {
    long p0 = 0;
    long N = 1;
    std::vector<ConditionCheck> conditions;
    std::vector<SieveStage> stages;
    std::vector<ClassOutcome> classes;

    // Every class outside red(H') eliminated and every class of red(H') kept.
    bool success() const;
    std::size_t survivors_outside_known() const;
};

// Solver for x * M = t in the group (Z/m_1 + ... + Z/m_k), M an r x k matrix
// whose row i is the image of basis vector i. Precomputes one Smith form.
class ModSolver {
public:
    ModSolver() = default;
    ModSolver(const IntMatrix& M, const std::vector<std::uint64_t>& moduli);
    std::optional<std::vector<mpz_class>> solve(const std::vector<std::uint64_t>& t) const;

private:
    int r_ = 0, k_ = 0;
    IntMatrix P_, Q_, D_;
};

// The lattice chain and per-prime tables, shared by all classes.
struct SieveContext {
    std::vector<PrimeTables> tables;
    std::vector<IntMatrix> L;             // L_0, L_1, ... (Hermite bases, generator coordinates)
    std::vector<IntMatrix> steps;         // L_i in coordinates of L_{i-1}, Hermite form (steps[0] = L_0)
    std::vector<IntMatrix> basis_images;  // row a: reduction at p_i of row a of L_{i-1}
    std::vector<ModSolver> solvers;       // one per prime, for basis_images[i]
};

SieveContext build_context(const SieveInput& in, const SieveOptions& opt = {});

// W_0 for a class: the (at most one) coset of L_0 mapping to iota(class).
std::vector<std::vector<mpz_class>> initial_cosets(const SieveContext& ctx, const ResidueClass& cls);

ClassOutcome sieve_class(const SieveContext& ctx, const ResidueClass& cls, const SieveOptions& opt = {});

SieveReport sieve(const SieveInput& in, const SieveOptions& opt = {});

std::optional<std::vector<mpz_class>> solve_mod(const IntMatrix& M, const std::vector<std::uint64_t>& moduli,
                                                const std::vector<std::uint64_t>& t);

}  // namespace chab
