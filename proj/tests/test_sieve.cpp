#include <doctest.h>

#include <set>

#include "chab/arith.hpp"
#include "common.hpp"

using namespace chab;

namespace {

SieveInput input_for(const CurveConfig& cc, std::vector<long> primes) {
    SieveInput in{cc.C, cc.gens, cc.N, std::move(primes), {}, std::nullopt};
    for (const auto& k : cc.known) in.known.push_back(k.P);
    return in;
}

// Every vector of the box 0 <= x_j < H(j, j), a residue system for Z^r / L.
std::vector<std::vector<mpz_class>> residues(const IntMatrix& H) {
    std::vector<std::vector<mpz_class>> out{{}};
    for (int j = 0; j < H.cols(); ++j) {
        std::vector<std::vector<mpz_class>> next;
        for (const auto& v : out)
            for (long x = 0; x < H(j, j).get_si(); ++x) {
                auto w = v;
                w.push_back(x);
                next.push_back(w);
            }
        out = std::move(next);
    }
    return out;
}

void check_w0_exhaustive(const CurveConfig& cc, long p) {
    SieveContext ctx = build_context(input_for(cc, {p}));
    const IntMatrix& L0 = ctx.L.at(0);
    REQUIRE(determinant(L0) <= 20000);
    const auto box = residues(L0);
    const PrimeTables& T = ctx.tables.at(0);
    for (const auto& cls : T.classes()) {
        const auto target = T.image_of_class(cls);
        std::set<std::vector<mpz_class>> brute;
        for (const auto& a : box)
            if (T.reduce_vector(a) == target) brute.insert(a);
        std::set<std::vector<mpz_class>> got;
        for (const auto& w : initial_cosets(ctx, cls)) got.insert(reduce_mod_hnf(L0, w));
        CHECK(got == brute);
        CHECK(got.size() <= 1);
    }
}

// Coefficients a with [P - inf] = sum a_i g_i, found by search.
std::optional<std::vector<long>> coordinates(const CurveConfig& cc, const CurvePoint<KElt>& P, long B) {
    const MumfordDiv<KElt> target = point_divisor(cc.C, P);
    const int r = int(cc.gens.size());
    std::vector<long> a(r, -B);
    for (;;) {
        MumfordDiv<KElt> D = identity(cc.C);
        for (int i = 0; i < r; ++i) D = cantor_add(cc.C, D, scalar_mul(cc.C, cc.gens[i], a[i]));
        if (D.same(target)) return a;
        int i = 0;
        while (i < r && a[i] == B) a[i++] = -B;
        if (i == r) return std::nullopt;
        ++a[i];
    }
}

}  // namespace

TEST_SUITE("mwsieve") {

TEST_CASE("W0 matches exhaustive subgroup search (small primes)") {
    const auto& cfg = testdata::paper();
    int done = 0;
    for (const char* id : {"C1", "C2", "C3"})
        for (long p : {3L, 5L}) {
            const auto& cc = cfg.curve(id);
            if (!check_conditions(cc.C, cc.gens, cc.N, p).ok()) continue;
            check_w0_exhaustive(cc, p);
            ++done;
        }
    CHECK(done >= 3);
    check_w0_exhaustive(cfg.curve("C2"), 23);
}

TEST_CASE("soundness witness: real points are never eliminated") {
    const auto& cc = testdata::paper().curve("C2");
    for (const auto& k : cc.known) {
        if (k.P.infinity) continue;
        auto a = coordinates(cc, k.P, 30);
        REQUIRE(a);
        // the true coordinate vector lies in W_0 of its class
        SieveContext ctx = build_context(input_for(cc, {23, 43}));
        const ResidueClass cls = reduce_point(cc.C, k.P, 23);
        const std::vector<mpz_class> av(a->begin(), a->end());
        bool found = false;
        for (const auto& w : initial_cosets(ctx, cls)) found = found || reduce_mod_hnf(ctx.L[0], w) == reduce_mod_hnf(ctx.L[0], av);
        CHECK(found);
        // hiding the point from H' must leave its class alive
        SieveInput in = input_for(cc, {23, 43});
        in.known = {CurvePoint<KElt>::at_infinity()};
        SieveReport R = sieve(in);
        CHECK_FALSE(R.success());
        bool alive = false;
        for (const auto& c : R.classes)
            if (c.cls.same(cls)) alive = !c.eliminated;
        CHECK(alive);
        CHECK(R.survivors_outside_known() == 2);
    }
}

TEST_CASE("refinement strategies agree, serial agrees with parallel") {
    const auto& cfg = testdata::paper();
    for (const auto& [id, primes] : std::vector<std::pair<std::string, std::vector<long>>>{{"C2", {23, 43}}, {"C3", {71, 131}}, {"C1", {89, 67, 3}}}) {
        SieveInput in = input_for(cfg.curve(id), primes);
        SieveContext ctx = build_context(in);
        SieveOptions cos, tgt;
        cos.strategy = RefineStrategy::cosets;
        tgt.strategy = RefineStrategy::targets;
        for (const auto& cls : ctx.tables[0].classes()) {
            ClassOutcome a = sieve_class(ctx, cls, cos), b = sieve_class(ctx, cls, tgt);
            CHECK(a.w_sizes == b.w_sizes);
            CHECK(a.eliminated == b.eliminated);
        }
        SieveOptions ser, par;
        ser.parallel = false;
        SieveReport R1 = sieve(in, ser), R2 = sieve(in, par);
        REQUIRE(R1.classes.size() == R2.classes.size());
        for (std::size_t i = 0; i < R1.classes.size(); ++i) CHECK(R1.classes[i].w_sizes == R2.classes[i].w_sizes);
    }
}

TEST_CASE("configured lists for C2 and C3 eliminate everything outside H'") {
    const auto& cfg = testdata::paper();
    for (const char* id : {"C2", "C3"}) {
        SieveReport R = sieve(input_for(cfg.curve(id), cfg.curve(id).sieve_primes));
        CHECK(R.success());
        for (const auto& c : R.classes) CHECK(c.known != c.eliminated);
    }
}

TEST_CASE("empty target set succeeds trivially; truncated list leaves survivors") {
    const auto& cc = testdata::paper().curve("C1");
    SieveInput in = input_for(cc, {89});
    in.targets = std::vector<ResidueClass>{};
    CHECK(sieve(in).success());
    in.targets.reset();
    SieveReport R = sieve(in);
    CHECK_FALSE(R.success());
    CHECK(R.survivors_outside_known() > 0);
}

TEST_CASE("conditions are checked") {
    const auto& cc = testdata::paper().curve("C1");
    ConditionCheck c = check_conditions(cc.C, cc.gens, cc.N, 11);
    CHECK_FALSE(c.unramified);
    CHECK_THROWS_AS(sieve(input_for(cc, {11})), DomainError);
    ConditionCheck d = check_conditions(cc.C, cc.gens, 8736, 89);
    CHECK_FALSE(d.coprime_index);
}

TEST_CASE("ModSolver agrees with brute force") {
    IntMatrix M = IntMatrix::from_rows({{2, 3}, {1, 5}});
    std::vector<std::uint64_t> mods{12, 10};
    ModSolver S(M, mods);
    for (std::uint64_t a = 0; a < 12; ++a)
        for (std::uint64_t b = 0; b < 10; ++b) {
            bool brute = false;
            for (long x = 0; x < 60 && !brute; ++x)
                for (long y = 0; y < 60 && !brute; ++y)
                    brute = (2 * x + y) % 12 == long(a) && (3 * x + 5 * y) % 10 == long(b);
            auto s = S.solve({a, b});
            CHECK(bool(s) == brute);
            if (s) {
                CHECK(mod_i64(2 * (*s)[0] + (*s)[1], 12) == long(a));
                CHECK(mod_i64(3 * (*s)[0] + 5 * (*s)[1], 10) == long(b));
            }
        }
}

}  // TEST_SUITE
