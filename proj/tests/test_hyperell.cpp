#include <doctest.h>

#include <map>
#include <unordered_set>

#include "common.hpp"

using namespace chab;

namespace {

bool same(const FqDiv& a, const FqDiv& b) { return a.same(b); }

void group_laws(const FqCurve& C, std::mt19937_64& rng, int trials) {
    const FqDiv O = identity(C);
    for (int t = 0; t < trials; ++t) {
        FqDiv a = random_divisor(C, rng), b = random_divisor(C, rng), c = random_divisor(C, rng);
        CHECK(is_valid(C, a));
        CHECK(same(cantor_add(C, a, b), cantor_add(C, b, a)));
        CHECK(same(cantor_add(C, cantor_add(C, a, b), c), cantor_add(C, a, cantor_add(C, b, c))));
        CHECK(same(cantor_add(C, a, O), a));
        CHECK(cantor_add(C, a, negate(a)).is_identity());
        CHECK(same(cantor_double(C, a), cantor_add(C, a, a)));
    }
}

// Number of n-torsion points of a group with invariant factors d_i.
std::uint64_t torsion_count(const std::vector<std::uint64_t>& d, std::uint64_t n) {
    std::uint64_t c = 1;
    for (auto x : d) c *= std::gcd(x, n);
    return c;
}

}  // namespace

TEST_SUITE("hyperell") {

TEST_CASE("Cantor group laws over finite fields (1000 random triples each)") {
    std::mt19937_64 rng(1);
    for (auto K : {FqCtx::prime_field(5), FqCtx::prime_field(7), FqCtx::quadratic_ext(7), FqCtx::prime_field(89)}) {
        FqCurve C = testdata::random_curve(K.get(), rng);
        group_laws(C, rng, 1000);
    }
}

TEST_CASE("Cantor group laws over K on the Mordell-Weil generators") {
    const auto& C1 = testdata::paper().curve("C1");
    std::mt19937_64 rng(2);
    auto rnd = [&] {
        MumfordDiv<KElt> D = identity(C1.C);
        for (const auto& g : C1.gens) D = cantor_add(C1.C, D, scalar_mul(C1.C, g, long(rng() % 5) - 2));
        return D;
    };
    for (int t = 0; t < 40; ++t) {
        auto a = rnd(), b = rnd(), c = rnd();
        CHECK(is_valid(C1.C, a));
        CHECK(cantor_add(C1.C, a, b).same(cantor_add(C1.C, b, a)));
        CHECK(cantor_add(C1.C, cantor_add(C1.C, a, b), c).same(cantor_add(C1.C, a, cantor_add(C1.C, b, c))));
        CHECK(cantor_sub(C1.C, cantor_add(C1.C, a, b), b).same(a));
    }
}

TEST_CASE("toy curves over F_p, p <= 7: order and structure against exhaustive enumeration") {
    std::mt19937_64 rng(3);
    for (std::uint32_t p : {3u, 5u, 7u}) {
        auto K = FqCtx::prime_field(p);
        for (int t = 0; t < 6; ++t) {
            FqCurve C = testdata::random_curve(K.get(), rng);
            const auto all = enumerate_divisors(C);
            std::unordered_set<std::uint64_t> hashes;
            for (const auto& D : all) hashes.insert(div_hash(D));
            CHECK(hashes.size() == all.size());
            const mpz_class n = jacobian_order(C, 1 + t);
            CHECK(n == mpz_class((unsigned long)all.size()));
            JacobianGroup G(C, all.size(), 1 + t);
            AbGroupStruct S = group_structure(G);
            std::uint64_t prod = 1;
            for (auto d : S.orders) prod *= d;
            CHECK(prod == all.size());
            for (std::size_t i = 0; i + 1 < S.orders.size(); ++i) CHECK(S.orders[i + 1] % S.orders[i] == 0);
            for (std::uint64_t m = 1; m <= all.size(); ++m) {
                if (all.size() % m) continue;
                std::uint64_t killed = 0;
                for (const auto& D : all) killed += scalar_mul(C, D, long(m)).is_identity();
                CHECK(killed == torsion_count(S.orders, m));
            }
            CHECK(count_points(C) == count_points_serial(C));
            CHECK(count_points(C) == rational_points(C).size());
        }
    }
}

TEST_CASE("discrete logs round-trip; batch kernels agree with the serial reference") {
    std::mt19937_64 rng(4);
    for (auto K : {FqCtx::prime_field(89), FqCtx::quadratic_ext(7), FqCtx::prime_field(131)}) {
        FqCurve C = testdata::random_curve(K.get(), rng);
        JacobianGroup G = JacobianGroup::of_curve(C, 5);
        CHECK(mpz_class((unsigned long)G.order()) == jacobian_order(C, 9));
        std::vector<FqDiv> Ds;
        for (int i = 0; i < 60; ++i) Ds.push_back(random_divisor(C, rng));
        auto serial = G.dlog_batch_serial(Ds), par = G.dlog_batch(Ds);
        CHECK(serial == par);
        for (std::size_t i = 0; i < Ds.size(); ++i) CHECK(G.combine(serial[i]).same(Ds[i]));
        // dlog is a homomorphism
        auto a = G.dlog(Ds[0]), b = G.dlog(Ds[1]), s = G.dlog(cantor_add(C, Ds[0], Ds[1]));
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(s[i] == (a[i] + b[i]) % G.structure().orders[i]);
    }
}

TEST_CASE("reduction commutes with addition") {
    const auto& cfg = testdata::paper();
    std::mt19937_64 rng(6);
    for (const auto& [id, p] : std::vector<std::pair<std::string, long>>{{"C1", 89}, {"C1", 131}, {"C2", 23}, {"C3", 71}, {"C2", 43}}) {
        const auto& cc = cfg.curve(id);
        for (const auto& P : splitting_type(cfg.F, p)) {
            auto kp = FqCtx::residue_field(cfg.F, P);
            FqCurve Cb = reduce_curve(cc.C, P, kp.get());
            for (int t = 0; t < 8; ++t) {
                MumfordDiv<KElt> a = scalar_mul(cc.C, cc.gens[rng() % cc.gens.size()], long(rng() % 4) + 1);
                MumfordDiv<KElt> b = scalar_mul(cc.C, cc.gens[rng() % cc.gens.size()], -long(rng() % 3) - 1);
                FqDiv lhs = reduce_divisor(cantor_add(cc.C, a, b), P, Cb);
                FqDiv rhs = cantor_add(Cb, reduce_divisor(a, P, Cb), reduce_divisor(b, P, Cb));
                CHECK(lhs.same(rhs));
            }
        }
    }
}

TEST_CASE("group orders used by the sieve") {
    const auto& cfg = testdata::paper();
    const auto& C1 = cfg.curve("C1");
    auto orders = [&](long p) {
        std::vector<mpz_class> out;
        for (const auto& P : splitting_type(cfg.F, p)) {
            auto kp = FqCtx::residue_field(cfg.F, P);
            out.push_back(jacobian_order(reduce_curve(C1.C, P, kp.get())));
        }
        return out;
    };
    CHECK(orders(89) == std::vector<mpz_class>{8736, 8672});
    CHECK(orders(131) == std::vector<mpz_class>{296358912});
}

}  // TEST_SUITE
