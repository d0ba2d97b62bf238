#include <doctest.h>

#include "common.hpp"

using namespace chab;
using testdata::k;

TEST_SUITE("numfield") {

TEST_CASE("arithmetic in Q(theta), theta^2 - theta + 3 = 0") {
    const KElt t = KElt::theta(testdata::paper().F);
    CHECK(t * t == t - k(3));
    CHECK(norm(k(5, -1)) == 23);
    CHECK(trace(t) == 1);
    CHECK(conj(t) == k(1, -1));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        KElt a = k(long(rng() % 41) - 20, long(rng() % 41) - 20), b = k(long(rng() % 41) - 20, long(rng() % 41) - 20);
        CHECK(norm(a * b) == norm(a) * norm(b));
        CHECK(conj(a * b) == conj(a) * conj(b));
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("splitting of small primes") {
    const QuadField& F = testdata::paper().F;
    auto s89 = splitting_type(F, 89);
    REQUIRE(s89.size() == 2);
    CHECK(s89[0].kind == PrimeKind::split);
    CHECK(s89[0].theta_residue == 37);
    CHECK(s89[1].theta_residue == 53);
    CHECK(splitting_type(F, 673).at(0).kind == PrimeKind::inert);
    CHECK(splitting_type(F, 131).at(0).kind == PrimeKind::inert);
    CHECK(splitting_type(F, 11).at(0).kind == PrimeKind::ramified);
    for (long p : {3L, 5L, 23L, 67L, 71L, 859L}) CHECK(splitting_type(F, p).size() == 2);
}

TEST_CASE("residue fields are fields") {
    std::mt19937_64 rng(11);
    for (auto K : {FqCtx::prime_field(7), FqCtx::quadratic_ext(7), FqCtx::residue_field(testdata::paper().F, {131, PrimeKind::inert, -1, 1})}) {
        for (int i = 0; i < 300; ++i) {
            Fq a = testdata::random_fq(K.get(), rng), b = testdata::random_fq(K.get(), rng);
            CHECK((a + b) - b == a);
            if (!b.is_zero()) CHECK((a / b) * b == a);
            Fq r;
            if (fq_sqrt(a * a, r)) CHECK(r * r == a * a);
            CHECK((a * b).norm() == std::uint32_t(std::uint64_t(a.norm()) * b.norm() % K->p()));
        }
    }
}

TEST_CASE("reduction to residue fields is a ring map") {
    const QuadField& F = testdata::paper().F;
    for (const auto& P : splitting_type(F, 23)) {
        auto kp = FqCtx::residue_field(F, P);
        KElt a = k(3, 7), b = k(-5, 2);
        CHECK(reduce(a * b, P, kp.get()) == reduce(a, P, kp.get()) * reduce(b, P, kp.get()));
        CHECK(reduce(a + b, P, kp.get()) == reduce(a, P, kp.get()) + reduce(b, P, kp.get()));
    }
    CHECK_THROWS_AS(reduce(KElt(F, mpq_class(1, 23)), splitting_type(F, 23)[0], FqCtx::prime_field(23).get()), NonIntegral);
}

}  // TEST_SUITE

TEST_SUITE("padic") {

TEST_CASE("Hensel postcondition f(r) = 0 mod p^M") {
    std::mt19937_64 rng(5);
    for (int M : testdata::kPrecisions)
        for (long p : {3L, 23L, 89L}) {
            int done = 0;
            while (done < 20) {
                std::vector<mpz_class> c(5);
                for (auto& x : c) x = long(rng() % 2001) - 1000;
                const long r0 = long(rng() % p);
                mpz_class v = 0, d = 0, rp = 1;
                for (std::size_t i = 0; i < c.size(); ++i) {
                    v += c[i] * rp;
                    rp *= r0;
                }
                c[0] -= v;  // now f(r0) = 0 exactly
                c[0] += p * long(rng() % 50);
                rp = 1;
                for (std::size_t i = 1; i < c.size(); ++i) {
                    d += c[i] * long(i) * rp;
                    rp *= r0;
                }
                if (mpz_divisible_ui_p(d.get_mpz_t(), p)) continue;
                const PadicCtx* ctx = PadicCtx::get(p, M);
                std::vector<PadicNum> pc;
                for (auto& x : c) pc.push_back(PadicNum::from_int(ctx, x));
                Poly<PadicNum> f(PadicNum::zero(ctx), pc);
                PadicNum r = hensel_lift_root(f, r0, M);
                const mpz_class R = r.mod_pk(M), pM = ctx->pow(M);
                mpz_class val = 0, Rp = 1;
                for (auto& x : c) {
                    val += x * Rp;
                    Rp = Rp * R % pM;
                }
                CHECK(mpz_divisible_p(val.get_mpz_t(), pM.get_mpz_t()));
                CHECK(r.residue() == r0);
                ++done;
            }
        }
}

TEST_CASE("precision is tracked through arithmetic") {
    const PadicCtx* ctx = PadicCtx::get(89, 12);
    PadicNum a = PadicNum::from_int(ctx, 89 * 5), b = PadicNum::from_int(ctx, 3);
    CHECK(a.valuation() == 1);
    CHECK((a * b).valuation() == 1);
    CHECK((a / b * b).equal_mod(a, 12));
    PadicNum z = a - a;
    CHECK(z.is_indistinguishable_from_zero());
    CHECK_THROWS_AS(PadicNum::approx_zero(ctx, 5).checked_valuation(), PrecisionLoss);
    CHECK(PadicNum::from_rational(ctx, mpq_class(1, 89)).valuation() == -1);
}

TEST_CASE("unramified quadratic extension") {
    const QuadField& F = testdata::paper().F;
    const PrimeOfK P = splitting_type(F, 131).at(0);
    for (int M : testdata::kPrecisions) {
        PadicExtElt a = embed_inert(k(4, 9), P, M), b = embed_inert(k(-2, 131), P, M);
        CHECK(((a * b) / b - a).is_indistinguishable_from_zero());
        CHECK((a * b).norm().equal_mod(a.norm() * b.norm(), M));
        CHECK(a.conj().conj().same(a));
        CHECK(embed_inert(k(4, 9) * k(-2, 131), P, M).same(a * b));
    }
}

}  // TEST_SUITE
