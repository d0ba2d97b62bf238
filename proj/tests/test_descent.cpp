#include <doctest.h>

#include <complex>

#include "common.hpp"

using namespace chab;
using testdata::k;

namespace {

const ZPoly kQ{-1, 0, 1, 1};
const ZPoly kPhi(11, 1);

}  // namespace

TEST_SUITE("descent") {

TEST_CASE("conjugate factorization of Phi_11") {
    const auto& cfg = testdata::paper();
    auto fg = factor_over_K(kPhi, cfg.F);
    CHECK(fg.f.same(testdata::kpoly({k(-1), k(-1, 1), k(1), k(-1), k(0, 1), k(1)})));
    CHECK(fg.g.same(conj(fg.f)));
    CHECK((fg.f * fg.g).same(to_k(kPhi, cfg.F)));
}

TEST_CASE("linear conjugate factors of x^2 + 1 over Q(i)") {
    const QuadField Fi{0, 1};
    auto fg = factor_over_K({1, 0, 1}, Fi);
    const KElt i = KElt::theta(Fi);
    CHECK(fg.f.same(Poly<KElt>(KElt(Fi, 0), std::vector<KElt>{i, KElt(Fi, 1)})));
    CHECK(fg.g.same(Poly<KElt>(KElt(Fi, 0), std::vector<KElt>{-i, KElt(Fi, 1)})));
    CHECK_THROWS_AS(factor_over_K({1, 1, 0, 1}, Fi), NoConjugateFactorization);
    CHECK_THROWS_AS(factor_over_K({2, 0, 0, 0, 1}, testdata::paper().F), NoConjugateFactorization);
}

TEST_CASE("resultants match the root-product oracle") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        ZPoly a{long(rng() % 11) - 5, long(rng() % 11) - 5, 1}, b{long(rng() % 11) - 5, long(rng() % 11) - 5, long(rng() % 7) - 3, 1};
        // Res(a, b) = prod over roots r of a of b(r), a monic
        using C = std::complex<long double>;
        const C d = std::sqrt(C((long double)mpz_class(a[1] * a[1] - 4 * a[0]).get_d()));
        const C r1 = (C(-(long double)a[1].get_d()) + d) / 2.0L, r2 = (C(-(long double)a[1].get_d()) - d) / 2.0L;
        auto ev = [&](C x) { return C((long double)b[0].get_d()) + x * (C((long double)b[1].get_d()) + x * (C((long double)b[2].get_d()) + x)); };
        const C prod = ev(r1) * ev(r2);
        CHECK(std::abs(prod.real() - (long double)resultant(a, b).get_d()) < 1e-6L);
        CHECK(std::abs(prod.imag()) < 1e-6L);
    }
    const auto& F = testdata::paper().F;
    CHECK(resultant(to_k({2, 1}, F), to_k({3, 1}, F)) == k(1));
}

TEST_CASE("resultant supports and the norm kernel") {
    const auto& F = testdata::paper().F;
    auto fg = factor_over_K(kPhi, F);
    ResultantSupports R = resultant_supports(kQ, fg.f, fg.g);
    CHECK(R.res1 == 23);
    CHECK(R.S1 == std::vector<long>{23});
    REQUIRE(R.S2.size() == 1);
    CHECK(R.S2[0].p == 23);
    CHECK(valuation(k(5, -1), R.S2[0]) == 1);
    CHECK(R.S2_raw.size() == 2);
    CHECK(R.notes.size() == 1);
    CHECK(prime_generator(R.S2[0], F) == k(5, -1));

    auto K = norm_kernel(R.S1, R.S2, F);
    REQUIRE(K.size() == 4);
    const std::vector<std::pair<long, KElt>> expect{{1, k(1)}, {1, k(-1)}, {23, k(5, -1)}, {23, k(-5, 1)}};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(K[i].a1 == expect[i].first);
        CHECK(K[i].a2 == expect[i].second);
        CHECK(K[i].nu * K[i].nu * K[i].a1 * norm(K[i].a2) == 1);
    }
    auto T = twist_curves(K, fg.f);
    const auto& cfg = testdata::paper();
    CHECK(T[0].C.f.same(cfg.curve("C1").C.f));
    CHECK(T[1].C.f.same(cfg.curve("C2").C.f));
    CHECK(T[2].C.f.same(cfg.curve("C3").C.f));
}

TEST_CASE("coprime toy inputs give empty supports; units only give two pairs") {
    const auto& F = testdata::paper().F;
    auto fg = factor_over_K(kPhi, F);
    ResultantSupports R = resultant_supports({1, 1}, fg.f, fg.g);  // q = x + 1, Phi(-1) = 1
    CHECK(abs(R.res1) == 1);
    CHECK(R.S1.empty());
    CHECK(norm_kernel({}, {}, F).size() == 2);
    CHECK_THROWS_AS(resultant_supports({-1, 1}, testdata::kpoly({k(-1), k(1)}), testdata::kpoly({k(-1), k(1)})), ZeroResultant);
    CHECK_THROWS_AS(norm_kernel({}, {}, QuadField{0, 5}), UnsupportedField);
}

TEST_CASE("valuations at split, inert and ramified primes") {
    const auto& F = testdata::paper().F;
    auto s23 = splitting_type(F, 23);
    CHECK(valuation(k(23), s23[0]) == 1);
    CHECK(valuation(k(5, -1) * k(5, -1), s23[0]) == 2);
    CHECK(valuation(k(5, -1), s23[1]) == 0);
    CHECK(valuation(KElt(F, mpq_class(1, 23)), s23[1]) == -1);
    CHECK(valuation(k(131 * 131), splitting_type(F, 131)[0]) == 2);
    CHECK(valuation(k(-1, 2), splitting_type(F, 11)[0]) == 1);
}

TEST_CASE("square roots in K") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 200; ++t) {
        KElt a(testdata::paper().F, mpq_class(long(rng() % 41) - 20, 1 + long(rng() % 5)), long(rng() % 41) - 20);
        auto r = sqrt_in_K(a * a);
        REQUIRE(r);
        CHECK(*r * *r == a * a);
    }
    CHECK_FALSE(sqrt_in_K(k(-1)));
    CHECK_FALSE(sqrt_in_K(k(2)));
    CHECK(sqrt_in_K(k(-11)));
}

TEST_CASE("assembly") {
    const auto& F = testdata::paper().F;
    auto fg = factor_over_K(kPhi, F);
    auto R = resultant_supports(kQ, fg.f, fg.g);
    auto T = twist_curves(norm_kernel(R.S1, R.S2, F), fg.f);
    std::vector<CoverInput> covers;
    const auto& cfg = testdata::paper();
    for (std::size_t i = 0; i < T.size(); ++i) {
        CoverInput c{T[i], true, "test", {}};
        if (i < 3)
            for (const auto& kp : cfg.curve("C" + std::to_string(i + 1)).known) c.H.push_back(kp.P);
        else
            c.H.push_back(CurvePoint<KElt>::at_infinity());
        covers.push_back(c);
    }
    auto Y = assemble(covers, kQ, fg.f);
    REQUIRE(Y.size() == 1);
    CHECK(Y[0].infinity);
    // every point found by search is assembled
    for (const auto& P : search_points(kQ, kPhi, 100)) CHECK(std::find(Y.begin(), Y.end(), P) != Y.end());

    // empty inputs contribute nothing
    std::vector<CoverInput> empty;
    for (const auto& c : covers) empty.push_back({c.cover, true, "test", {}});
    CHECK(assemble(empty, kQ, fg.f).empty());
    // an affine x whose companion value is not a square in K contributes nothing
    std::vector<CoverInput> synth{{T[0], true, "test", {cfg.curve("C1").known[0].P}}};
    CHECK(assemble(synth, kQ, fg.f).empty());
    // uncertified covers are refused
    covers[3].certified = false;
    CHECK_THROWS_AS(assemble(covers, kQ, fg.f), UncertifiedInput);
}

TEST_CASE("assembly lifts genuine points") {
    // q = x^3 + x^2 + x + 1 gives q(0) Phi(0) = 1, so (0, +-1) lie on Y; they come from the twist by -1.
    const auto& F = testdata::paper().F;
    const ZPoly q{1, 1, 1, 1};
    auto fg = factor_over_K(kPhi, F);
    TwistPair tp{1, k(-1), 1};
    CoverInput c{{tp, HyperCurve<KElt>(fg.f.scale(k(-1))), 1, k(-1)}, true, "test",
                 {CurvePoint<KElt>::affine(k(0), k(1)), CurvePoint<KElt>::affine(k(0), k(-1))}};
    auto Y = assemble({c}, q, fg.f);
    REQUIRE(Y.size() == 2);
    CHECK(Y[0].x == 0);
    CHECK(abs(Y[0].y) == 1);
    auto S = search_points(q, kPhi, 5);
    CHECK(std::find(S.begin(), S.end(), Y[0]) != S.end());
}

TEST_CASE("torsion bound for the rank-zero twist") {
    const auto& F = testdata::paper().F;
    auto fg = factor_over_K(kPhi, F);
    HyperCurve<KElt> C4(fg.f.scale(k(-5, 1)));
    CHECK(torsion_bound(C4, {3, 5}) == 1);
    CHECK(torsion_bound(C4, {3}) == 7);  // the two primes above 3 alone leave a factor 7
}

}  // TEST_SUITE
