#include <doctest.h>

#include "common.hpp"

using namespace chab;

namespace {

template <class F>
bool agree(const F& a, const F& b, int M) {
    if constexpr (std::is_same_v<F, PadicNum>) return a.equal_mod(b, M);
    else return a.c0().equal_mod(b.c0(), M) && a.c1().equal_mod(b.c1(), M);
}

PadicNum times(const PadicNum& a, long n) { return a.scale(n); }
PadicExtElt times(const PadicExtElt& a, long n) { return a.scalar(n); }

template <class F>
void integral_properties(const CurveConfig& cc, const PrimeOfK& P, int M) {
    AbelianIntegrator<F> I(cc.C, P, M), I2(cc.C, P, M, 2);
    const auto& g = cc.gens;
    const auto& C = cc.C;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto a = I.integrals(g[i]);
        // representative independence: a different kernel multiple gives the same values
        auto a2 = I2.integrals(g[i]);
        for (int f = 0; f < 2; ++f) CHECK(agree(a[f], a2[f], M));
        // Z-linearity
        auto a3 = I.integrals(scalar_mul(C, g[i], -3));
        for (int f = 0; f < 2; ++f) CHECK(agree(a3[f], times(a[f], -3), M));
        // additivity
        const auto& h = g[(i + 1) % g.size()];
        auto b = I.integrals(h), s = I.integrals(cantor_add(C, g[i], h));
        for (int f = 0; f < 2; ++f) CHECK(agree(s[f], a[f] + b[f], M));
    }
    // the identity integrates to zero
    auto z = I.integrals(identity(C));
    for (int f = 0; f < 2; ++f) CHECK(z[f].is_indistinguishable_from_zero());
}

}  // namespace

TEST_SUITE("abelint") {

TEST_CASE("linearity, additivity and representative independence (split primes)") {
    const auto& cfg = testdata::paper();
    for (int M : testdata::kPrecisions) {
        for (const auto& P : splitting_type(cfg.F, 89)) integral_properties<PadicNum>(cfg.curve("C1"), P, M);
        for (const auto& P : splitting_type(cfg.F, 71)) integral_properties<PadicNum>(cfg.curve("C3"), P, M);
    }
}

TEST_CASE("linearity, additivity and representative independence (inert prime)") {
    const auto& cfg = testdata::paper();
    for (int M : testdata::kPrecisions) integral_properties<PadicExtElt>(cfg.curve("C2"), splitting_type(cfg.F, 43).at(0), M);
}

TEST_CASE("integral matrix valuations") {
    const auto& cfg = testdata::paper();
    for (int M : testdata::kPrecisions) {
        IntegralMatrix A = integral_matrix(cfg.curve("C1").C, 89, cfg.curve("C1").gens, M);
        CHECK(A.A.rows() == 4);
        CHECK(A.A.cols() == 3);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) CHECK(A.A(i, j).valuation() == 1);
    }
}

}  // TEST_SUITE

TEST_SUITE("chabauty") {

TEST_CASE("verdicts are stable under precision doubling") {
    const auto& cfg = testdata::paper();
    for (const auto& [id, p, j] : std::vector<std::tuple<std::string, long, int>>{{"C1", 89, 1}, {"C2", 23, 3}, {"C3", 71, 3}}) {
        const auto& cc = cfg.curve(id);
        for (int M : testdata::kPrecisions) {
            ChabautyReport R = chabauty_report(cc.C, cc.gens, cc.N, p, cc.known, M);
            CHECK(R.all_true());
            for (const auto& v : R.points) {
                REQUIRE(v.bundle);
                CHECK(v.bundle->j == j);
                CHECK(v.bundle->A.rows() == 4);
                for (int r : v.bundle->ranks) CHECK(r == v.bundle->e);
            }
        }
    }
}

TEST_CASE("ramified prime is rejected") {
    const auto& cc = testdata::paper().curve("C1");
    ChabautyReport R = chabauty_report(cc.C, cc.gens, cc.N, 11, cc.known, 12);
    for (const auto& v : R.points) {
        CHECK_FALSE(v.verdict);
        CHECK(v.error_kind == "rejected");
    }
}

TEST_CASE("default uniformizers") {
    const auto& cc = testdata::paper().curve("C1");
    CHECK(default_uniformizer(cc.C, cc.known[0].P).kind == UniKind::XShift);
    auto tau = default_uniformizer(cc.C, CurvePoint<KElt>::at_infinity());
    CHECK(tau.kind == UniKind::Scaled);
    CHECK(tau.a == 2);
    CHECK(tau.b == 1);
}

}  // TEST_SUITE
