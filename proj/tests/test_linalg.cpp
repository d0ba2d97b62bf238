#include <doctest.h>

#include <map>

#include "chab/arith.hpp"
#include "common.hpp"

using namespace chab;

namespace {

IntMatrix random_int(int r, int c, std::mt19937_64& rng, long range) {
    IntMatrix A(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) A(i, j) = long(rng() % (2 * range + 1)) - range;
    return A;
}

PadicMatrix to_padic(const IntMatrix& A, const PadicCtx* ctx) {
    PadicMatrix B(A.rows(), A.cols(), ctx);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) B(i, j) = PadicNum::from_int(ctx, A(i, j));
    return B;
}

}  // namespace

TEST_SUITE("intmat") {

TEST_CASE("Hermite form contract") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        IntMatrix A = random_int(4, 3, rng, 30);
        HnfResult h = hnf(A);
        CHECK(h.U * A == h.H);
        mpz_class d = determinant(h.U);
        CHECK(abs(d) == 1);
        for (int i = 0; i < h.rank; ++i) {
            const int c = h.pivot_cols[i];
            CHECK(h.H(i, c) > 0);
            for (int r = 0; r < i; ++r) CHECK((h.H(r, c) >= 0 && h.H(r, c) < h.H(i, c)));
            for (int r = i + 1; r < A.rows(); ++r) CHECK(h.H(r, c) == 0);
        }
    }
}

TEST_CASE("Smith form contract") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        IntMatrix A = random_int(3, 4, rng, 20);
        SnfResult s = smith(A);
        CHECK(s.P * A * s.Q == s.D);
        CHECK(s.Q * s.Qinv == IntMatrix::identity(4));
        CHECK(abs(determinant(s.P)) == 1);
        for (int i = 0; i + 1 < 3; ++i)
            if (s.D(i + 1, i + 1) != 0) CHECK(mpz_divisible_p(s.D(i + 1, i + 1).get_mpz_t(), s.D(i, i).get_mpz_t()));
    }
}

TEST_CASE("kernel_lattice agrees with enumeration") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
        const int k = 1 + int(rng() % 3);
        std::vector<mpz_class> mods;
        long L = 1;
        for (int i = 0; i < k; ++i) {
            const long m = 2 + long(rng() % 11);
            mods.push_back(m);
            L = std::lcm(L, m);
        }
        IntMatrix M = random_int(k, 2, rng, 50);
        IntMatrix H = kernel_lattice(M, mods);
        REQUIRE(H.rows() == 2);
        std::map<std::vector<long>, int> image;
        for (long a = 0; a < L; ++a)
            for (long b = 0; b < L; ++b) {
                std::vector<long> img;
                for (int i = 0; i < k; ++i) img.push_back(mod_i64(M(i, 0) * a + M(i, 1) * b, mods[i].get_si()));
                ++image[img];
                const bool in_kernel = std::all_of(img.begin(), img.end(), [](long v) { return v == 0; });
                auto red = reduce_mod_hnf(H, {mpz_class(a), mpz_class(b)});
                CHECK(in_kernel == (red[0] == 0 && red[1] == 0));
            }
        CHECK(determinant(H) == long(image.size()));
    }
}

}  // TEST_SUITE

TEST_SUITE("plinalg") {

TEST_CASE("p-adic Hermite form: U B = A', U unimodular, j stable under doubling") {
    std::mt19937_64 rng(21);
    for (long p : {23L, 89L})
        for (int t = 0; t < 20; ++t) {
            // rank-deficient integer matrix with entries divisible by p
            IntMatrix X = random_int(4, 2, rng, 40), Y = random_int(2, 3, rng, 40);
            IntMatrix A = X * Y;
            for (int i = 0; i < A.rows(); ++i)
                for (int j = 0; j < A.cols(); ++j) A(i, j) *= p;
            int j_prev = -1;
            for (int M : testdata::kPrecisions) {
                const PadicCtx* ctx = PadicCtx::get(p, M);
                PadicMatrix B = to_padic(A, ctx);
                PadicHnf h = hnf_with_transform(B);
                PadicMatrix UB = h.U * B;
                for (int i = 0; i < B.rows(); ++i)
                    for (int c = 0; c < B.cols(); ++c) CHECK(UB(i, c).equal_mod(h.Ap(i, c), M));
                CHECK(rank_mod_p(h.U) == B.rows());
                for (int i = B.rows() - h.j; i < B.rows(); ++i)
                    for (int c = 0; c < B.cols(); ++c) CHECK(h.Ap(i, c).is_indistinguishable_from_zero());
                CHECK(h.j >= 2);
                if (j_prev >= 0) CHECK(h.j == j_prev);
                j_prev = h.j;
            }
        }
}

TEST_CASE("rank mod p") {
    CHECK(rank_mod_p({{1, 2}, {2, 4}}, 7) == 1);
    CHECK(rank_mod_p({{1, 2}, {3, 4}}, 2) == 1);
    CHECK(rank_mod_p({{1, 2}, {3, 4}}, 7) == 2);
}

}  // TEST_SUITE
