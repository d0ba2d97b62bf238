#pragma once

// Matrices over Z_p / Q_p with individually tracked entry precision, the
// Hermite reduction used by the Chabauty criterion, and reduction-mod-p rank.
// Integer lattices for the sieve live in intmat.hpp and are re-exported here.

#include <string>
#include <vector>

#include "chab/intmat.hpp"
#include "chab/padic.hpp"

namespace chab {

class PadicMatrix {
public:
    PadicMatrix() = default;
    PadicMatrix(int rows, int cols, const PadicCtx* c);
    static PadicMatrix identity(int n, const PadicCtx* c);

    int rows() const { return r_; }
    int cols() const { return c_; }
    const PadicCtx* ctx() const { return ctx_; }
    PadicNum& operator()(int i, int j) { return a_[std::size_t(i) * c_ + j]; }
    const PadicNum& operator()(int i, int j) const { return a_[std::size_t(i) * c_ + j]; }

    PadicMatrix operator*(const PadicMatrix& o) const;
    PadicMatrix rows_range(int r0, int n) const;
    // Vertical concatenation.
    static PadicMatrix stack(const PadicMatrix& top, const PadicMatrix& bottom);
    PadicMatrix shift(long k) const;  // multiply every entry by p^k
    PadicMatrix cap_abs(long absprec) const;
    void swap_rows(int i, int j);
    // row i += q * row j
    void add_row(int i, int j, const PadicNum& q);
    void scale_row(int i, const PadicNum& q);

    long min_valuation() const;  // kInfPrec for the zero matrix
    long min_abs_prec() const;
    // Entries reduced mod p^k as centered integers (k-digit display form).
    std::vector<std::vector<mpz_class>> centered(int k) const;
    std::string str(int digits = 2) const;

private:
    int r_ = 0, c_ = 0;
    const PadicCtx* ctx_ = nullptr;
    std::vector<PadicNum> a_;
};

struct ScaledMatrix {
    long h = 0;
    PadicMatrix B;  // p^h A
};
ScaledMatrix scale_to_integral(const PadicMatrix& A);

struct PadicHnf {
    PadicMatrix U;   // invertible over Z_p
    PadicMatrix Ap;  // U * B
    int j = 0;       // zero rows, at the bottom
    std::vector<int> pivot_cols;
};

// Row echelon form over Z_p with the minimal-valuation pivot in each column.
// An entry counts as zero when its valuation reaches zero_threshold (default:
// the smallest absolute precision present in B).
PadicHnf hnf_with_transform(const PadicMatrix& B, long zero_threshold = -1);

// Rank over F_p of the reduction of an integral matrix.
int rank_mod_p(const PadicMatrix& E);
int rank_mod_p(const std::vector<std::vector<long>>& E, long p);

}  // namespace chab
