#pragma once

// Dense integer matrices with GMP entries: row Hermite form, Smith form with
// both transforms, and kernels of reduction maps Z^r -> prod Z/m_i.

#include <string>
#include <vector>

#include <gmpxx.h>

namespace chab {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : r_(rows), c_(cols), a_(std::size_t(rows) * cols) {}
    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows, int cols = -1);

    int rows() const { return r_; }
    int cols() const { return c_; }
    mpz_class& operator()(int i, int j) { return a_[std::size_t(i) * c_ + j]; }
    const mpz_class& operator()(int i, int j) const { return a_[std::size_t(i) * c_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    IntMatrix transpose() const;
    std::vector<mpz_class> row(int i) const;
    std::vector<mpz_class> col(int j) const;
    void swap_rows(int i, int j);
    // row i += q * row j
    void add_row(int i, int j, const mpz_class& q);
    IntMatrix block(int r0, int c0, int nr, int nc) const;
    bool is_zero() const;
    std::string str() const;

private:
    int r_ = 0, c_ = 0;
    std::vector<mpz_class> a_;
};

mpz_class determinant(const IntMatrix& A);  // Bareiss

struct HnfResult {
    IntMatrix H;  // U * A, row echelon, pivots positive, entries above pivots reduced
    IntMatrix U;  // unimodular
    int rank = 0;
    std::vector<int> pivot_cols;
};
HnfResult hnf(const IntMatrix& A);

struct SnfResult {
    IntMatrix D;  // P * A * Q, diagonal d_1 | d_2 | ... (non-negative)
    IntMatrix P, Q, Qinv;
};
SnfResult smith(const IntMatrix& A);

// Basis (as rows) of {x in Z^r : M x = 0 mod moduli[i] in row i}. M is k x r.
// The result is in Hermite form and has full rank r.
IntMatrix kernel_lattice(const IntMatrix& M, const std::vector<mpz_class>& moduli);

// Reduce the row vector x modulo the full-rank lattice with Hermite basis H
// (square, upper triangular): the result has 0 <= x_j < H(j, j).
std::vector<mpz_class> reduce_mod_hnf(const IntMatrix& H, std::vector<mpz_class> x);

}  // namespace chab
