#include "chab/intmat.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

#include "chab/errors.hpp"

namespace chab {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows, int cols) {
    int nc = cols >= 0 ? cols : (rows.empty() ? 0 : int(rows[0].size()));
    IntMatrix M(int(rows.size()), nc);
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < nc; ++j) M(i, j) = rows[i].at(j);
    return M;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (c_ != o.r_) throw DomainError("matrix shape mismatch in product");
    IntMatrix R(r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            const mpz_class& a = (*this)(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.c_; ++j) R(i, j) += a * o(k, j);
        }
    return R;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix T(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) T(j, i) = (*this)(i, j);
    return T;
}

std::vector<mpz_class> IntMatrix::row(int i) const {
    return {a_.begin() + std::size_t(i) * c_, a_.begin() + std::size_t(i + 1) * c_};
}

std::vector<mpz_class> IntMatrix::col(int j) const {
    std::vector<mpz_class> v(r_);
    for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

void IntMatrix::swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMatrix::add_row(int i, int j, const mpz_class& q) {
    if (q == 0) return;
    for (int k = 0; k < c_; ++k) (*this)(i, k) += q * (*this)(j, k);
}

IntMatrix IntMatrix::block(int r0, int c0, int nr, int nc) const {
    IntMatrix B(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) B(i, j) = (*this)(r0 + i, c0 + j);
    return B;
}

bool IntMatrix::is_zero() const {
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < r_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < c_; ++j) os << (j ? " " : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
}

mpz_class determinant(const IntMatrix& A) {
    if (A.rows() != A.cols()) throw DomainError("determinant of a non-square matrix");
    const int n = A.rows();
    if (n == 0) return 1;
    IntMatrix M = A;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (M(k, k) == 0) {
            int s = k + 1;
            while (s < n && M(s, k) == 0) ++s;
            if (s == n) return 0;
            M.swap_rows(k, s);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                mpz_class t = M(i, j) * M(k, k) - M(i, k) * M(k, j);
                mpz_divexact(M(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = M(k, k);
    }
    return sign * M(n - 1, n - 1);
}

namespace {

// floor division
mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

HnfResult hnf(const IntMatrix& A) {
    HnfResult R{A, IntMatrix::identity(A.rows()), 0, {}};
    IntMatrix& H = R.H;
    IntMatrix& U = R.U;
    const int m = H.rows(), n = H.cols();
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        for (;;) {
            int best = -1;
            for (int i = r; i < m; ++i) {
                if (H(i, c) == 0) continue;
                if (best < 0 || abs(H(i, c)) < abs(H(best, c))) best = i;
            }
            if (best < 0) break;
            H.swap_rows(r, best);
            U.swap_rows(r, best);
            bool done = true;
            for (int i = r + 1; i < m; ++i) {
                if (H(i, c) == 0) continue;
                mpz_class q = fdiv(H(i, c), H(r, c));
                H.add_row(i, r, -q);
                U.add_row(i, r, -q);
                if (H(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (r >= m || H(r, c) == 0) continue;
        if (H(r, c) < 0) {
            H.add_row(r, r, -2);
            U.add_row(r, r, -2);
        }
        for (int i = 0; i < r; ++i) {
            mpz_class q = fdiv(H(i, c), H(r, c));
            H.add_row(i, r, -q);
            U.add_row(i, r, -q);
        }
        R.pivot_cols.push_back(c);
        ++r;
    }
    R.rank = r;
    return R;
}

SnfResult smith(const IntMatrix& A) {
    const int m = A.rows(), n = A.cols();
    SnfResult R{A, IntMatrix::identity(m), IntMatrix::identity(n), IntMatrix::identity(n)};
    IntMatrix& D = R.D;
    IntMatrix& P = R.P;
    IntMatrix& Q = R.Q;
    IntMatrix& Qi = R.Qinv;

    auto col_add = [&](int j, int t, const mpz_class& q) {  // col j += q col t
        if (q == 0) return;
        for (int i = 0; i < m; ++i) D(i, j) += q * D(i, t);
        for (int i = 0; i < n; ++i) Q(i, j) += q * Q(i, t);
        Qi.add_row(t, j, -q);
    };
    auto col_swap = [&](int a, int b) {
        if (a == b) return;
        for (int i = 0; i < m; ++i) std::swap(D(i, a), D(i, b));
        for (int i = 0; i < n; ++i) std::swap(Q(i, a), Q(i, b));
        Qi.swap_rows(a, b);
    };
    auto row_add = [&](int i, int t, const mpz_class& q) {
        D.add_row(i, t, q);
        P.add_row(i, t, q);
    };
    auto row_swap = [&](int a, int b) {
        D.swap_rows(a, b);
        P.swap_rows(a, b);
    };

    const int k = std::min(m, n);
    for (int t = 0; t < k; ++t) {
        // smallest nonzero entry of the trailing block becomes the pivot
        int bi = -1, bj = -1;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j)
                if (D(i, j) != 0 && (bi < 0 || abs(D(i, j)) < abs(D(bi, bj)))) bi = i, bj = j;
        if (bi < 0) break;
        row_swap(t, bi);
        col_swap(t, bj);
        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < m; ++i) {
                if (D(i, t) == 0) continue;
                row_add(i, t, -fdiv(D(i, t), D(t, t)));
                if (D(i, t) != 0) {
                    clean = false;
                    if (abs(D(i, t)) < abs(D(t, t))) row_swap(i, t);
                }
            }
            for (int j = t + 1; j < n; ++j) {
                if (D(t, j) == 0) continue;
                col_add(j, t, -fdiv(D(t, j), D(t, t)));
                if (D(t, j) != 0) {
                    clean = false;
                    if (abs(D(t, j)) < abs(D(t, t))) col_swap(j, t);
                }
            }
            if (!clean) continue;
            // divisibility of the remaining block
            int bad = -1;
            for (int i = t + 1; i < m && bad < 0; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            row_add(t, bad, 1);
        }
        if (D(t, t) < 0) {
            D.add_row(t, t, -2);
            P.add_row(t, t, -2);
        }
    }
    return R;
}

IntMatrix kernel_lattice(const IntMatrix& M, const std::vector<mpz_class>& moduli) {
    const int k = M.rows(), r = M.cols();
    if (int(moduli.size()) != k) throw DomainError("kernel_lattice: one modulus per row required");
    // Left kernel of N = [M^T ; diag(m)] (size (r+k) x k) projected to the first r coordinates.
    IntMatrix N(r + k, k);
    for (int i = 0; i < k; ++i) {
        if (moduli[i] <= 0) throw DomainError("kernel_lattice: moduli must be positive");
        for (int j = 0; j < r; ++j) N(j, i) = M(i, j);
        N(r + i, i) = moduli[i];
    }
    HnfResult h = hnf(N);
    IntMatrix B(r + k - h.rank, r);
    for (int i = h.rank; i < r + k; ++i)
        for (int j = 0; j < r; ++j) B(i - h.rank, j) = h.U(i, j);
    HnfResult hb = hnf(B);
    if (hb.rank != r) throw DomainError("kernel_lattice: projection is not of full rank");
    return hb.H.block(0, 0, r, r);
}

std::vector<mpz_class> reduce_mod_hnf(const IntMatrix& H, std::vector<mpz_class> x) {
    const int r = H.rows();
    for (int j = 0; j < r; ++j) {
        mpz_class q = fdiv(x[j], H(j, j));
        if (q == 0) continue;
        for (int k = j; k < r; ++k) x[k] -= q * H(j, k);
    }
    return x;
}

}  // namespace chab
