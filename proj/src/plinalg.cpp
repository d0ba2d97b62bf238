#include "chab/plinalg.hpp"

#include <algorithm>
#include <sstream>

#include "chab/arith.hpp"

namespace chab {

PadicMatrix::PadicMatrix(int rows, int cols, const PadicCtx* c)
    : r_(rows), c_(cols), ctx_(c), a_(std::size_t(rows) * cols, PadicNum::zero(c)) {}

PadicMatrix PadicMatrix::identity(int n, const PadicCtx* c) {
    PadicMatrix I(n, n, c);
    for (int i = 0; i < n; ++i) I(i, i) = PadicNum::from_int(c, 1);
    return I;
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
    if (c_ != o.r_) throw DomainError("matrix shape mismatch in product");
    PadicMatrix R(r_, o.c_, ctx_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < o.c_; ++j) {
            PadicNum s = PadicNum::zero(ctx_);
            for (int k = 0; k < c_; ++k) s += (*this)(i, k) * o(k, j);
            R(i, j) = s;
        }
    return R;
}

PadicMatrix PadicMatrix::rows_range(int r0, int n) const {
    PadicMatrix R(n, c_, ctx_);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < c_; ++j) R(i, j) = (*this)(r0 + i, j);
    return R;
}

PadicMatrix PadicMatrix::stack(const PadicMatrix& top, const PadicMatrix& bottom) {
    if (top.rows() == 0) return bottom;
    if (bottom.rows() == 0) return top;
    if (top.c_ != bottom.c_) throw DomainError("stacking matrices with different widths");
    PadicMatrix R(top.r_ + bottom.r_, top.c_, top.ctx_);
    for (int i = 0; i < top.r_; ++i)
        for (int j = 0; j < top.c_; ++j) R(i, j) = top(i, j);
    for (int i = 0; i < bottom.r_; ++i)
        for (int j = 0; j < top.c_; ++j) R(top.r_ + i, j) = bottom(i, j);
    return R;
}

PadicMatrix PadicMatrix::shift(long k) const {
    PadicMatrix R = *this;
    for (auto& x : R.a_) x = x.shift(k);
    return R;
}

PadicMatrix PadicMatrix::cap_abs(long absprec) const {
    PadicMatrix R = *this;
    for (auto& x : R.a_) x = x.cap_abs(absprec);
    return R;
}

void PadicMatrix::swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void PadicMatrix::add_row(int i, int j, const PadicNum& q) {
    for (int k = 0; k < c_; ++k) (*this)(i, k) += q * (*this)(j, k);
}

void PadicMatrix::scale_row(int i, const PadicNum& q) {
    for (int k = 0; k < c_; ++k) (*this)(i, k) *= q;
}

long PadicMatrix::min_valuation() const {
    long v = kInfPrec;
    for (const auto& x : a_) v = std::min(v, x.valuation());
    return v;
}

long PadicMatrix::min_abs_prec() const {
    long v = kInfPrec;
    for (const auto& x : a_) v = std::min(v, x.abs_prec());
    return v;
}

std::vector<std::vector<mpz_class>> PadicMatrix::centered(int k) const {
    std::vector<std::vector<mpz_class>> out(r_, std::vector<mpz_class>(c_));
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) out[i][j] = (*this)(i, j).centered(k);
    return out;
}

std::string PadicMatrix::str(int digits) const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < r_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < c_; ++j) {
            const PadicNum& x = (*this)(i, j);
            os << (j ? ", " : "");
            if (x.valuation() >= 0 && x.abs_prec() >= digits)
                os << x.centered(digits);
            else
                os << x.str();
        }
    }
    os << "]";
    return os.str();
}

ScaledMatrix scale_to_integral(const PadicMatrix& A) {
    long vmin = kInfPrec;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            const PadicNum& x = A(i, j);
            if (x.is_exact_zero()) continue;
            if (x.is_indistinguishable_from_zero() && x.valuation() < 0)
                throw PrecisionLoss("entry valuation is not determined at this precision");
            vmin = std::min(vmin, x.valuation());
        }
    const long h = vmin == kInfPrec ? 0 : std::max(0L, -vmin);
    return {h, A.shift(h)};
}

PadicHnf hnf_with_transform(const PadicMatrix& B, long zero_threshold) {
    const PadicCtx* c = B.ctx();
    const int m = B.rows(), n = B.cols();
    if (B.min_valuation() < 0) throw NonIntegral("hnf_with_transform expects an integral matrix");
    const long T = zero_threshold >= 0 ? zero_threshold : B.min_abs_prec();
    PadicHnf R{PadicMatrix::identity(m, c), B, 0, {}};
    PadicMatrix& H = R.Ap;
    PadicMatrix& U = R.U;

    auto nonzero = [&](const PadicNum& x) {
        if (x.is_exact_zero()) return false;
        if (x.valuation() >= T) return false;
        if (x.is_indistinguishable_from_zero())
            throw PrecisionLoss("pivot decision needs more precision");
        return true;
    };

    int r = 0;
    for (int col = 0; col < n && r < m; ++col) {
        int best = -1;
        for (int i = r; i < m; ++i) {
            if (!nonzero(H(i, col))) continue;
            if (best < 0 || H(i, col).valuation() < H(best, col).valuation()) best = i;
        }
        if (best < 0) {
            for (int i = r; i < m; ++i) H(i, col) = PadicNum::zero(c);
            continue;
        }
        H.swap_rows(r, best);
        U.swap_rows(r, best);
        const PadicNum piv = H(r, col);
        const long k = piv.valuation();
        // make the pivot exactly p^k
        PadicNum unit_inv = PadicNum::make(c, 0, piv.unit(), piv.rel_prec()).inverse();
        H.scale_row(r, unit_inv);
        U.scale_row(r, unit_inv);
        H(r, col) = PadicNum::make(c, k, 1, piv.rel_prec());
        for (int i = 0; i < m; ++i) {
            if (i == r || H(i, col).is_exact_zero()) continue;
            PadicNum q;
            if (i > r) {
                q = -(H(i, col).shift(-k));
            } else {
                // reduce the entry above the pivot to a representative in [0, p^k)
                const PadicNum& a = H(i, col);
                if (a.valuation() >= k) {
                    q = -(a.shift(-k));
                } else if (a.abs_prec() >= k) {
                    mpz_class rep = a.mod_pk(int(k));
                    q = -((a - PadicNum::from_int(c, rep)).shift(-k));
                } else {
                    continue;
                }
            }
            if (q.is_exact_zero()) continue;
            H.add_row(i, r, q);
            U.add_row(i, r, q);
            if (i > r) H(i, col) = PadicNum::zero(c);
        }
        R.pivot_cols.push_back(col);
        ++r;
    }
    R.j = m - r;
    for (int i = r; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (nonzero(H(i, j))) throw PrecisionLoss("residual row is not zero to working precision");
    return R;
}

int rank_mod_p(const std::vector<std::vector<long>>& E, long p) {
    if (E.empty()) return 0;
    auto md = [p](long a) { return ((a % p) + p) % p; };
    std::vector<std::vector<long>> M = E;
    for (auto& row : M)
        for (auto& x : row) x = md(x);
    const int m = int(M.size()), n = int(M[0].size());
    int r = 0;
    for (int col = 0; col < n && r < m; ++col) {
        int piv = -1;
        for (int i = r; i < m; ++i)
            if (M[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[r], M[piv]);
        const long inv = long(powmod64(std::uint64_t(M[r][col]), std::uint64_t(p - 2), std::uint64_t(p)));
        for (int i = r + 1; i < m; ++i) {
            const long f = M[i][col] * inv % p;
            if (f == 0) continue;
            for (int j = col; j < n; ++j) M[i][j] = md(M[i][j] - f * M[r][j]);
        }
        ++r;
    }
    return r;
}

int rank_mod_p(const PadicMatrix& E) {
    const long p = E.ctx() ? E.ctx()->p() : 2;
    std::vector<std::vector<long>> M(E.rows(), std::vector<long>(E.cols()));
    for (int i = 0; i < E.rows(); ++i)
        for (int j = 0; j < E.cols(); ++j) {
            const PadicNum& x = E(i, j);
            if (x.valuation() < 0) throw NonIntegral("rank_mod_p expects an integral matrix");
            M[i][j] = x.residue();
        }
    return rank_mod_p(M, p);
}

}  // namespace chab
