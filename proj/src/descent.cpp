#include "chab/descent.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "chab/arith.hpp"
#include "chab/intmat.hpp"

namespace chab {

namespace {

using cplx = std::complex<long double>;

bool rational_sqrt(const mpq_class& a, mpq_class& r) {
    if (a < 0) return false;
    if (!mpz_perfect_square_p(a.get_num_mpz_t()) || !mpz_perfect_square_p(a.get_den_mpz_t())) return false;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), a.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), a.get_den_mpz_t());
    r = mpq_class(n, d);
    r.canonicalize();
    return true;
}

KElt sign_normalized(const KElt& a) {
    if (a.c0() < 0 || (a.c0() == 0 && a.c1() < 0)) return -a;
    return a;
}

std::vector<std::pair<mpz_class, int>> factor_mpz(mpz_class n) {
    std::vector<std::pair<mpz_class, int>> out;
    if (n < 0) n = -n;
    for (unsigned long p = 2; n > 1 && mpz_class(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        int e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(mpz_class(p), e);
        if (p > 10000000 && mpz_probab_prime_p(n.get_mpz_t(), 30)) break;
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Durand-Kerner with a final Newton polish.
std::vector<cplx> complex_roots(const std::vector<long double>& c) {
    const int n = int(c.size()) - 1;
    std::vector<cplx> z(n);
    const cplx seed(0.4L, 0.9L);
    for (int i = 0; i < n; ++i) z[i] = std::pow(seed, i);
    auto eval = [&](const cplx& x) {
        cplx r = 0;
        for (int i = n; i >= 0; --i) r = r * x + c[i];
        return r;
    };
    auto deval = [&](const cplx& x) {
        cplx r = 0;
        for (int i = n; i >= 1; --i) r = r * x + c[i] * (long double)i;
        return r;
    };
    for (int it = 0; it < 2000; ++it) {
        long double delta = 0;
        for (int i = 0; i < n; ++i) {
            cplx den = c[n];
            for (int j = 0; j < n; ++j)
                if (j != i) den *= (z[i] - z[j]);
            cplx step = eval(z[i]) / den;
            z[i] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-18L) break;
    }
    for (auto& x : z)
        for (int k = 0; k < 3; ++k) {
            cplx d = deval(x);
            if (std::abs(d) > 0) x -= eval(x) / d;
        }
    return z;
}

template <class F, class Det>
auto sylvester_resultant(const std::vector<F>& a, const std::vector<F>& b, const F& zero, Det det) {
    const int m = int(a.size()) - 1, n = int(b.size()) - 1;
    const int N = m + n;
    std::vector<std::vector<F>> S(N, std::vector<F>(N, zero));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) S[i][i + j] = a[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) S[n + i][i + j] = b[n - j];
    return det(S);
}

KElt det_k(std::vector<std::vector<KElt>> S) {
    const int N = int(S.size());
    const KElt zero = zero_like(S[0][0]);
    KElt d = one_like(zero);
    for (int c = 0; c < N; ++c) {
        int piv = -1;
        for (int r = c; r < N; ++r)
            if (!S[r][c].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return zero;
        if (piv != c) {
            std::swap(S[piv], S[c]);
            d = -d;
        }
        d *= S[c][c];
        for (int r = c + 1; r < N; ++r) {
            if (S[r][c].is_zero()) continue;
            KElt q = S[r][c] / S[c][c];
            for (int k = c; k < N; ++k) S[r][k] -= q * S[c][k];
        }
    }
    return d;
}

}  // namespace

Poly<KElt> to_k(const ZPoly& a, const QuadField& F) {
    std::vector<KElt> c;
    for (const auto& x : a) c.emplace_back(F, mpq_class(x));
    return Poly<KElt>(KElt(F, 0), c);
}

Poly<KElt> conj(const Poly<KElt>& a) { return a.map(a.zero(), [](const KElt& x) { return conj(x); }); }

// ---------------------------------------------------------------------------

ConjugateFactorization factor_over_K(const ZPoly& Phi, const QuadField& F) {
    F.validate();
    const int D = int(Phi.size()) - 1;
    if (D < 2 || D % 2 != 0 || Phi.back() != 1) throw NoConjugateFactorization("Phi must be monic of even degree");
    const int n = D / 2;
    std::vector<long double> c;
    for (const auto& a : Phi) c.push_back((long double)a.get_d());
    std::vector<cplx> z = complex_roots(c);

    const long double disc = (long double)F.disc();
    const cplx sq = disc < 0 ? cplx(0, std::sqrt(-disc)) : cplx(std::sqrt(disc), 0);
    const cplx th1 = (cplx(-F.u, 0) + sq) / 2.0L, th2 = (cplx(-F.u, 0) - sq) / 2.0L;
    const Poly<KElt> target = to_k(Phi, F);

    auto coeffs_of = [&](const std::vector<int>& idx) {
        std::vector<cplx> p{1};
        for (int i : idx) {
            std::vector<cplx> q(p.size() + 1, 0);
            for (std::size_t k = 0; k < p.size(); ++k) {
                q[k + 1] += p[k];
                q[k] -= p[k] * z[i];
            }
            p = std::move(q);
        }
        return p;
    };

    // Walk the n-subsets containing root 0 (the complement gives the conjugate).
    std::vector<bool> mask(D, false);
    std::fill(mask.begin(), mask.begin() + n, true);
    do {
        if (!mask[0]) continue;
        std::vector<int> S, T;
        for (int i = 0; i < D; ++i) (mask[i] ? S : T).push_back(i);
        auto cs = coeffs_of(S), ct = coeffs_of(T);
        std::vector<KElt> fc;
        bool ok = true;
        for (int k = 0; k <= n && ok; ++k) {
            const cplx b = (cs[k] - ct[k]) / (th1 - th2);
            const cplx a = cs[k] - b * th1;
            if (std::abs(a.imag()) > 1e-6L || std::abs(b.imag()) > 1e-6L) ok = false;
            // coefficients are algebraic integers: half-integers in the theta basis at worst
            const long double a2 = std::round(2 * a.real()), b2 = std::round(2 * b.real());
            if (std::abs(2 * a.real() - a2) > 1e-6L || std::abs(2 * b.real() - b2) > 1e-6L) ok = false;
            fc.emplace_back(F, mpq_class((long)a2, 2), mpq_class((long)b2, 2));
        }
        if (!ok) continue;
        Poly<KElt> f(KElt(F, 0), fc);
        Poly<KElt> g = conj(f);
        if (!(f * g).same(target)) continue;
        for (int k = n; k >= 0; --k) {
            if (f[k].c1() == 0) continue;
            if (f[k].c1() < 0) std::swap(f, g);
            break;
        }
        return {f, g};
    } while (std::prev_permutation(mask.begin(), mask.end()));
    throw NoConjugateFactorization("no conjugate factorization of Phi over K");
}

mpz_class resultant(const ZPoly& a, const ZPoly& b) {
    return sylvester_resultant<mpz_class>(a, b, mpz_class(0), [](const std::vector<std::vector<mpz_class>>& S) {
        IntMatrix M(int(S.size()), int(S.size()));
        for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t j = 0; j < S.size(); ++j) M(int(i), int(j)) = S[i][j];
        return determinant(M);
    });
}

KElt resultant(const Poly<KElt>& a, const Poly<KElt>& b) {
    std::vector<KElt> ac(a.coeffs().begin(), a.coeffs().end()), bc(b.coeffs().begin(), b.coeffs().end());
    return sylvester_resultant<KElt>(ac, bc, a.zero(), det_k);
}

int valuation(const KElt& x, const PrimeOfK& P) {
    if (x.is_zero()) throw DomainError("valuation of zero");
    const mpz_class ell = P.p;
    if (P.kind != PrimeKind::split) {
        const mpq_class N = norm(x);
        const int v = ord_p(N.get_num(), ell) - ord_p(N.get_den(), ell);
        return P.kind == PrimeKind::inert ? v / 2 : v;
    }
    const mpz_class d = x.denominator();
    mpz_class a = mpz_class(x.c0() * d), b = mpz_class(x.c1() * d);
    int v = -ord_p(d, ell);
    while (mpz_divisible_p(a.get_mpz_t(), ell.get_mpz_t()) && mpz_divisible_p(b.get_mpz_t(), ell.get_mpz_t())) {
        a /= ell;
        b /= ell;
        ++v;
    }
    // a + b theta is now outside ell O_K, so it lies in at most one of the two primes.
    if (mod_i64(a + b * P.theta_residue, P.p) != 0) return v;
    const mpq_class N = norm(KElt(x.field(), a, b));
    return v + ord_p(N.get_num(), ell);
}

ResultantSupports resultant_supports(const ZPoly& q, const Poly<KElt>& f, const Poly<KElt>& g) {
    const QuadField& F = f.zero().field();
    ResultantSupports R;
    Poly<KElt> fg = f * g;
    ZPoly fgz;
    for (const auto& c : fg.coeffs()) {
        if (!c.is_rational() || c.c0().get_den() != 1) throw DomainError("f g must have integer coefficients");
        fgz.push_back(c.c0().get_num());
    }
    R.res1 = resultant(q, fgz);
    if (R.res1 == 0) throw ZeroResultant("q and f g share a root");
    for (auto& [ell, e] : factor_mpz(R.res1)) R.S1.push_back(ell.get_si());

    R.res2 = resultant(f, to_k(q, F) * g);
    if (R.res2.is_zero()) throw ZeroResultant("f and q g share a root");
    const mpq_class N = norm(R.res2);
    for (auto& [ell, e] : factor_mpz(N.get_num() * N.get_den())) {
        if (ell == 2) throw UnsupportedField("resultant support above 2 is not handled");
        for (const auto& P : splitting_type(F, ell.get_si()))
            if (valuation(R.res2, P) != 0) R.S2_raw.push_back(P);
    }
    // A prime above ell outside S1 can only carry even valuations in the norm
    // kernel when it is ramified, or split with its conjugate absent.
    for (const auto& P : R.S2_raw) {
        const bool ell_in_S1 = std::find(R.S1.begin(), R.S1.end(), P.p) != R.S1.end();
        int above = 0;
        for (const auto& Q : R.S2_raw) above += Q.p == P.p;
        const bool lonely = P.kind == PrimeKind::ramified || (P.kind == PrimeKind::split && above == 1);
        if (!ell_in_S1 && lonely) {
            R.notes.push_back("dropped " + P.str() + ": its norm has odd valuation at a prime outside S1");
            continue;
        }
        R.S2.push_back(P);
    }
    return R;
}

// ---------------------------------------------------------------------------

std::string TwistPair::str() const {
    std::ostringstream os;
    os << "(" << a1 << ", " << a2.str() << ")";
    return os.str();
}

bool norm_kernel_supported(const QuadField& F) {
    const long d = F.disc();
    return d == -7 || d == -8 || d == -11 || d == -19;
}

KElt prime_generator(const PrimeOfK& P, const QuadField& F) {
    if (P.kind == PrimeKind::inert) return KElt(F, P.p);
    // a^2 - u a b + v b^2 = p with a + b theta in P
    for (long b = 1; b < 10000; ++b) {
        const long disc = F.u * F.u * b * b - 4 * (F.v * b * b - P.p);
        if (disc < 0) continue;
        const long s = std::lround(std::sqrt((double)disc));
        if (s * s != disc) continue;
        for (long sg : {1L, -1L}) {
            const long num = F.u * b + sg * s;
            if (num % 2 != 0) continue;
            KElt pi(F, num / 2, b);
            if (norm(pi) == P.p && valuation(pi, P) == 1) return sign_normalized(pi);
        }
    }
    throw UnsupportedField("no generator found for " + P.str());
}

std::vector<TwistPair> norm_kernel(const std::vector<long>& S1, const std::vector<PrimeOfK>& S2, const QuadField& F) {
    if (!norm_kernel_supported(F))
        throw UnsupportedField("norm kernel needs class number one and units +-1 (disc -7, -8, -11, -19)");
    std::vector<mpq_class> A1;
    for (unsigned m = 0; m < (1u << S1.size()); ++m) {
        mpq_class a = 1;
        for (std::size_t i = 0; i < S1.size(); ++i)
            if (m >> i & 1) a *= S1[i];
        A1.push_back(a);
        A1.push_back(-a);
    }
    std::vector<KElt> gens;
    for (const auto& P : S2) gens.push_back(prime_generator(P, F));
    std::vector<KElt> A2;
    for (unsigned m = 0; m < (1u << gens.size()); ++m) {
        KElt a(F, 1);
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (m >> i & 1) a *= gens[i];
        A2.push_back(a);
        A2.push_back(-a);
    }
    std::vector<TwistPair> out;
    for (const auto& a1 : A1)
        for (const auto& a2 : A2) {
            mpq_class s;
            if (!rational_sqrt(a1 * norm(a2), s)) continue;
            out.push_back({a1, a2, mpq_class(1) / s});
        }
    return out;
}

std::string TwistCurve::str() const { return "y^2 = " + C.f.str(); }

std::vector<TwistCurve> twist_curves(const std::vector<TwistPair>& pairs, const Poly<KElt>& f) {
    std::vector<TwistCurve> out;
    for (const auto& tp : pairs) out.push_back({tp, HyperCurve<KElt>(f.scale(tp.a2)), tp.a1, conj(tp.a2)});
    return out;
}

// ---------------------------------------------------------------------------

std::string RationalPoint::str() const {
    if (infinity) return "inf";
    std::ostringstream os;
    os << "(" << x << ", " << y << ")";
    return os.str();
}

std::optional<KElt> sqrt_in_K(const KElt& a) {
    const QuadField& F = a.field();
    if (a.is_zero()) return a;
    mpq_class s;
    if (!rational_sqrt(norm(a), s)) return std::nullopt;
    for (const mpq_class& n : {s, mpq_class(-s)}) {
        mpq_class T;
        if (!rational_sqrt(trace(a) + 2 * n, T) || T == 0) continue;
        KElt b = (a + KElt(F, n)) / KElt(F, T);
        if (b * b == a) return b;
    }
    if (a.is_rational()) {
        mpq_class w;
        if (rational_sqrt(a.c0(), w)) return KElt(F, w);
        if (rational_sqrt(a.c0() / F.disc(), w)) return KElt(F, w * F.u, 2 * w);  // w (2 theta + u)
    }
    return std::nullopt;
}

std::vector<RationalPoint> assemble(const std::vector<CoverInput>& covers, const ZPoly& q, const Poly<KElt>& f) {
    const QuadField& F = f.zero().field();
    const Poly<KElt> qk = to_k(q, F), g = conj(f);
    const Poly<KElt> Yrhs = qk * f * g;
    std::vector<RationalPoint> out;
    for (const auto& cv : covers)
        if (!cv.certified) throw UncertifiedInput("cover " + cv.cover.pair.str() + " has no certificate");
    for (const auto& cv : covers) {
        const TwistPair& tp = cv.cover.pair;
        for (const auto& P : cv.H) {
            if (P.infinity) {
                out.push_back({true, 0, 0});
                continue;
            }
            if (!P.x.is_rational()) continue;
            auto y1 = sqrt_in_K(qk.eval(P.x) * KElt(F, tp.a1));
            if (!y1) continue;
            const KElt y2 = P.y;
            if (!(y2 * y2 == f.eval(P.x) * tp.a2)) throw DomainError("point is not on its twist");
            const KElt y3 = conj(y2);
            const KElt y = *y1 * y2 * y3 * KElt(F, tp.nu);
            if (!y.is_rational() || !(y * y == Yrhs.eval(P.x))) continue;
            out.push_back({false, P.x.c0(), y.c0()});
            if (y.c0() != 0) out.push_back({false, P.x.c0(), -y.c0()});
        }
    }
    std::sort(out.begin(), out.end(), [](const RationalPoint& a, const RationalPoint& b) {
        if (a.infinity != b.infinity) return a.infinity;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<RationalPoint> search_points(const ZPoly& q, const ZPoly& Phi, long bound) {
    ZPoly F(q.size() + Phi.size() - 1, 0);
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < Phi.size(); ++j) F[i + j] += q[i] * Phi[j];
    const int d = int(F.size()) - 1;
    const int even = d + (d % 2);  // multiply through by b^even
    std::vector<RationalPoint> out{{true, 0, 0}};
    for (long b = 1; b <= bound; ++b)
        for (long a = -bound; a <= bound; ++a) {
            if (std::gcd(a, b) != 1) continue;
            mpz_class v = 0, ap = 1;
            for (int i = 0; i <= d; ++i) {
                v += F[i] * ap * pow_mpz(b, unsigned(even - i));
                ap *= a;
            }
            if (v < 0 || !mpz_perfect_square_p(v.get_mpz_t())) continue;
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
            mpq_class y(r, pow_mpz(b, unsigned(even / 2)));
            y.canonicalize();
            mpq_class x(a, b);
            x.canonicalize();
            out.push_back({false, x, y});
            if (y != 0) out.push_back({false, x, -y});
        }
    return out;
}

mpz_class torsion_bound(const HyperCurve<KElt>& C, const std::vector<long>& primes) {
    const QuadField& F = C.zero().field();
    struct Local {
        long p;
        mpz_class n;
    };
    std::vector<Local> loc;
    for (long p : primes)
        for (const auto& P : splitting_type(F, p)) {
            if (P.kind == PrimeKind::ramified || !has_good_reduction(C, P)) continue;
            auto k = FqCtx::residue_field(F, P);
            loc.push_back({p, jacobian_order(reduce_curve(C, P, k.get()))});
        }
    std::vector<mpz_class> ells;
    for (const auto& L : loc)
        for (auto& [ell, e] : factor_mpz(L.n)) ells.push_back(ell);
    std::sort(ells.begin(), ells.end());
    ells.erase(std::unique(ells.begin(), ells.end()), ells.end());
    mpz_class bound = 1;
    for (const auto& ell : ells) {
        int e = -1;
        for (const auto& L : loc) {
            if (L.p == ell) continue;  // torsion of order p need not inject mod p
            const int v = ord_p(L.n, ell);
            e = e < 0 ? v : std::min(e, v);
        }
        if (e < 0) return 0;
        bound *= pow_mpz(ell, unsigned(e));
    }
    return bound;
}

}  // namespace chab
