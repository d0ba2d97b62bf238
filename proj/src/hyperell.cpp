#include "chab/hyperell.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include <omp.h>

#include "chab/arith.hpp"
#include "chab/intmat.hpp"

namespace chab {

// ---------------------------------------------------------------------------
// Reduction and base change

FqCurve reduce_curve(const HyperCurve<KElt>& C, const PrimeOfK& P, const FqCtx* k) {
    const Fq z(k, 0, 0);
    Poly<Fq> f = C.f.map(z, [&](const KElt& a) { return reduce(a, P, k); });
    if (f.degree() != 5) throw BadReduction("leading coefficient vanishes at " + P.str());
    if (!is_squarefree(f)) throw BadReduction("reduced quintic is not squarefree at " + P.str());
    return FqCurve(std::move(f));
}

bool has_good_reduction(const HyperCurve<KElt>& C, const PrimeOfK& P) {
    auto k = FqCtx::residue_field(C.zero().field(), P);
    try {
        reduce_curve(C, P, k.get());
    } catch (const BadReduction&) {
        return false;
    } catch (const NonIntegral&) {
        return false;
    }
    return true;
}

FqDiv reduce_divisor(const MumfordDiv<KElt>& D, const PrimeOfK& P, const FqCurve& Cbar) {
    const Fq z = Cbar.zero();
    auto red = [&](const KElt& a) { return reduce(a, P, z.k); };
    FqDiv R{D.u.map(z, red), D.v.map(z, red)};
    if (R.u.degree() != D.u.degree()) throw NonIntegral("divisor does not reduce at " + P.str());
    return R;
}

bool is_squarefree(const Poly<Fq>& f) {
    if (f.degree() <= 1) return true;
    Poly<Fq> d = f.derivative();
    if (d.is_zero_poly()) return false;
    return xgcd(f, d).g.degree() == 0;
}

FqCurve base_change(const FqCurve& C, const FqCtx* k) {
    const Fq z(k, 0, 0);
    return FqCurve(C.f.map(z, [&](const Fq& a) {
        if (a.k->degree() == k->degree()) return Fq(k, a.a, a.b);
        if (a.k->degree() != 1) throw DomainError("base_change only embeds a prime field");
        return Fq(k, a.a, 0);
    }));
}

// ---------------------------------------------------------------------------
// Point counting

namespace {

inline std::uint64_t fiber_size(const FqCurve& C, const Fq& x) {
    Fq y2 = C.f.eval(x);
    if (y2.is_zero()) return 1;
    return y2.is_square() ? 2 : 0;
}

}  // namespace

std::uint64_t count_points_serial(const FqCurve& C) {
    const FqCtx* k = C.zero().k;
    const std::uint64_t q = k->order();
    std::uint64_t n = 1;
    for (std::uint64_t i = 0; i < q; ++i) n += fiber_size(C, Fq::from_index(k, i));
    return n;
}

std::uint64_t count_points(const FqCurve& C) {
    const FqCtx* k = C.zero().k;
    const std::int64_t q = std::int64_t(k->order());
    std::uint64_t n = 1;
#pragma omp parallel for reduction(+ : n) schedule(static)
    for (std::int64_t i = 0; i < q; ++i) n += fiber_size(C, Fq::from_index(k, std::uint64_t(i)));
    return n;
}

std::vector<FqPoint> rational_points(const FqCurve& C) {
    const FqCtx* k = C.zero().k;
    std::vector<FqPoint> pts{FqPoint::at_infinity()};
    for (std::uint64_t i = 0; i < k->order(); ++i) {
        Fq x = Fq::from_index(k, i), y;
        if (!fq_sqrt(C.f.eval(x), y)) continue;
        pts.push_back(FqPoint::affine(x, y));
        if (!y.is_zero()) pts.push_back(FqPoint::affine(x, -y));
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Random divisors

namespace {

// Element a0 + a1 X of F_q[X]/(X^2 + b X + c).
struct AElt {
    Fq a0, a1;
};

struct AlgebraCtx {
    Fq b, c;
    AElt mul(const AElt& x, const AElt& y) const {
        Fq hh = x.a1 * y.a1;
        return {x.a0 * y.a0 - c * hh, x.a0 * y.a1 + x.a1 * y.a0 - b * hh};
    }
    AElt pow(AElt x, std::uint64_t e) const {
        AElt r{one_like(b), zero_like(b)};
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }
    Fq norm(const AElt& x) const { return x.a0 * x.a0 - b * x.a0 * x.a1 + c * x.a1 * x.a1; }
    bool is_one(const AElt& x) const { return x.a0 == one_like(b) && x.a1.is_zero(); }
};

// Square root in the quadratic extension A of F_q (A a field).
bool algebra_sqrt(const AlgebraCtx& A, const AElt& x, AElt& root, std::mt19937_64& rng) {
    if (x.a0.is_zero() && x.a1.is_zero()) {
        root = x;
        return true;
    }
    if (!A.norm(x).is_square()) return false;
    const FqCtx* k = A.b.k;
    const std::uint64_t q = k->order();
    const unsigned __int128 Q2 = (unsigned __int128)q * q - 1;
    std::uint64_t Qodd = std::uint64_t(Q2);
    int S = 0;
    while ((Qodd & 1) == 0) {
        Qodd >>= 1;
        ++S;
    }
    AElt z;
    for (;;) {
        z = {Fq::from_index(k, rng() % q), Fq::from_index(k, rng() % q)};
        Fq nz = A.norm(z);
        if (!nz.is_zero() && !nz.is_square()) break;
    }
    int M = S;
    AElt c = A.pow(z, Qodd), t = A.pow(x, Qodd), R = A.pow(x, (Qodd + 1) / 2);
    while (!A.is_one(t)) {
        int i = 0;
        AElt t2 = t;
        while (!A.is_one(t2)) {
            t2 = A.mul(t2, t2);
            ++i;
        }
        AElt b = c;
        for (int j = 0; j < M - i - 1; ++j) b = A.mul(b, b);
        M = i;
        c = A.mul(b, b);
        t = A.mul(t, c);
        R = A.mul(R, b);
    }
    root = R;
    return true;
}

}  // namespace

FqDiv random_divisor(const FqCurve& C, std::mt19937_64& rng) {
    const Fq z = C.zero();
    const FqCtx* k = z.k;
    const std::uint64_t q = k->order();
    const Fq one = one_like(z);
    for (;;) {
        Fq b = Fq::from_index(k, rng() % q), c = Fq::from_index(k, rng() % q);
        Fq disc = b * b - c * Fq::from_int(k, 4);
        Poly<Fq> u(z, Poly<Fq>::Coeffs{c, b, one});
        if (disc.is_zero()) continue;
        if (!disc.is_square()) {
            Poly<Fq> r = C.f % u;  // r1 X + r0 in A
            AlgebraCtx A{b, c};
            AElt s;
            if (!algebra_sqrt(A, {r[0], r[1]}, s, rng)) continue;
            if (rng() & 1) s = {-s.a0, -s.a1};
            return {u, Poly<Fq>(z, Poly<Fq>::Coeffs{s.a0, s.a1})};
        }
        Fq sd;
        fq_sqrt(disc, sd);
        const Fq inv2 = Fq::from_int(k, 2).inv();
        Fq r1 = (-b + sd) * inv2, r2 = (-b - sd) * inv2;
        Fq y1, y2;
        if (!fq_sqrt(C.f.eval(r1), y1) || !fq_sqrt(C.f.eval(r2), y2)) continue;
        if (rng() & 1) y1 = -y1;
        if (rng() & 1) y2 = -y2;
        // v through (r1, y1), (r2, y2)
        Fq slope = (y1 - y2) / (r1 - r2);
        Fq v0 = y1 - slope * r1;
        return {u, Poly<Fq>(z, Poly<Fq>::Coeffs{v0, slope})};
    }
}

std::vector<FqDiv> enumerate_divisors(const FqCurve& C) {
    const Fq z = C.zero();
    const FqCtx* k = z.k;
    const std::uint64_t q = k->order();
    const Fq one = one_like(z);
    std::vector<FqDiv> out{identity(C)};
    for (std::uint64_t i = 0; i < q; ++i) {
        Fq a = Fq::from_index(k, i);
        Poly<Fq> u(z, Poly<Fq>::Coeffs{-a, one});
        for (std::uint64_t j = 0; j < q; ++j) {
            Fq b = Fq::from_index(k, j);
            if (b * b == C.f.eval(a)) out.push_back({u, Poly<Fq>(z, Poly<Fq>::Coeffs{b})});
        }
    }
    for (std::uint64_t i0 = 0; i0 < q; ++i0)
        for (std::uint64_t i1 = 0; i1 < q; ++i1) {
            Poly<Fq> u(z, Poly<Fq>::Coeffs{Fq::from_index(k, i0), Fq::from_index(k, i1), one});
            for (std::uint64_t j0 = 0; j0 < q; ++j0)
                for (std::uint64_t j1 = 0; j1 < q; ++j1) {
                    Poly<Fq> v(z, Poly<Fq>::Coeffs{Fq::from_index(k, j0), Fq::from_index(k, j1)});
                    if (((v * v - C.f) % u).is_zero_poly()) out.push_back({u, v});
                }
        }
    return out;
}

std::uint64_t div_hash(const FqDiv& D) {
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    std::uint64_t h = mix(std::uint64_t(D.u.degree()) + 17);
    for (int i = 0; i < D.u.degree(); ++i) h = mix(h ^ D.u[i].index());
    for (int i = 0; i < D.u.degree(); ++i) h = mix(h ^ (D.v[i].index() + 0x51ed27ULL));
    return h;
}

// ---------------------------------------------------------------------------
// Jacobian orders

namespace {

bool divisor_is_identity(const FqDiv& D) { return D.is_identity(); }

// Exact order of D given a multiple m of it.
std::uint64_t order_from_multiple(const FqCurve& C, const FqDiv& D, std::uint64_t m) {
    for (auto [l, e] : factor_u64(m)) {
        for (int i = 0; i < e; ++i) {
            if (!divisor_is_identity(scalar_mul(C, D, mpz_class((unsigned long)(m / l))))) break;
            m /= l;
        }
    }
    return m;
}

// Order of D, knowing that some multiple of it lies in [lo, hi].
std::uint64_t order_in_window(const FqCurve& C, const FqDiv& D, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t width = hi - lo + 1;
    const std::uint64_t B = std::uint64_t(std::ceil(std::sqrt(double(width)))) + 1;
    std::unordered_multimap<std::uint64_t, std::uint64_t> baby;
    std::vector<FqDiv> elts;
    FqDiv cur = identity(C);
    for (std::uint64_t j = 0; j < B; ++j) {
        if (j > 0 && cur.is_identity()) return j;
        baby.emplace(div_hash(cur), j);
        elts.push_back(cur);
        cur = cantor_add(C, cur, D);
    }
    const FqDiv stepB = cur;  // B * D
    FqDiv T = scalar_mul(C, D, mpz_class((unsigned long)lo));
    for (std::uint64_t base = lo; base <= hi + B; base += B) {
        FqDiv negT = negate(T);
        auto range = baby.equal_range(div_hash(negT));
        for (auto it = range.first; it != range.second; ++it) {
            if (elts[it->second].same(negT)) return order_from_multiple(C, D, base + it->second);
        }
        T = cantor_add(C, T, stepB);
    }
    throw NotInGroup("no multiple of the element order in the Hasse-Weil window");
}

Fq some_nonsquare(const FqCtx* k) {
    for (std::uint64_t i = 2;; ++i) {
        Fq a = Fq::from_index(k, i % k->order());
        if (!a.is_zero() && !a.is_square()) return a;
    }
}

mpz_class lpoly_at_one(const mpz_class& q, const mpz_class& a1, const mpz_class& a2) {
    return 1 + a1 + a2 + q * a1 + q * q;
}

}  // namespace

mpz_class jacobian_order(const FqCurve& C, std::uint64_t seed) {
    const FqCtx* k = C.zero().k;
    const mpz_class q = (unsigned long)k->order();
    const mpz_class N1 = (unsigned long)count_points(C);
    const mpz_class a1 = N1 - q - 1;
    if (k->degree() == 1) {
        auto k2 = FqCtx::quadratic_ext(k->p());
        const mpz_class N2 = (unsigned long)count_points(base_change(C, k2.get()));
        mpz_class a2 = (N2 - q * q - 1 + a1 * a1);
        if (a2 % 2 != 0) throw DomainError("inconsistent point counts");
        a2 /= 2;
        return lpoly_at_one(q, a1, a2);
    }

    // Over F_{p^2}: #J = A + a2 and #J(twist) = A' + a2 with a2 in a known window.
    const double sq = std::sqrt(double(k->order()));
    const double a1d = std::fabs(a1.get_d());
    const mpz_class a2lo = mpz_class(std::floor(2 * sq * a1d - 2 * q.get_d())) - 2;
    const mpz_class a2hi = mpz_class(std::ceil(a1d * a1d / 4 + 2 * q.get_d())) + 2;
    const mpz_class A = lpoly_at_one(q, a1, 0);
    const mpz_class At = lpoly_at_one(q, -a1, 0);

    FqCurve T(C.f.scale(some_nonsquare(k)));
    std::mt19937_64 rng(seed);
    mpz_class L = 1, Lt = 1;
    for (int iter = 0; iter < 200; ++iter) {
        const bool twist = iter % 2 == 1;
        const FqCurve& X = twist ? T : C;
        const mpz_class base = twist ? At : A;
        const std::uint64_t lo = mpz_class(base + a2lo).get_ui(), hi = mpz_class(base + a2hi).get_ui();
        const std::uint64_t o = order_in_window(X, random_divisor(X, rng), lo, hi);
        mpz_lcm_ui((twist ? Lt : L).get_mpz_t(), (twist ? Lt : L).get_mpz_t(), o);

        // a2 with L | A + a2 and Lt | At + a2
        std::vector<mpz_class> cands;
        mpz_class first = A + a2lo;
        mpz_class r = first % L;
        if (r != 0) first += L - r;
        for (mpz_class m = first; m <= A + a2hi && cands.size() < 3; m += L) {
            mpz_class a2 = m - A;
            if ((At + a2) % Lt == 0) cands.push_back(a2);
        }
        if (cands.size() == 1 && iter >= 3) return A + cands[0];
    }
    throw FactorizationTooHard("could not pin down #J over F_q by baby-step giant-step");
}

// ---------------------------------------------------------------------------
// Discrete logarithms

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    mpz_class r, A = (unsigned long)a, M = (unsigned long)m;
    if (!mpz_invert(r.get_mpz_t(), A.get_mpz_t(), M.get_mpz_t())) throw DomainError("non-invertible residue");
    return r.get_ui();
}

FqDiv mul_u64(const FqCurve& C, const FqDiv& D, std::uint64_t n) {
    return scalar_mul(C, D, mpz_class((unsigned long)n));
}

constexpr std::size_t kBabyCap = std::size_t(1) << 22;

}  // namespace

// Multi-dimensional baby-step giant-step over a basis g_0..g_{s-1} with
// orders d_i. Baby steps cover the leading coordinates completely plus a
// prefix [0, bp) of coordinate t; giant steps cover the rest.
class BabyTable {
public:
    BabyTable(const FqCurve& C, const std::vector<FqDiv>& gens, const std::vector<std::uint64_t>& ords,
              std::uint64_t target)
        : C_(C), gens_(gens), ords_(ords) {
        const int s = int(gens.size());
        target = std::max<std::uint64_t>(1, std::min<std::uint64_t>(target, kBabyCap));
        std::uint64_t prod = 1;
        t_ = 0;
        while (t_ < s && prod * ords[t_] <= target) prod *= ords[t_++];
        full_ = prod;
        if (t_ < s) {
            bp_ = std::max<std::uint64_t>(1, target / prod);
            nbaby_ = prod * bp_;
        } else {
            bp_ = 1;
            nbaby_ = prod;
        }
        std::size_t cap = 16;
        while (cap < 2 * nbaby_) cap <<= 1;
        keys_.assign(cap, 0);
        vals_.assign(cap, 0);
        mask_ = cap - 1;

        FqDiv cur = identity(C);
        std::vector<std::uint64_t> digit(std::size_t(t_ + 1), 0);
        for (std::uint64_t idx = 0; idx < nbaby_; ++idx) {
            insert(div_hash(cur), std::uint32_t(idx));
            // odometer; full digits wrap back to the identity automatically
            int l = 0;
            for (; l < t_; ++l) {
                cur = cantor_add(C, cur, gens[l]);
                if (++digit[l] < ords[l]) break;
                digit[l] = 0;
            }
            if (l == t_ && t_ < s) {
                cur = cantor_add(C, cur, gens[t_]);
                ++digit[t_];
            }
        }
        if (t_ < s) giant_step_ = mul_u64(C, gens[t_], bp_);
    }

    std::uint64_t baby_size() const { return nbaby_; }

    // Coordinates of z in the span, or nothing.
    std::optional<std::vector<std::uint64_t>> find(const FqDiv& z) const {
        const int s = int(gens_.size());
        // Giant digits: k in [0, K) for coordinate t, then full digits for t+1..s-1.
        std::vector<std::uint64_t> limit, digit;
        std::vector<FqDiv> steps;
        if (t_ < s) {
            limit.push_back((ords_[t_] + bp_ - 1) / bp_);
            steps.push_back(negate(giant_step_));
            for (int i = t_ + 1; i < s; ++i) {
                limit.push_back(ords_[i]);
                steps.push_back(negate(gens_[i]));
            }
        }
        const int L = int(limit.size());
        digit.assign(std::size_t(L), 0);
        std::vector<FqDiv> base(std::size_t(std::max(L, 1)), identity(C_));
        FqDiv cur = identity(C_);  // minus the current giant element
        for (;;) {
            FqDiv w = cantor_add(C_, z, cur);
            if (auto c = probe(w, digit, z)) return c;
            int l = 0;
            for (; l < L; ++l) {
                if (++digit[l] < limit[l]) {
                    base[l] = cantor_add(C_, base[l], steps[l]);
                    cur = base[l];
                    for (int m = 0; m < l; ++m) base[m] = cur;
                    break;
                }
                digit[l] = 0;
            }
            if (l == L) return std::nullopt;
        }
    }

private:
    void insert(std::uint64_t h, std::uint32_t v) {
        if (h == 0) h = 1;
        std::size_t i = h & mask_;
        while (keys_[i] != 0) i = (i + 1) & mask_;
        keys_[i] = h;
        vals_[i] = v;
    }

    std::optional<std::vector<std::uint64_t>> probe(const FqDiv& w, const std::vector<std::uint64_t>& gdigit,
                                                    const FqDiv& z) const {
        std::uint64_t h = div_hash(w);
        if (h == 0) h = 1;
        const int s = int(gens_.size());
        for (std::size_t i = h & mask_; keys_[i] != 0; i = (i + 1) & mask_) {
            if (keys_[i] != h) continue;
            std::vector<std::uint64_t> c(std::size_t(s), 0);
            std::uint64_t idx = vals_[i];
            for (int l = 0; l < t_; ++l) {
                c[l] = idx % ords_[l];
                idx /= ords_[l];
            }
            if (t_ < s) {
                c[t_] = (idx + gdigit[0] * bp_) % ords_[t_];
                for (int l = t_ + 1; l < s; ++l) c[l] = gdigit[l - t_];
            }
            FqDiv chk = identity(C_);
            for (int l = 0; l < s; ++l) chk = cantor_add(C_, chk, mul_u64(C_, gens_[l], c[l]));
            if (chk.same(z)) return c;
        }
        return std::nullopt;
    }

    FqCurve C_;
    std::vector<FqDiv> gens_;
    std::vector<std::uint64_t> ords_;
    int t_ = 0;
    std::uint64_t full_ = 1, bp_ = 1, nbaby_ = 1;
    FqDiv giant_step_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> vals_;
    std::size_t mask_ = 0;
};

struct JacobianGroup::Sylow {
    std::uint64_t ell = 0;
    int k = 0;
    std::uint64_t size = 1, cofactor = 1;
    std::vector<FqDiv> basis;
    std::vector<std::uint64_t> ords;  // ascending
    std::unique_ptr<BabyTable> table;
    std::uint64_t table_target = 0;
    std::mutex mu;
};

JacobianGroup::JacobianGroup(FqCurve C, std::uint64_t order, std::uint64_t seed) : C_(std::move(C)) {
    S_.order = order;
    build(seed);
}

JacobianGroup JacobianGroup::of_curve(FqCurve C, std::uint64_t seed) {
    const std::uint64_t n = jacobian_order(C, seed).get_ui();
    return JacobianGroup(std::move(C), n, seed);
}

JacobianGroup::~JacobianGroup() = default;
JacobianGroup::JacobianGroup(JacobianGroup&&) noexcept = default;
JacobianGroup& JacobianGroup::operator=(JacobianGroup&&) noexcept = default;

void JacobianGroup::build(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 7);
    const std::uint64_t n = S_.order;
    for (auto [ell, k] : factor_u64(n)) {
        auto S = std::make_unique<Sylow>();
        S->ell = ell;
        S->k = k;
        S->size = ipow(ell, k);
        S->cofactor = n / S->size;
        std::uint64_t hsize = 1;
        int attempts = 0;
        while (hsize < S->size) {
            if (++attempts > 2000) throw FactorizationTooHard("Sylow subgroup basis did not converge");
            FqDiv x = mul_u64(C_, random_divisor(C_, rng), S->cofactor);
            if (x.is_identity()) continue;
            int m = 0;
            for (FqDiv y = x; !y.is_identity(); y = mul_u64(C_, y, ell)) {
                if (++m > k) throw NotInGroup("element order exceeds the Sylow bound; wrong group order?");
            }
            int a = m;
            std::vector<std::uint64_t> coords(S->basis.size(), 0);
            if (!S->basis.empty()) {
                BabyTable T(C_, S->basis, S->ords, std::uint64_t(std::sqrt(double(hsize))) + 1);
                FqDiv y = x;
                for (a = 0; a < m; ++a) {
                    if (auto c = T.find(y)) {
                        coords = *c;
                        break;
                    }
                    y = mul_u64(C_, y, ell);
                }
            }
            if (a == 0) continue;
            const int s = int(S->basis.size());
            IntMatrix R(s + 1, s + 1);
            for (int i = 0; i < s; ++i) {
                R(i, i) = (unsigned long)S->ords[i];
                R(s, i) = -mpz_class((unsigned long)coords[i]);
            }
            R(s, s) = (unsigned long)ipow(ell, a);
            SnfResult snf = smith(R);
            std::vector<FqDiv> gamma = S->basis;
            gamma.push_back(x);
            std::vector<std::uint64_t> gord = S->ords;
            gord.push_back(ipow(ell, m));
            std::vector<std::pair<std::uint64_t, FqDiv>> next;
            hsize = 1;
            for (int j = 0; j <= s; ++j) {
                const mpz_class& dj = snf.D(j, j);
                if (dj <= 1) continue;
                FqDiv g = identity(C_);
                for (int kk = 0; kk <= s; ++kk) {
                    mpz_class c = snf.Qinv(j, kk) % (unsigned long)gord[kk];
                    if (c < 0) c += (unsigned long)gord[kk];
                    g = cantor_add(C_, g, mul_u64(C_, gamma[kk], c.get_ui()));
                }
                next.emplace_back(dj.get_ui(), g);
                hsize *= dj.get_ui();
            }
            std::sort(next.begin(), next.end(), [](auto& l, auto& r) { return l.first < r.first; });
            S->basis.clear();
            S->ords.clear();
            for (auto& [d, g] : next) {
                S->ords.push_back(d);
                S->basis.push_back(g);
            }
        }
        sylow_.push_back(std::move(S));
    }

    // Merge Sylow bases into invariant factors d_1 | d_2 | ...
    std::size_t smax = 0;
    for (auto& S : sylow_) smax = std::max(smax, S->basis.size());
    S_.orders.assign(smax, 1);
    S_.generators.assign(smax, identity(C_));
    for (auto& S : sylow_) {
        const std::size_t off = smax - S->basis.size();
        for (std::size_t i = 0; i < S->basis.size(); ++i) {
            S_.orders[off + i] *= S->ords[i];
            S_.generators[off + i] = cantor_add(C_, S_.generators[off + i], S->basis[i]);
        }
    }
}

void JacobianGroup::prepare(std::size_t expected_targets) const {
    for (auto& S : sylow_) {
        std::lock_guard lk(S->mu);
        const double want = std::sqrt(double(S->size) * double(std::max<std::size_t>(expected_targets, 1)));
        const std::uint64_t target = std::uint64_t(std::min(want, double(S->size))) + 1;
        if (S->table && S->table_target >= target) continue;
        S->table = std::make_unique<BabyTable>(C_, S->basis, S->ords, target);
        S->table_target = target;
    }
}

std::vector<std::uint64_t> JacobianGroup::sylow_dlog(const Sylow& S, const FqDiv& x) const {
    auto c = S.table->find(x);
    if (!c) throw NotInGroup("element not found in its Sylow subgroup");
    return *c;
}

std::vector<std::uint64_t> JacobianGroup::dlog(const FqDiv& D) const {
    if (!is_valid(C_, D)) throw NotInGroup("not a reduced Mumford pair on this curve");
    if (!S_.orders.empty() && !mul_u64(C_, D, S_.order).is_identity())
        throw NotInGroup("element is not killed by the group order");
    bool ready = true;
    for (auto& S : sylow_) ready = ready && S->table != nullptr;
    if (!ready) prepare(16);

    const std::size_t smax = S_.orders.size();
    std::vector<mpz_class> x(smax, 0), mod(smax, 1);
    for (auto& S : sylow_) {
        FqDiv part = mul_u64(C_, D, S->cofactor);
        std::vector<std::uint64_t> y = sylow_dlog(*S, part);
        const std::uint64_t cinv = inv_mod(S->cofactor % S->size, S->size);
        const std::size_t off = smax - S->basis.size();
        for (std::size_t i = 0; i < y.size(); ++i) {
            const std::uint64_t oi = S->ords[i];
            const std::uint64_t yi = std::uint64_t((unsigned __int128)y[i] * (cinv % oi) % oi);
            // CRT with what we have so far
            mpz_class M = mod[off + i], O = (unsigned long)oi, inv;
            mpz_invert(inv.get_mpz_t(), M.get_mpz_t(), O.get_mpz_t());
            mpz_class t = ((mpz_class((unsigned long)yi) - x[off + i]) * inv) % O;
            if (t < 0) t += O;
            x[off + i] += M * t;
            mod[off + i] = M * O;
        }
    }
    std::vector<std::uint64_t> out(smax);
    for (std::size_t i = 0; i < smax; ++i) out[i] = x[i].get_ui();
    return out;
}

FqDiv JacobianGroup::combine(const std::vector<std::uint64_t>& coords) const {
    FqDiv r = identity(C_);
    for (std::size_t i = 0; i < coords.size() && i < S_.generators.size(); ++i)
        r = cantor_add(C_, r, mul_u64(C_, S_.generators[i], coords[i] % S_.orders[i]));
    return r;
}

std::vector<std::vector<std::uint64_t>> JacobianGroup::dlog_batch_serial(const std::vector<FqDiv>& Ds) const {
    prepare(Ds.size());
    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(Ds.size());
    for (const auto& D : Ds) out.push_back(dlog(D));
    return out;
}

std::vector<std::vector<std::uint64_t>> JacobianGroup::dlog_batch(const std::vector<FqDiv>& Ds) const {
    prepare(Ds.size());
    std::vector<std::vector<std::uint64_t>> out(Ds.size());
    const std::int64_t n = std::int64_t(Ds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[i] = dlog(Ds[i]);
    return out;
}

AbGroupStruct group_structure(const JacobianGroup& G) { return G.structure(); }

std::vector<std::uint64_t> dlog_vector(const JacobianGroup& G, const FqDiv& D) { return G.dlog(D); }

}  // namespace chab
