#include "chab/abelint.hpp"

#include <algorithm>
#include <cmath>

#include "chab/localexp.hpp"

namespace chab {

PadicNum rebase(const PadicNum& a, const PadicCtx* c) {
    if (a.is_exact_zero()) return PadicNum::zero(c);
    if (a.is_indistinguishable_from_zero()) return PadicNum::approx_zero(c, a.abs_prec());
    return PadicNum::make(c, a.valuation(), a.unit(), std::min(a.rel_prec(), c->cap()));
}

template <class F>
HyperCurve<F> embed_curve(const HyperCurve<KElt>& C, const PrimeOfK& P, int M) {
    const F z = zero_like(embed_as<F>(KElt(C.zero().field(), 1), P, M));
    return HyperCurve<F>(C.f.map(z, [&](const KElt& a) { return embed_as<F>(a, P, M); }));
}

template <class F>
MumfordDiv<F> embed_divisor(const MumfordDiv<KElt>& D, const PrimeOfK& P, int M) {
    const F z = zero_like(embed_as<F>(KElt(D.u.zero().field(), 1), P, M));
    auto e = [&](const KElt& a) { return embed_as<F>(a, P, M); };
    return {D.u.map(z, e), D.v.map(z, e)};
}

template <class F>
CurvePoint<F> embed_point(const CurvePoint<KElt>& Q, const PrimeOfK& P, int M) {
    if (Q.infinity) return CurvePoint<F>::at_infinity();
    return CurvePoint<F>::affine(embed_as<F>(Q.x, P, M), embed_as<F>(Q.y, P, M));
}

namespace {

PadicNum residue_lift(const PadicNum& a) { return PadicNum::from_int(a.ctx(), a.mod_pk(1)); }
PadicExtElt residue_lift(const PadicExtElt& a) {
    return PadicExtElt(a.mode(), a.u(), a.v(), residue_lift(a.c0()), residue_lift(a.c1()));
}

PadicNum div_int(const PadicNum& a, const mpz_class& n) { return a / PadicNum::from_int(a.ctx(), n); }
PadicExtElt div_int(const PadicExtElt& a, const mpz_class& n) {
    return a * a.from_base(PadicNum::from_int(a.ctx(), n).inverse());
}

template <class F>
bool vanishes_mod_p(const F& a) {
    return val_of(a) >= 1;
}

template <class F>
double vd(const F& a) {
    const long v = val_of(a);
    return v >= kInfPrec / 2 ? 1e9 : double(v);
}

// F[Z]/(Z^2 - s1 Z + s2), or F itself with Z = s1 when deg = 1.
template <class F>
struct Alg {
    int deg = 2;
    F s1, s2;

    struct E {
        F a0, a1;
    };
    E scalar(const F& a) const { return {a, zero_like(a)}; }
    E gen() const { return deg == 1 ? E{s1, zero_like(s1)} : E{zero_like(s1), one_like(s1)}; }
    E add(const E& x, const E& y) const { return {x.a0 + y.a0, x.a1 + y.a1}; }
    E mul(const E& x, const E& y) const {
        if (deg == 1) return {x.a0 * y.a0, zero_like(s1)};
        const F hh = x.a1 * y.a1;
        return {x.a0 * y.a0 - hh * s2, x.a0 * y.a1 + x.a1 * y.a0 + hh * s1};
    }
    F trace(const E& x) const {
        if (deg == 1) return x.a0;
        return x.a0 * from_int_like(s1, 2) + x.a1 * s1;
    }
    double min_root_val() const {
        if (deg == 1) return vd(s1);
        return std::min(vd(s1), vd(s2) / 2.0);
    }
    // sum_k c_k q^k by Horner (c_k for k < terms)
    E eval(const PowerSeries<F>& s, const E& q, int terms) const {
        E r = scalar(zero_like(s1));
        for (int k = terms - 1; k >= 0; --k) r = add(mul(r, q), scalar(s[k]));
        return r;
    }
};

template <class F>
F cap(const F& a, long absprec) {
    return a.cap_abs(absprec);
}

double logp(double x, long p) { return std::log(x) / std::log(double(p)); }

// Smallest N with bound(N) >= target.
template <class Fn>
int terms_for(Fn bound, double target) {
    for (int N = 2; N <= 600; ++N)
        if (bound(N) >= target) return N;
    throw PrecisionLoss("tiny integral needs too many series terms");
}

}  // namespace

template <class F>
AbelianIntegrator<F>::AbelianIntegrator(const HyperCurve<KElt>& C, const PrimeOfK& P, int M, long multiplier)
    : C_(C), P_(P), M_(M), multiplier_(multiplier) {
    if (P.p <= 3) throw DomainError("abelian integrals need p > 3");
    auto k = FqCtx::residue_field(C.zero().field(), P);
    FqCurve Cb = reduce_curve(C, P, k.get());
    n_ = jacobian_order(Cb);
}

template <class F>
KernelCase AbelianIntegrator<F>::classify(const MumfordDiv<F>& E, const HyperCurve<F>& CF) const {
    if (E.is_identity()) return KernelCase::identity;
    if (E.degree() == 1) {
        if (vd(E.u[0]) < 0) return KernelCase::infinity_disk;
        throw NonGeneric("degree-one multiple is not in the kernel of reduction");
    }
    const F& u1 = E.u[1];
    const F& u0 = E.u[0];
    if (exact_zero(u0)) throw NonGeneric("kernel representative has a point with x = 0");
    if (vd(u0) < 0 && vd(u1) > vd(u0)) return KernelCase::infinity_disk;
    if (vd(u0) >= 0 && vd(u1) >= 0) {
        const F a = -(u1 / from_int_like(u1, 2));
        if (!vanishes_mod_p(u0 - a * a)) throw NonGeneric("multiple is not in the kernel of reduction");
        if (vanishes_mod_p(CF.f.eval(residue_lift(a)))) {
            return KernelCase::weierstrass_disk;
        }
        return KernelCase::affine_disk;
    }
    throw NonGeneric("points of the multiple lie in different residue disks");
}

template <class F>
std::vector<F> AbelianIntegrator<F>::kernel_integrals(const MumfordDiv<F>& E, const HyperCurve<F>& CF, int Mw) const {
    const F z0 = CF.zero();
    const F one = one_like(z0);
    const F two = from_int_like(z0, 2);
    const long p = P_.p;
    std::vector<F> out(2, z0);
    const KernelCase kc = classify(E, CF);
    if (kc == KernelCase::identity) return out;
    const Poly<F>& f = CF.f;
    const Poly<F>& u = E.u;
    const Poly<F>& v = E.v;

    if (kc == KernelCase::infinity_disk) {
        Alg<F> A;
        typename Alg<F>::E w;
        if (E.degree() == 1) {
            A.deg = 1;
            A.s1 = one / (-u[0]);  // z = 1/x1
            A.s2 = z0;
            w = A.scalar(v[0] * A.s1);
        } else {
            A.deg = 2;
            A.s1 = -(u[1] / u[0]);
            A.s2 = one / u[0];
            w = {v[1], v[0]};  // y z = v1 + v0 z
        }
        const double vz = A.min_root_val();
        if (!(vz > 0)) throw NonGeneric("kernel representative is not near infinity");
        auto bound = [&](int N) { return N * vz - 1.5 * vz - logp(2.0 * N + 3, p); };
        const int N = terms_for(bound, Mw);
        const int tp = 2 * N + 4;
        PowerSeries<F> zt = detail::infinity_z(f, tp);
        PowerSeries<F> T = PowerSeries<F>::variable(z0, tp);
        PowerSeries<F> dz = zt.derivative();
        // F^(z) = sum f[5-k] z^k as a z-series
        std::vector<F> fh(std::size_t(N + 2), z0);
        for (int k = 0; k <= 5 && k < N + 2; ++k) fh[k] = f[5 - k];
        PowerSeries<F> Fhat(z0, 0, std::move(fh));
        PowerSeries<F> Fhat_inv = Fhat.inverse();
        PowerSeries<F> zvar = PowerSeries<F>::variable(z0, N + 2);
        PowerSeries<F> s_of_z = (zvar * Fhat_inv).truncate(N + 2);
        const typename Alg<F>::E zq = A.gen();
        for (int fi = 1; fi <= 2; ++fi) {
            PowerSeries<F> integrand = (T * dz).scale(-(one / two));
            if (fi == 2) integrand = integrand * zt.inverse();
            PowerSeries<F> I = integrand.integrate();
            std::vector<F> phi(std::size_t(N + 1), z0);
            for (int k = 0; k <= N; ++k) phi[k] = I[2 * k + 1];
            PowerSeries<F> Phi(z0, 0, std::move(phi));
            PowerSeries<F> Psi = Phi.compose(s_of_z, N + 1);
            PowerSeries<F> Lam = (Psi * Fhat_inv).shift(2).truncate(N);
            F val = A.trace(A.mul(w, A.eval(Lam, zq, N)));
            out[fi - 1] = cap(val, long(std::floor(bound(N))));
        }
        return out;
    }

    // Affine disks: center s and X' = x - s.
    const F a = -(u[1] / two);
    F s = residue_lift(a);
    if (kc == KernelCase::weierstrass_disk) {
        Poly<F> df = f.derivative();
        for (int it = 0; it < 2 * 64; ++it) {
            F step = f.eval(s) / df.eval(s);
            if (exact_zero(step) || step.is_indistinguishable_from_zero()) break;
            s = s - step;
            if (val_of(step) > 2L * Mw) break;
        }
    }
    Alg<F> A;
    A.deg = 2;
    A.s1 = -(s * two + u[1]);
    A.s2 = s * s + u[1] * s + u[0];
    const double vq = A.min_root_val();
    if (!(vq > 0)) throw NonGeneric("kernel representative is not in a single affine disk");
    const typename Alg<F>::E X = A.gen();
    const typename Alg<F>::E Y = {v[1] * s + v[0], v[1]};
    std::vector<F> b = detail::taylor_shift(f, s);

    if (kc == KernelCase::affine_disk) {
        auto bound = [&](int N) { return N * vq - logp(N + 1.0, p); };
        const int N = terms_for(bound, Mw);
        const F inv0 = one / b[0];
        std::vector<F> g(std::size_t(N + 1), z0);
        for (int k = 0; k <= N && k < int(b.size()); ++k) g[k] = b[k] * inv0;
        PowerSeries<F> h = PowerSeries<F>(z0, 0, std::move(g)).sqrt_with_lead(one);
        PowerSeries<F> hinv = h.inverse();
        PowerSeries<F> xs = PowerSeries<F>::constant(s, N + 1) + PowerSeries<F>::variable(z0, N + 1);
        PowerSeries<F> pre = hinv.scale(one / two);
        PowerSeries<F> denom = hinv.scale(inv0);
        for (int fi = 1; fi <= 2; ++fi) {
            PowerSeries<F> I = pre.integrate().truncate(N + 1);
            PowerSeries<F> G = (I * denom).truncate(N);
            F val = A.trace(A.mul(Y, A.eval(G, X, N)));
            out[fi - 1] = cap(val, long(std::floor(bound(N))));
            pre = (pre * xs).truncate(N + 1);
        }
        return out;
    }

    // Weierstrass disk: x = s + delta(y^2), J_f(y) = y * Xi_f(y^2).
    auto bound = [&](int N) { return (2.0 * N + 1) * vq / 2.0 - logp(2.0 * N + 1, p); };
    const int N = terms_for(bound, Mw);
    b[0] = z0;
    PowerSeries<F> d = detail::weierstrass_delta(b, N + 1);
    PowerSeries<F> dd = d.derivative().truncate(N);
    PowerSeries<F> xs = (PowerSeries<F>::constant(s, N + 1) + d).truncate(N);
    const typename Alg<F>::E Y2 = A.mul(Y, Y);
    PowerSeries<F> g = dd;
    for (int fi = 1; fi <= 2; ++fi) {
        std::vector<F> xi(std::size_t(N), z0);
        for (int k = 0; k < N; ++k) xi[k] = g[k] / from_int_like(z0, 2L * k + 1);
        PowerSeries<F> Xi(z0, 0, std::move(xi));
        F val = A.trace(A.mul(Y, A.eval(Xi, Y2, N)));
        out[fi - 1] = cap(val, long(std::floor(bound(N))));
        g = (g * xs).truncate(N);
    }
    return out;
}

template <class F>
std::vector<F> AbelianIntegrator<F>::attempt(const MumfordDiv<KElt>& D, int Mw, const mpz_class& mult) const {
    HyperCurve<F> CF = embed_curve<F>(C_, P_, Mw);
    MumfordDiv<F> DF = embed_divisor<F>(D, P_, Mw);
    MumfordDiv<F> E = scalar_mul(CF, DF, mult);
    std::vector<F> r = kernel_integrals(E, CF, Mw);
    for (auto& x : r) x = div_int(x, mult);
    return r;
}

template <class F>
std::vector<F> AbelianIntegrator<F>::integrals(const MumfordDiv<KElt>& D) const {
    if (D.is_identity()) {
        const F z = zero_like(embed_as<F>(KElt(C_.zero().field(), 1), P_, M_));
        return {z, z};
    }
    const mpz_class base = n_ * multiplier_;
    int vp = 0;
    for (mpz_class q = base; q % P_.p == 0; q /= P_.p) ++vp;
    int Mw = M_ + 8 + 2 * vp;
    std::string last;
    for (int round = 0; round < 3; ++round, Mw *= 2) {
        for (long k = 1; k <= 3; ++k) {
            try {
                std::vector<F> r = attempt(D, Mw, base * k);
                bool ok = true;
                for (const auto& x : r)
                    if (x.abs_prec() < M_) ok = false;
                if (ok) return r;
                last = "result precision below target";
                break;
            } catch (const NonGeneric& e) {
                last = e.what();
                continue;
            } catch (const PrecisionLoss& e) {
                last = e.what();
                break;
            }
        }
    }
    throw PrecisionLoss("abelian integral failed at " + P_.str() + ": " + last);
}

template class AbelianIntegrator<PadicNum>;
template class AbelianIntegrator<PadicExtElt>;
template HyperCurve<PadicNum> embed_curve<PadicNum>(const HyperCurve<KElt>&, const PrimeOfK&, int);
template HyperCurve<PadicExtElt> embed_curve<PadicExtElt>(const HyperCurve<KElt>&, const PrimeOfK&, int);
template MumfordDiv<PadicNum> embed_divisor<PadicNum>(const MumfordDiv<KElt>&, const PrimeOfK&, int);
template MumfordDiv<PadicExtElt> embed_divisor<PadicExtElt>(const MumfordDiv<KElt>&, const PrimeOfK&, int);
template CurvePoint<PadicNum> embed_point<PadicNum>(const CurvePoint<KElt>&, const PrimeOfK&, int);
template CurvePoint<PadicExtElt> embed_point<PadicExtElt>(const CurvePoint<KElt>&, const PrimeOfK&, int);

IntegralMatrix integral_matrix(const HyperCurve<KElt>& C, long p, const std::vector<MumfordDiv<KElt>>& gens, int M,
                               long multiplier) {
    IntegralMatrix R;
    R.p = p;
    R.primes = splitting_type(C.zero().field(), p);
    if (R.primes.empty() || R.primes[0].kind == PrimeKind::ramified) throw DomainError("p ramifies in K");
    const PadicCtx* c = PadicCtx::get(p, M);
    const int r = int(gens.size());
    const int rows_per = R.primes[0].kind == PrimeKind::inert ? 4 : 2;
    R.A = PadicMatrix(rows_per * int(R.primes.size()), r, c);
    int row = 0;
    for (const auto& P : R.primes) {
        if (P.kind == PrimeKind::split) {
            AbelianIntegrator<PadicNum> ai(C, P, M, multiplier);
            for (int q = 0; q < r; ++q) {
                auto I = ai.integrals(gens[q]);
                for (int f = 0; f < 2; ++f) R.A(row + f, q) = rebase(I[f], c);
            }
            row += 2;
        } else {
            AbelianIntegrator<PadicExtElt> ai(C, P, M, multiplier);
            for (int q = 0; q < r; ++q) {
                auto I = ai.integrals(gens[q]);
                for (int f = 0; f < 2; ++f) {
                    R.A(row + 2 * f, q) = rebase(I[f].c0(), c);
                    R.A(row + 2 * f + 1, q) = rebase(I[f].c1(), c);
                }
            }
            row += 4;
        }
    }
    return R;
}

}  // namespace chab
