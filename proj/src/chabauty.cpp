#include "chab/chabauty.hpp"

#include <numeric>

namespace chab {

std::string to_string(CriterionCase c) {
    switch (c) {
        case CriterionCase::unramified: return "unramified";
        case CriterionCase::ramified_split: return "ramified_split";
        case CriterionCase::ramified_inert: return "ramified_inert";
    }
    return "?";
}

UniformizerSpec default_uniformizer(const HyperCurve<KElt>& C, const CurvePoint<KElt>& P0) {
    const KElt one = one_like(C.zero());
    if (P0.infinity) return UniformizerSpec::scaled(one, 2, 1);
    if (P0.y.is_zero()) return UniformizerSpec::scaled(one, 0, -1);
    return UniformizerSpec::xshift();
}

namespace {

// 0: zero mod P, 1: unit at P, -1: not integral at P.
int residue_status(const KElt& x, const PrimeOfK& P) {
    auto k = FqCtx::residue_field(x.field(), P);
    try {
        return reduce(x, P, k.get()).is_zero() ? 0 : 1;
    } catch (const NonIntegral&) {
        return -1;
    }
}

PrimeCheck reject(std::string cond, std::string why) {
    PrimeCheck r;
    r.ok = false;
    r.condition = std::move(cond);
    r.reason = std::move(why);
    return r;
}

KElt tau_scale(const ChabautyProblem& pb) {
    return pb.tau.kind == UniKind::XShift ? one_like(pb.C.zero()) : pb.tau.c;
}

template <class F>
struct LocalData {
    F alpha[2];
    PsiExpansion<F> psi;
};

template <class F>
LocalData<F> local_data(const ChabautyProblem& pb, const PrimeOfK& P) {
    const int N = pb.M + 6;
    HyperCurve<F> CF = embed_curve<F>(pb.C, P, N);
    CurvePoint<F> P0 = embed_point<F>(pb.P0, P, N);
    const F c = embed_as<F>(tau_scale(pb), P, N);
    LocalChart<F> ch = expand_chart(CF, P0, pb.tau, c, N);
    LocalData<F> out;
    out.psi = psi_expansion(ch);
    out.alpha[0] = alpha_of(1, ch);
    out.alpha[1] = alpha_of(2, ch);
    return out;
}

IntegralMatrix ensure_matrix(const ChabautyProblem& pb, const IntegralMatrix* A) {
    if (A) return *A;
    return integral_matrix(pb.C, pb.p, pb.gens, pb.M);
}

// Shared tail of every builder: scale, Hermite-reduce, E0 = last j rows of U w.
void reduce_and_project(CriterionBundle& b) {
    ScaledMatrix S = scale_to_integral(b.A);
    b.h = S.h;
    PadicHnf H = hnf_with_transform(S.B);
    b.U = H.U;
    b.Ap = H.Ap;
    b.j = H.j;
    PadicMatrix Uw = b.U * b.w;
    b.E0 = Uw.rows_range(Uw.rows() - b.j, b.j);
}

PadicMatrix row_of(const std::vector<PadicNum>& xs, const PadicCtx* c) {
    PadicMatrix r(1, int(xs.size()), c);
    for (std::size_t i = 0; i < xs.size(); ++i) r(0, int(i)) = rebase(xs[i], c);
    return r;
}

void finish_ramified(CriterionBundle& b, int d) {
    if (b.tails.empty()) {
        b.verdict = true;
        b.note = "no linear factors: the test set is empty";
        return;
    }
    b.verdict = true;
    for (const auto& t : b.tails) {
        PadicMatrix E = PadicMatrix::stack(b.E0, t);
        const int rk = rank_mod_p(E);
        b.calE.push_back(E);
        b.ranks.push_back(rk);
        if (rk != d) b.verdict = false;
    }
    if (b.j == 0) b.note = "j = 0: E0 is empty";
}

}  // namespace

PrimeCheck check_prime(const ChabautyProblem& pb) {
    const QuadField& K = pb.C.zero().field();
    const long p = pb.p;
    if (p < 3 || p % 2 == 0) return reject("(p1)", "p must be an odd prime");
    std::vector<PrimeOfK> Ps;
    try {
        Ps = splitting_type(K, p);
    } catch (const DomainError& e) {
        return reject("(p1)", e.what());
    }
    if (Ps.empty() || Ps[0].kind == PrimeKind::ramified) return reject("(p1)", "p ramifies in K");
    for (const auto& P : Ps)
        if (!has_good_reduction(pb.C, P)) return reject("(p2)", "bad reduction at " + P.str());

    PrimeCheck r;
    r.ok = true;
    const bool weier = !pb.P0.infinity && pb.P0.y.is_zero();
    r.e = (pb.P0.infinity || weier) ? 2 : 1;
    if (r.e == 1) {
        if (pb.tau.kind != UniKind::XShift) return reject("tau", "use x - x0 at a point where psi is unramified");
        for (const auto& P : Ps) {
            if (residue_status(pb.P0.x, P) < 0) return reject("(p3)", "P0 reduces to infinity at " + P.str());
            if (residue_status(pb.P0.y, P) != 1)
                return reject("(p3)", "red(P0) is a ramification point of the reduced map at " + P.str());
        }
        r.tag = CriterionCase::unramified;
        return r;
    }
    if (pb.tau.kind != UniKind::Scaled) return reject("tau", "a scaled uniformizer is required at a ramification point");
    for (const auto& P : Ps) {
        if (residue_status(pb.tau.c, P) != 1) return reject("tau", "uniformizer scale is not a unit at " + P.str());
        if (pb.P0.infinity) {
            if (residue_status(pb.C.f[5], P) != 1)
                return reject("(p3)ram", "leading coefficient is not a unit at " + P.str());
        } else {
            if (residue_status(pb.P0.x, P) < 0) return reject("(p3)ram", "P0 reduces to infinity at " + P.str());
            if (residue_status(pb.C.f.derivative().eval(pb.P0.x), P) != 1)
                return reject("(p3)ram", "reduced Weierstrass point is singular for x at " + P.str());
        }
    }
    if (Ps[0].kind == PrimeKind::split) {
        if (std::gcd(p, long(r.e)) != 1) return reject("(p1)split", "gcd(p, e) != 1");
        r.tag = CriterionCase::ramified_split;
    } else {
        r.tag = CriterionCase::ramified_inert;
    }
    return r;
}

CriterionBundle build_unramified(const ChabautyProblem& pb, const IntegralMatrix* Ain) {
    CriterionBundle b;
    b.tag = CriterionCase::unramified;
    b.e = 1;
    IntegralMatrix IM = ensure_matrix(pb, Ain);
    b.A = IM.A;
    const PadicCtx* c = b.A.ctx();
    b.w = PadicMatrix(b.A.rows(), 1, c);
    int row = 0;
    for (const auto& P : IM.primes) {
        if (P.kind == PrimeKind::split) {
            auto L = local_data<PadicNum>(pb, P);
            for (int f = 0; f < 2; ++f) b.w(row++, 0) = rebase(L.alpha[f], c);
        } else {
            auto L = local_data<PadicExtElt>(pb, P);
            for (int f = 0; f < 2; ++f) {
                b.w(row++, 0) = rebase(L.alpha[f].c0(), c);
                b.w(row++, 0) = rebase(L.alpha[f].c1(), c);
            }
        }
    }
    reduce_and_project(b);
    b.calE.push_back(b.E0);
    if (b.j == 0) {
        b.ranks.push_back(0);
        b.verdict = false;
        b.note = "j = 0: criterion inapplicable at this prime";
        return b;
    }
    const int rk = rank_mod_p(b.E0);
    b.ranks.push_back(rk);
    b.verdict = rk > 0;
    return b;
}

CriterionBundle build_ramified_split(const ChabautyProblem& pb, const IntegralMatrix* Ain) {
    CriterionBundle b;
    b.tag = CriterionCase::ramified_split;
    IntegralMatrix IM = ensure_matrix(pb, Ain);
    if (IM.primes.size() != 2) throw DomainError("split-ramified criterion needs two completions");
    b.A = IM.A;
    const PadicCtx* c = b.A.ctx();
    const int d = 2;
    b.w = PadicMatrix(b.A.rows(), d, c);
    std::vector<PadicNum> ups;
    for (int ci = 0; ci < d; ++ci) {
        auto L = local_data<PadicNum>(pb, IM.primes[ci]);
        b.e = L.psi.e;
        ups.push_back(L.psi.upsilon);
        for (int f = 0; f < 2; ++f) b.w(2 * ci + f, ci) = rebase(L.alpha[f], c);
    }
    reduce_and_project(b);
    for (const PadicNum& g : linear_factors_power(ups[0], ups[1], b.e, pb.M))
        b.tails.push_back(row_of({PadicNum::from_int(c, 1), -g}, c));
    finish_ramified(b, d);
    return b;
}

CriterionBundle build_ramified_inert(const ChabautyProblem& pb, const IntegralMatrix* Ain) {
    CriterionBundle b;
    b.tag = CriterionCase::ramified_inert;
    IntegralMatrix IM = ensure_matrix(pb, Ain);
    if (IM.primes.size() != 1 || IM.primes[0].kind != PrimeKind::inert)
        throw DomainError("inert-ramified criterion needs an inert prime");
    b.A = IM.A;
    const PadicCtx* c = b.A.ctx();
    const QuadField& K = pb.C.zero().field();
    auto L = local_data<PadicExtElt>(pb, IM.primes[0]);
    b.e = L.psi.e;
    // alpha * (t1 + t2 theta) in coordinates over {1, theta}
    b.w = PadicMatrix(4, 2, c);
    for (int f = 0; f < 2; ++f) {
        const PadicNum a0 = rebase(L.alpha[f].c0(), c), a1 = rebase(L.alpha[f].c1(), c);
        b.w(2 * f, 0) = a0;
        b.w(2 * f, 1) = -a1.scale(K.v);
        b.w(2 * f + 1, 0) = a1;
        b.w(2 * f + 1, 1) = a0 - a1.scale(K.u);
    }
    reduce_and_project(b);
    // W2: theta-coordinate of upsilon * (T1 + T2 theta)^e, coefficient of T1^(e-i) T2^i
    const PadicExtElt& ups = L.psi.upsilon;
    std::vector<PadicNum> W2;
    PadicExtElt th = PadicExtElt::inert(K.u, K.v, PadicNum::zero(ups.ctx()), PadicNum::from_int(ups.ctx(), 1));
    PadicExtElt pw = one_like(ups);
    mpz_class binom = 1;
    for (int i = 0; i <= b.e; ++i) {
        PadicExtElt term = ups * pw * ups.from_base(PadicNum::from_int(ups.ctx(), binom));
        W2.push_back(rebase(term.c1(), c));
        pw = pw * th;
        binom = binom * (b.e - i) / (i + 1);
    }
    for (const auto& [g1, g2] : factor_binary_form(W2, pb.M)) b.tails.push_back(row_of({g1, -g2}, c));
    finish_ramified(b, 2);
    return b;
}

CriterionBundle build_bundle(const ChabautyProblem& pb, const IntegralMatrix* A) {
    PrimeCheck chk = check_prime(pb);
    if (!chk.ok) throw DomainError(chk.condition + ": " + chk.reason);
    switch (chk.tag) {
        case CriterionCase::unramified: return build_unramified(pb, A);
        case CriterionCase::ramified_split: return build_ramified_split(pb, A);
        case CriterionCase::ramified_inert: return build_ramified_inert(pb, A);
    }
    throw DomainError("unknown criterion case");
}

bool ChabautyReport::all_true() const {
    if (points.empty()) return false;
    for (const auto& v : points)
        if (!v.verdict) return false;
    return true;
}

ChabautyReport chabauty_report(const HyperCurve<KElt>& C, const std::vector<MumfordDiv<KElt>>& gens, long N, long p,
                               const std::vector<KnownPoint>& points, int M, int jobs) {
    ChabautyReport R;
    R.p = p;
    R.M = M;
    std::vector<ChabautyProblem> pbs;
    for (const auto& kp : points) {
        ChabautyProblem pb{C, gens, N, p, kp.P, kp.tau ? *kp.tau : default_uniformizer(C, kp.P), M};
        pbs.push_back(pb);
        PointVerdict v;
        v.P0 = kp.P;
        v.tau = pb.tau;
        v.check = check_prime(pb);
        if (!v.check.ok) {
            v.error_kind = "rejected";
            v.error = v.check.condition + ": " + v.check.reason;
        }
        R.points.push_back(std::move(v));
    }
    bool need = false;
    for (const auto& v : R.points) need = need || v.check.ok;
    if (!need) return R;
    try {
        R.A = integral_matrix(C, p, gens, M);
        R.primes = R.A->primes;
    } catch (const PrecisionLoss& e) {
        for (auto& v : R.points)
            if (v.check.ok) {
                v.error_kind = "precision";
                v.error = e.what();
            }
        return R;
    }
    const int n = int(R.points.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs > 0 ? jobs : 1) if (jobs > 1)
    for (int i = 0; i < n; ++i) {
        PointVerdict& v = R.points[i];
        if (!v.check.ok) continue;
        try {
            CriterionBundle b;
            switch (v.check.tag) {
                case CriterionCase::unramified: b = build_unramified(pbs[i], &*R.A); break;
                case CriterionCase::ramified_split: b = build_ramified_split(pbs[i], &*R.A); break;
                case CriterionCase::ramified_inert: b = build_ramified_inert(pbs[i], &*R.A); break;
            }
            v.verdict = b.verdict;
            v.bundle = std::move(b);
        } catch (const DiscriminantNotUnit& e) {
            v.error_kind = "rejected";
            v.error = e.what();
        } catch (const PrecisionLoss& e) {
            v.error_kind = "precision";
            v.error = e.what();
        } catch (const Error& e) {
            v.error_kind = "error";
            v.error = e.what();
        }
    }
    return R;
}

}  // namespace chab
