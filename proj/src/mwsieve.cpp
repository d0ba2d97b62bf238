#include "chab/mwsieve.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>

namespace chab {

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const { return boost::hash_range(v.begin(), v.end()); }
};

bool same_point(const FqPoint& a, const FqPoint& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
}

std::vector<PrimeOfK> unramified_primes(const QuadField& F, long p) {
    if (p < 3 || p % 2 == 0) throw DomainError("sieving primes must be odd");
    auto P = splitting_type(F, p);
    if (P.front().kind == PrimeKind::ramified) throw DomainError("p ramifies in K");
    return P;
}

// Classes from the reduced curves, one curve per prime above p.
std::vector<ResidueClass> classes_from(long p, const std::vector<FqCurve>& curves) {
    std::vector<ResidueClass> out;
    ResidueClass inf;
    inf.p = p;
    inf.pts.assign(curves.size(), FqPoint::at_infinity());
    out.push_back(inf);
    for (std::uint32_t x = 0; x < std::uint32_t(p); ++x) {
        std::vector<std::vector<FqPoint>> fibers;
        for (const auto& C : curves) {
            Fq xx(C.zero().k, x, 0), y;
            std::vector<FqPoint> fib;
            if (fq_sqrt(C.f.eval(xx), y)) {
                fib.push_back(FqPoint::affine(xx, y));
                if (!y.is_zero()) fib.push_back(FqPoint::affine(xx, -y));
            }
            fibers.push_back(std::move(fib));
        }
        // Cartesian product of the fibers.
        std::vector<std::vector<FqPoint>> combos{{}};
        for (const auto& fib : fibers) {
            std::vector<std::vector<FqPoint>> next;
            for (const auto& c : combos)
                for (const auto& P : fib) {
                    next.push_back(c);
                    next.back().push_back(P);
                }
            combos = std::move(next);
        }
        for (auto& c : combos) {
            ResidueClass rc;
            rc.p = p;
            rc.x = x;
            rc.pts = std::move(c);
            out.push_back(std::move(rc));
        }
    }
    return out;
}

FqDiv point_div(const FqCurve& C, const FqPoint& P) { return point_divisor(C, P); }

// Reduce a divisor; when its support meets the disk at infinity the Mumford
// coefficients are not integral, so shift by an auxiliary divisor first.
FqDiv reduce_with_fallback(const HyperCurve<KElt>& C, const MumfordDiv<KElt>& D, const std::vector<MumfordDiv<KElt>>& aux,
                           const PrimeOfK& P, const FqCurve& Cbar) {
    try {
        return reduce_divisor(D, P, Cbar);
    } catch (const NonIntegral&) {
    }
    for (const auto& E0 : aux) {
        for (int s = 0; s < 2; ++s) {
            MumfordDiv<KElt> E = s ? negate(E0) : E0;
            try {
                FqDiv a = reduce_divisor(cantor_add(C, D, E), P, Cbar);
                FqDiv b = reduce_divisor(E, P, Cbar);
                return cantor_sub(Cbar, a, b);
            } catch (const NonIntegral&) {
            }
        }
    }
    throw NonIntegral("cannot reduce divisor " + D.str() + " at " + P.str());
}

std::vector<std::uint64_t> mod_vector(const std::vector<mpz_class>& v, const std::vector<std::uint64_t>& m) {
    std::vector<std::uint64_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        mpz_class r = v[i] % (unsigned long)m[i];
        if (r < 0) r += (unsigned long)m[i];
        out[i] = r.get_ui();
    }
    return out;
}

}  // namespace

bool ResidueClass::same(const ResidueClass& o) const {
    if (p != o.p || x != o.x || pts.size() != o.pts.size()) return false;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!same_point(pts[i], o.pts[i])) return false;
    return true;
}

std::string ResidueClass::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) os << ", ";
        if (pts[i].infinity)
            os << "inf";
        else
            os << "(" << pts[i].x.str() << ", " << pts[i].y.str() << ")";
    }
    os << "]";
    return os.str();
}

std::vector<ResidueClass> compute_G(const HyperCurve<KElt>& C, long p) {
    const QuadField& F = C.zero().field();
    std::vector<std::shared_ptr<const FqCtx>> ks;
    std::vector<FqCurve> curves;
    for (const auto& P : unramified_primes(F, p)) {
        ks.push_back(FqCtx::residue_field(F, P));
        curves.push_back(reduce_curve(C, P, ks.back().get()));
    }
    return classes_from(p, curves);
}

ResidueClass reduce_point(const HyperCurve<KElt>& C, const CurvePoint<KElt>& Q, long p) {
    const QuadField& F = C.zero().field();
    ResidueClass rc;
    rc.p = p;
    bool all_inf = true;
    std::optional<std::uint32_t> xs;
    bool x_in_fp = true;
    for (const auto& P : unramified_primes(F, p)) {
        auto k = FqCtx::residue_field(F, P);
        FqPoint R = FqPoint::at_infinity();
        if (!Q.infinity) {
            try {
                Fq x = reduce(Q.x, P, k.get());
                Fq y = reduce(Q.y, P, k.get());
                R = FqPoint::affine(x, y);
            } catch (const NonIntegral&) {
            }
        }
        if (!R.infinity) {
            all_inf = false;
            if (R.x.b != 0) x_in_fp = false;
            else if (xs && *xs != R.x.a) x_in_fp = false;
            else xs = R.x.a;
        }
        rc.pts.push_back(R);
    }
    if (!all_inf && x_in_fp) rc.x = xs;
    if (!all_inf && !x_in_fp) rc.x = std::uint32_t(p);  // never matches a class of G
    return rc;
}

ConditionCheck check_conditions(const HyperCurve<KElt>& C, const std::vector<MumfordDiv<KElt>>&, long N, long p) {
    ConditionCheck r;
    r.p = p;
    const QuadField& F = C.zero().field();
    if (p < 3 || p % 2 == 0) {
        r.reasons.push_back("(i) p must be an odd prime");
        return r;
    }
    auto primes = splitting_type(F, p);
    r.unramified = primes.front().kind != PrimeKind::ramified;
    if (!r.unramified) {
        r.reasons.push_back("(i) p ramifies in K");
        return r;
    }
    std::vector<FqCurve> curves;
    std::vector<std::shared_ptr<const FqCtx>> ks;
    r.good_reduction = true;
    for (const auto& P : primes) {
        ks.push_back(FqCtx::residue_field(F, P));
        try {
            curves.push_back(reduce_curve(C, P, ks.back().get()));
        } catch (const Error&) {
            r.good_reduction = false;
            r.reasons.push_back("(ii) bad reduction at " + P.str());
        }
    }
    if (!r.good_reduction) return r;
    r.group_order = 1;
    for (const auto& Cb : curves) r.group_order *= jacobian_order(Cb);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.group_order.get_mpz_t(), mpz_class(N).get_mpz_t());
    r.coprime_index = g == 1;
    if (!r.coprime_index) r.reasons.push_back("(iii) group order " + r.group_order.get_str() + " shares a factor with N");
    return r;
}

// ---------------------------------------------------------------------------

struct PrimeTables::Impl {
    std::vector<std::shared_ptr<const FqCtx>> fields;
    std::vector<FqCurve> curves;
    std::vector<JacobianGroup> groups;
    std::vector<std::size_t> offsets;  // start of each prime's coordinates
    std::unordered_set<std::vector<std::uint64_t>, VecHash> image_set;
};

PrimeTables::PrimeTables(const HyperCurve<KElt>& C, const std::vector<MumfordDiv<KElt>>& gens, long p, bool parallel,
                         std::uint64_t seed)
    : p_(p), impl_(std::make_unique<Impl>()) {
    const QuadField& F = C.zero().field();
    primes_ = unramified_primes(F, p);
    for (const auto& P : primes_) {
        impl_->fields.push_back(FqCtx::residue_field(F, P));
        impl_->curves.push_back(reduce_curve(C, P, impl_->fields.back().get()));
    }
    for (const auto& Cb : impl_->curves) {
        impl_->groups.push_back(JacobianGroup::of_curve(Cb, seed));
        const auto& S = impl_->groups.back().structure();
        impl_->offsets.push_back(moduli_.size());
        orders_.push_back(mpz_class((unsigned long)S.order));
        for (auto d : S.orders) moduli_.push_back(d);
    }
    classes_ = classes_from(p, impl_->curves);

    const int k = int(moduli_.size()), r = int(gens.size());
    gen_images_ = IntMatrix(k, r);
    for (std::size_t t = 0; t < primes_.size(); ++t) {
        const auto& G = impl_->groups[t];
        for (int g = 0; g < r; ++g) {
            FqDiv D = reduce_with_fallback(C, gens[g], gens, primes_[t], impl_->curves[t]);
            auto c = G.dlog(D);
            for (std::size_t i = 0; i < c.size(); ++i)
                gen_images_(int(impl_->offsets[t] + i), g) = (unsigned long)c[i];
        }
    }

    images_.assign(classes_.size(), std::vector<std::uint64_t>(moduli_.size(), 0));
    for (std::size_t t = 0; t < primes_.size(); ++t) {
        std::vector<FqDiv> divs;
        divs.reserve(classes_.size());
        for (const auto& c : classes_) divs.push_back(point_div(impl_->curves[t], c.pts[t]));
        const auto& G = impl_->groups[t];
        auto logs = parallel ? G.dlog_batch(divs) : G.dlog_batch_serial(divs);
        for (std::size_t c = 0; c < classes_.size(); ++c)
            std::copy(logs[c].begin(), logs[c].end(), images_[c].begin() + long(impl_->offsets[t]));
    }
    impl_->image_set.insert(images_.begin(), images_.end());
}

PrimeTables::~PrimeTables() = default;
PrimeTables::PrimeTables(PrimeTables&&) noexcept = default;
PrimeTables& PrimeTables::operator=(PrimeTables&&) noexcept = default;

bool PrimeTables::contains_image(const std::vector<std::uint64_t>& v) const { return impl_->image_set.count(v) > 0; }

std::vector<std::uint64_t> PrimeTables::image_of_class(const ResidueClass& c) const {
    for (std::size_t i = 0; i < classes_.size(); ++i)
        if (classes_[i].same(c)) return images_[i];
    throw NotInGroup("class " + c.str() + " is not a residue class at " + std::to_string(p_));
}

std::vector<std::uint64_t> PrimeTables::reduce_vector(const std::vector<mpz_class>& a) const {
    const int k = int(moduli_.size());
    std::vector<mpz_class> acc(std::size_t(k), 0);
    for (int i = 0; i < k; ++i)
        for (int g = 0; g < gen_images_.cols(); ++g) acc[i] += gen_images_(i, g) * a[g];
    return mod_vector(acc, moduli_);
}

// ---------------------------------------------------------------------------

ModSolver::ModSolver(const IntMatrix& M, const std::vector<std::uint64_t>& moduli)
    : r_(M.rows()), k_(M.cols()) {
    IntMatrix A(r_ + k_, k_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < k_; ++j) A(i, j) = M(i, j) % (unsigned long)moduli[j];
    for (int j = 0; j < k_; ++j) A(r_ + j, j) = (unsigned long)moduli[j];
    SnfResult s = smith(A);
    P_ = std::move(s.P);
    Q_ = std::move(s.Q);
    D_ = std::move(s.D);
}

std::optional<std::vector<mpz_class>> ModSolver::solve(const std::vector<std::uint64_t>& t) const {
    // x A = t with A = P^-1 D Q^-1, so y = x P^-1 satisfies y D = t Q.
    const int n = r_ + k_;
    std::vector<mpz_class> y(std::size_t(n), 0);
    for (int j = 0; j < k_; ++j) {
        mpz_class tq = 0;
        for (int i = 0; i < k_; ++i) tq += mpz_class((unsigned long)t[i]) * Q_(i, j);
        const mpz_class& d = D_(j, j);
        if (d == 0) {
            if (tq != 0) return std::nullopt;
            continue;
        }
        if (!mpz_divisible_p(tq.get_mpz_t(), d.get_mpz_t())) return std::nullopt;
        y[j] = tq / d;
    }
    std::vector<mpz_class> x(std::size_t(r_), 0);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < n; ++j)
            if (y[j] != 0) x[i] += y[j] * P_(j, i);
    return x;
}

std::optional<std::vector<mpz_class>> solve_mod(const IntMatrix& M, const std::vector<std::uint64_t>& moduli,
                                                const std::vector<std::uint64_t>& t) {
    return ModSolver(M, moduli).solve(t);
}

// ---------------------------------------------------------------------------

SieveContext build_context(const SieveInput& in, const SieveOptions& opt) {
    if (in.primes.empty()) throw DomainError("the sieve needs at least one prime");
    const int r = int(in.gens.size());
    if (r == 0) throw DomainError("the sieve needs at least one generator");
    SieveContext ctx;
    IntMatrix prev = IntMatrix::identity(r);
    for (long p : in.primes) {
        ctx.tables.emplace_back(in.C, in.gens, p, opt.parallel, opt.seed);
        const PrimeTables& T = ctx.tables.back();
        const int k = int(T.moduli().size());
        // Images of the rows of L_{i-1}.
        IntMatrix BI(r, k);
        for (int a = 0; a < r; ++a) {
            auto v = T.reduce_vector(prev.row(a));
            for (int j = 0; j < k; ++j) BI(a, j) = (unsigned long)v[j];
        }
        std::vector<mpz_class> mods;
        for (auto d : T.moduli()) mods.emplace_back((unsigned long)d);
        IntMatrix S = kernel_lattice(BI.transpose(), mods);
        IntMatrix Li = hnf(S * prev).H.block(0, 0, r, r);
        ctx.basis_images.push_back(BI);
        ctx.solvers.emplace_back(BI, T.moduli());
        ctx.steps.push_back(std::move(S));
        ctx.L.push_back(std::move(Li));
        prev = ctx.L.back();
    }
    return ctx;
}

std::vector<std::vector<mpz_class>> initial_cosets(const SieveContext& ctx, const ResidueClass& cls) {
    const PrimeTables& T = ctx.tables.front();
    auto sol = ctx.solvers.front().solve(T.image_of_class(cls));
    if (!sol) return {};
    return {reduce_mod_hnf(ctx.L.front(), *sol)};
}

namespace {

mpz_class diag_product(const IntMatrix& S) {
    mpz_class n = 1;
    for (int i = 0; i < S.rows(); ++i) n *= S(i, i);
    return n;
}

std::vector<mpz_class> combine(const std::vector<mpz_class>& w, const std::vector<mpz_class>& c, const IntMatrix& B) {
    std::vector<mpz_class> out = w;
    for (int a = 0; a < B.rows(); ++a) {
        if (c[a] == 0) continue;
        for (int j = 0; j < B.cols(); ++j) out[j] += c[a] * B(a, j);
    }
    return out;
}

}  // namespace

ClassOutcome sieve_class(const SieveContext& ctx, const ResidueClass& cls, const SieveOptions& opt) {
    ClassOutcome out;
    out.cls = cls;
    std::vector<std::vector<mpz_class>> W = initial_cosets(ctx, cls);
    out.w_sizes.push_back(W.size());
    for (std::size_t i = 1; i < ctx.tables.size() && !W.empty(); ++i) {
        const PrimeTables& T = ctx.tables[i];
        const IntMatrix& B = ctx.L[i - 1];
        const IntMatrix& S = ctx.steps[i];
        const IntMatrix& BI = ctx.basis_images[i];
        const auto& mod = T.moduli();
        const int r = B.rows(), k = int(mod.size());
        const mpz_class index = diag_product(S);
        bool use_cosets = opt.strategy == RefineStrategy::cosets ||
                          (opt.strategy == RefineStrategy::automatic && index <= mpz_class((unsigned long)T.images().size()));

        std::set<std::vector<mpz_class>> next;
        for (const auto& w : W) {
            const std::vector<std::uint64_t> rw = T.reduce_vector(w);
            if (use_cosets) {
                // Odometer over 0 <= a_j < S(j,j); S is upper triangular so these
                // vectors are a full set of representatives of Z^r / S Z^r.
                std::vector<mpz_class> a(std::size_t(r), 0);
                std::vector<std::uint64_t> val = rw;
                for (;;) {
                    if (T.contains_image(val)) {
                        std::vector<mpz_class> c(std::size_t(r), 0);
                        for (int j = 0; j < r; ++j) c[j] = a[j];
                        next.insert(reduce_mod_hnf(ctx.L[i], combine(w, c, B)));
                        if (next.size() > opt.coset_cap) break;
                    }
                    int j = r - 1;
                    for (; j >= 0; --j) {
                        a[j] += 1;
                        for (int t = 0; t < k; ++t) {
                            mpz_class s = mpz_class((unsigned long)val[t]) + BI(j, t);
                            val[t] = mpz_class(s % (unsigned long)mod[t]).get_ui();
                        }
                        if (a[j] < S(j, j)) break;
                        // wrap a_j back to zero
                        for (int t = 0; t < k; ++t) {
                            mpz_class s = (mpz_class((unsigned long)val[t]) - a[j] * BI(j, t)) % (unsigned long)mod[t];
                            if (s < 0) s += (unsigned long)mod[t];
                            val[t] = s.get_ui();
                        }
                        a[j] = 0;
                    }
                    if (j < 0) break;
                }
            } else {
                for (const auto& g : T.images()) {
                    std::vector<std::uint64_t> diff(static_cast<std::size_t>(k));
                    for (int t = 0; t < k; ++t) diff[t] = (g[t] + mod[t] - rw[t]) % mod[t];
                    auto c = ctx.solvers[i].solve(diff);
                    if (!c) continue;
                    next.insert(reduce_mod_hnf(ctx.L[i], combine(w, *c, B)));
                    if (next.size() > opt.coset_cap) break;
                }
            }
            if (next.size() > opt.coset_cap) break;
        }
        if (next.size() > opt.coset_cap) {
            out.blowup = true;
            out.w_sizes.push_back(next.size());
            return out;
        }
        W.assign(next.begin(), next.end());
        out.w_sizes.push_back(W.size());
    }
    out.eliminated = W.empty();
    return out;
}

SieveReport sieve(const SieveInput& in, const SieveOptions& opt) {
    SieveReport rep;
    rep.p0 = in.primes.empty() ? 0 : in.primes.front();
    rep.N = in.N;
    SieveContext ctx = build_context(in, opt);
    for (std::size_t i = 0; i < ctx.tables.size(); ++i) {
        const PrimeTables& T = ctx.tables[i];
        ConditionCheck cc;
        cc.p = T.p();
        cc.unramified = cc.good_reduction = true;
        cc.group_order = 1;
        for (const auto& o : T.orders()) cc.group_order *= o;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), cc.group_order.get_mpz_t(), mpz_class(in.N).get_mpz_t());
        cc.coprime_index = g == 1;
        if (!cc.coprime_index)
            cc.reasons.push_back("(iii) group order " + cc.group_order.get_str() + " shares a factor with N");
        rep.conditions.push_back(cc);

        SieveStage st;
        st.p = T.p();
        st.orders = T.orders();
        st.moduli = T.moduli();
        st.num_classes = T.classes().size();
        st.index = diag_product(ctx.steps[i]);
        st.L = ctx.L[i];
        rep.stages.push_back(std::move(st));
    }
    for (const auto& cc : rep.conditions)
        if (!cc.ok()) throw DomainError("sieve condition fails at p = " + std::to_string(cc.p) + ": " + cc.reasons.front());

    const std::vector<ResidueClass>& targets = in.targets ? *in.targets : ctx.tables.front().classes();
    std::vector<ResidueClass> known;
    for (const auto& P : in.known) known.push_back(reduce_point(in.C, P, rep.p0));

    rep.classes.resize(targets.size());
    const std::int64_t n = std::int64_t(targets.size());
    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) rep.classes[i] = sieve_class(ctx, targets[i], opt);
    } else {
        for (std::int64_t i = 0; i < n; ++i) rep.classes[i] = sieve_class(ctx, targets[i], opt);
    }
    for (auto& c : rep.classes)
        c.known = std::any_of(known.begin(), known.end(), [&](const ResidueClass& k) { return k.same(c.cls); });
    return rep;
}

bool SieveReport::success() const {
    for (const auto& c : classes) {
        if (c.known && c.eliminated) return false;
        if (!c.known && !c.eliminated) return false;
    }
    return true;
}

std::size_t SieveReport::survivors_outside_known() const {
    return std::size_t(std::count_if(classes.begin(), classes.end(), [](const ClassOutcome& c) { return !c.known && !c.eliminated; }));
}

}  // namespace chab
