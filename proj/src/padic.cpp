#include "chab/padic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "chab/arith.hpp"
#include "chab/hyperell.hpp"

namespace chab {

// ---------------------------------------------------------------------------
// Context

PadicCtx::PadicCtx(long p, int M) : p_(p), M_(M), pz_(p) {
    const int n = 8 * M + 96;
    pow_.reserve(n);
    mpz_class x = 1;
    for (int i = 0; i < n; ++i) {
        pow_.push_back(x);
        x *= p;
    }
}

const PadicCtx* PadicCtx::get(long p, int M) {
    if (p < 3 || M < 1) throw DomainError("p-adic context needs an odd prime and positive precision");
    static std::mutex mu;
    static std::map<std::pair<long, int>, std::unique_ptr<PadicCtx>> reg;
    std::lock_guard lk(mu);
    auto& slot = reg[{p, M}];
    if (!slot) slot.reset(new PadicCtx(p, M));
    return slot.get();
}

const mpz_class& PadicCtx::pow(int k) const {
    if (k < 0 || k >= int(pow_.size())) throw PrecisionLoss("p-adic precision beyond the context bound");
    return pow_[k];
}

// ---------------------------------------------------------------------------
// PadicNum

namespace {

int strip_p(mpz_class& a, const mpz_class& p) {
    int e = 0;
    while (a != 0 && mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
        ++e;
    }
    return e;
}

void mod_into(mpz_class& a, const mpz_class& m) { mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()); }

}  // namespace

void PadicNum::normalize() {
    exact_ = false;
    if (rel_ <= 0) {
        val_ += std::max(rel_, 0);
        rel_ = 0;
        unit_ = 0;
        return;
    }
    mod_into(unit_, ctx_->pow(rel_));
    if (unit_ == 0) {
        val_ += rel_;
        rel_ = 0;
        return;
    }
    int e = strip_p(unit_, ctx_->pz());
    val_ += e;
    rel_ -= e;
    if (rel_ <= 0) {
        rel_ = 0;
        unit_ = 0;
    }
}

PadicNum PadicNum::approx_zero(const PadicCtx* c, long absprec) {
    PadicNum r(c);
    r.exact_ = false;
    r.val_ = absprec;
    r.rel_ = 0;
    r.unit_ = 0;
    return r;
}

PadicNum PadicNum::make(const PadicCtx* c, long val, const mpz_class& unit, int rel) {
    PadicNum r(c);
    r.val_ = val;
    r.unit_ = unit;
    r.rel_ = rel;
    r.normalize();
    return r;
}

PadicNum PadicNum::from_int(const PadicCtx* c, const mpz_class& n, int rel) {
    if (n == 0) return PadicNum(c);
    if (rel < 0) rel = c->cap();
    mpz_class u = n;
    int v = strip_p(u, c->pz());
    return make(c, v, u, rel);
}

PadicNum PadicNum::from_rational(const PadicCtx* c, const mpq_class& x, int rel) {
    if (x == 0) return PadicNum(c);
    if (rel < 0) rel = c->cap();
    mpz_class num = x.get_num(), den = x.get_den();
    int v = strip_p(num, c->pz()) - strip_p(den, c->pz());
    const mpz_class& m = c->pow(rel);
    mpz_class inv;
    mpz_class dm = den % m;
    if (!mpz_invert(inv.get_mpz_t(), dm.get_mpz_t(), m.get_mpz_t())) throw DomainError("denominator not invertible");
    return make(c, v, num * inv, rel);
}

long PadicNum::checked_valuation() const {
    if (!exact_ && rel_ == 0) throw PrecisionLoss("valuation of a value indistinguishable from zero");
    return valuation();
}

PadicNum PadicNum::operator+(const PadicNum& o) const {
    if (exact_) return o;
    if (o.exact_) return *this;
    const long abs = std::min(abs_prec(), o.abs_prec());
    const long vmin = std::min(val_, o.val_);
    if (abs <= vmin) return approx_zero(ctx_, abs);
    const int rel = int(abs - vmin);
    mpz_class s = 0;
    if (rel_ > 0) s += unit_ * ctx_->pow(int(val_ - vmin));
    if (o.rel_ > 0) s += o.unit_ * ctx_->pow(int(o.val_ - vmin));
    return make(ctx_, vmin, s, rel);
}

PadicNum PadicNum::operator-() const {
    if (exact_ || rel_ == 0) return *this;
    PadicNum r = *this;
    r.unit_ = ctx_->pow(rel_) - unit_;
    return r;
}

PadicNum PadicNum::operator-(const PadicNum& o) const { return *this + (-o); }

PadicNum PadicNum::operator*(const PadicNum& o) const {
    if (exact_) return *this;
    if (o.exact_) return o;
    if (rel_ == 0 || o.rel_ == 0) return approx_zero(ctx_, val_ + o.val_);
    return make(ctx_, val_ + o.val_, unit_ * o.unit_, std::min(rel_, o.rel_));
}

PadicNum PadicNum::scale(long n) const {
    if (n == 0) return PadicNum(ctx_);
    if (exact_) return *this;
    mpz_class u = n;
    int v = strip_p(u, ctx_->pz());
    if (rel_ == 0) return approx_zero(ctx_, val_ + v);
    return make(ctx_, val_ + v, unit_ * u, rel_);
}

PadicNum PadicNum::inverse() const {
    if (exact_) throw DomainError("p-adic division by exact zero");
    if (rel_ == 0) throw PrecisionLoss("p-adic division by a value indistinguishable from zero");
    mpz_class inv;
    const mpz_class& m = ctx_->pow(rel_);
    mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t());
    return make(ctx_, -val_, inv, rel_);
}

PadicNum PadicNum::operator/(const PadicNum& o) const {
    if (o.exact_) throw DomainError("p-adic division by exact zero");
    if (o.rel_ == 0) throw PrecisionLoss("p-adic division by a value indistinguishable from zero");
    if (exact_) return *this;
    if (rel_ == 0) return approx_zero(ctx_, val_ - o.val_);
    return *this * o.inverse();
}

PadicNum PadicNum::shift(long k) const {
    if (exact_) return *this;
    PadicNum r = *this;
    r.val_ += k;
    return r;
}

PadicNum PadicNum::cap_abs(long absprec) const {
    if (exact_) return approx_zero(ctx_, absprec);
    if (abs_prec() <= absprec) return *this;
    if (absprec <= val_) return approx_zero(ctx_, absprec);
    return make(ctx_, val_, unit_, int(absprec - val_));
}

PadicNum PadicNum::with_rel(int rel) const {
    if (exact_ || rel_ == 0 || rel <= rel_) return *this;
    return make(ctx_, val_, unit_, rel);
}

mpz_class PadicNum::mod_pk(int k) const {
    if (k <= 0 || exact_) return 0;
    if (abs_prec() < k) throw PrecisionLoss("value not known modulo p^" + std::to_string(k));
    if (rel_ == 0) return 0;
    if (val_ < 0) throw NonIntegral("reduction of a non-integral p-adic number");
    if (val_ >= k) return 0;
    mpz_class r = unit_ * ctx_->pow(int(val_));
    mod_into(r, ctx_->pow(k));
    return r;
}

mpz_class PadicNum::centered(int k) const {
    mpz_class r = mod_pk(k);
    const mpz_class& m = ctx_->pow(k);
    if (2 * r > m) r -= m;
    return r;
}

mpq_class PadicNum::lift() const {
    if (exact_ || rel_ == 0) return 0;
    if (val_ >= 0) return mpq_class(unit_ * ctx_->pow(int(val_)));
    mpq_class r(unit_, ctx_->pow(int(-val_)));
    r.canonicalize();
    return r;
}

bool PadicNum::same(const PadicNum& o) const {
    if (exact_ || o.exact_) return exact_ == o.exact_;
    return val_ == o.val_ && rel_ == o.rel_ && unit_ == o.unit_;
}

bool PadicNum::equal_mod(const PadicNum& o, long k) const {
    PadicNum d = *this - o;
    if (d.exact_) return true;
    if (d.rel_ > 0 && d.val_ < k) return false;
    if (d.abs_prec() < k) throw PrecisionLoss("comparison beyond known precision");
    return true;
}

std::string PadicNum::str() const {
    if (!ctx_) return "0";
    std::ostringstream os;
    if (exact_) return "0";
    const long a = abs_prec();
    if (rel_ == 0) {
        os << "O(" << p() << "^" << a << ")";
    } else if (val_ >= 0) {
        os << centered(int(a)) << " + O(" << p() << "^" << a << ")";
    } else {
        os << unit_ << "*" << p() << "^" << val_ << " + O(" << p() << "^" << a << ")";
    }
    return os.str();
}

bool is_negligible(const PadicNum& x) {
    if (x.is_exact_zero()) return true;
    if (!x.is_indistinguishable_from_zero()) return false;
    if (2 * x.abs_prec() >= x.ctx()->cap()) return true;
    throw PrecisionLoss("cannot decide whether a p-adic number is zero at this precision");
}

bool is_zero(const PadicNum& x) {
    if (x.is_exact_zero()) return true;
    if (x.is_indistinguishable_from_zero())
        throw PrecisionLoss("cannot decide whether a p-adic number is zero at this precision");
    return false;
}

// ---------------------------------------------------------------------------
// PadicExtElt

PadicExtElt::PadicExtElt(ExtMode mode, long u, long v, PadicNum c0, PadicNum c1)
    : mode_(mode), u_(u), v_(v), c0_(std::move(c0)), c1_(std::move(c1)) {}

PadicExtElt PadicExtElt::operator+(const PadicExtElt& o) const { return {mode_, u_, v_, c0_ + o.c0_, c1_ + o.c1_}; }
PadicExtElt PadicExtElt::operator-(const PadicExtElt& o) const { return {mode_, u_, v_, c0_ - o.c0_, c1_ - o.c1_}; }
PadicExtElt PadicExtElt::operator-() const { return {mode_, u_, v_, -c0_, -c1_}; }

PadicExtElt PadicExtElt::operator*(const PadicExtElt& o) const {
    if (mode_ == ExtMode::split) return {mode_, u_, v_, c0_ * o.c0_, c1_ * o.c1_};
    // theta^2 = -u theta - v
    PadicNum hh = c1_ * o.c1_;
    return {mode_, u_, v_, c0_ * o.c0_ - hh.scale(v_), c0_ * o.c1_ + c1_ * o.c0_ - hh.scale(u_)};
}

PadicExtElt PadicExtElt::conj() const {
    if (mode_ == ExtMode::split) return {mode_, u_, v_, c1_, c0_};
    return {mode_, u_, v_, c0_ - c1_.scale(u_), -c1_};
}

PadicNum PadicExtElt::norm() const {
    if (mode_ == ExtMode::split) return c0_ * c1_;
    return c0_ * c0_ - (c0_ * c1_).scale(u_) + (c1_ * c1_).scale(v_);
}

PadicNum PadicExtElt::trace() const {
    if (mode_ == ExtMode::split) return c0_ + c1_;
    return c0_.scale(2) - c1_.scale(u_);
}

PadicExtElt PadicExtElt::inverse() const {
    if (mode_ == ExtMode::split) return {mode_, u_, v_, c0_.inverse(), c1_.inverse()};
    PadicNum n = norm();
    PadicNum ni = n.inverse();
    PadicExtElt c = conj();
    return {mode_, u_, v_, c.c0_ * ni, c.c1_ * ni};
}

PadicExtElt PadicExtElt::operator/(const PadicExtElt& o) const { return *this * o.inverse(); }

long PadicExtElt::valuation() const { return std::min(c0_.valuation(), c1_.valuation()); }

PadicExtElt PadicExtElt::cap_abs(long absprec) const {
    return {mode_, u_, v_, c0_.cap_abs(absprec), c1_.cap_abs(absprec)};
}

PadicExtElt PadicExtElt::scalar(long n) const { return {mode_, u_, v_, c0_.scale(n), c1_.scale(n)}; }

PadicExtElt PadicExtElt::from_base(const PadicNum& a) const {
    if (mode_ == ExtMode::split) return {mode_, u_, v_, a, a};
    return {mode_, u_, v_, a, PadicNum::zero(a.ctx())};
}

Fq PadicExtElt::residue(const FqCtx* k) const {
    if (mode_ != ExtMode::inert) throw DomainError("residue of a split-mode element");
    return Fq(k, std::uint32_t(c0_.residue()), std::uint32_t(c1_.residue()));
}

std::string PadicExtElt::str() const {
    if (mode_ == ExtMode::split) return "(" + c0_.str() + " | " + c1_.str() + ")";
    return "(" + c0_.str() + ") + (" + c1_.str() + ")*t";
}

bool is_zero(const PadicExtElt& x) {
    if (x.is_exact_zero()) return true;
    auto known_nonzero = [](const PadicNum& a) { return !a.is_indistinguishable_from_zero(); };
    if (known_nonzero(x.c0()) || known_nonzero(x.c1())) return false;
    throw PrecisionLoss("cannot decide whether an extension element is zero at this precision");
}

// ---------------------------------------------------------------------------
// Embeddings and root finding

namespace {

void require_integral(const mpq_class& a, long p) {
    if (mpz_divisible_ui_p(a.get_den_mpz_t(), (unsigned long)p))
        throw NonIntegral("denominator divisible by " + std::to_string(p));
}

}  // namespace

PadicNum theta_image(const QuadField& F, const PrimeOfK& P, int M) {
    if (P.kind == PrimeKind::inert) throw DomainError("theta has no image in Q_p at an inert prime");
    const PadicCtx* c = PadicCtx::get(P.p, M);
    Poly<PadicNum> f(PadicNum::zero(c), std::vector<PadicNum>{PadicNum::from_int(c, F.v), PadicNum::from_int(c, F.u),
                                                               PadicNum::from_int(c, 1)});
    return hensel_lift_root(f, P.theta_residue, M);
}

PadicNum embed_split(const KElt& x, const PrimeOfK& P, int M) {
    require_integral(x.c0(), P.p);
    require_integral(x.c1(), P.p);
    const PadicCtx* c = PadicCtx::get(P.p, M);
    PadicNum r = PadicNum::from_rational(c, x.c0());
    if (x.c1() != 0) r = r + PadicNum::from_rational(c, x.c1()) * theta_image(x.field(), P, M);
    return r;
}

PadicExtElt embed_inert(const KElt& x, const PrimeOfK& P, int M) {
    if (P.kind != PrimeKind::inert) throw DomainError("embed_inert needs an inert prime");
    require_integral(x.c0(), P.p);
    require_integral(x.c1(), P.p);
    const PadicCtx* c = PadicCtx::get(P.p, M);
    return PadicExtElt::inert(x.field().u, x.field().v, PadicNum::from_rational(c, x.c0()),
                              PadicNum::from_rational(c, x.c1()));
}

PadicExtElt embed_split_pair(const KElt& x, long p, int M) {
    auto primes = splitting_type(x.field(), p);
    if (primes.size() != 2) throw DomainError("embed_split_pair needs a split prime");
    return PadicExtElt(ExtMode::split, x.field().u, x.field().v, embed_split(x, primes[0], M),
                       embed_split(x, primes[1], M));
}

PadicNum hensel_lift_root(const Poly<PadicNum>& f, long r0, int M) {
    if (f.is_zero_poly()) throw NotSimpleRoot("zero polynomial");
    const PadicCtx* c = f.zero().ctx();
    const long p = c->p();
    long prec = M;
    for (const auto& a : f.coeffs()) prec = std::min(prec, a.abs_prec());
    if (prec < 1) throw PrecisionLoss("polynomial coefficients not known modulo p");
    const mpz_class& m = c->pow(int(prec));
    std::vector<mpz_class> co;
    for (const auto& a : f.coeffs()) co.push_back(a.mod_pk(int(prec)));
    auto ev = [&](const mpz_class& x, bool deriv) {
        mpz_class r = 0;
        for (int i = int(co.size()) - 1; i >= (deriv ? 1 : 0); --i) {
            r = r * x + (deriv ? co[i] * i : co[i]);
            mod_into(r, m);
        }
        return r;
    };
    mpz_class r = mod_i64(mpz_class(r0), p);
    if (mod_i64(ev(r, false), p) != 0) throw NotSimpleRoot("not a root modulo p");
    if (mod_i64(ev(r, true), p) == 0) throw NotSimpleRoot("derivative vanishes modulo p");
    for (int it = 0; it < 64; ++it) {
        mpz_class fr = ev(r, false);
        if (fr == 0) break;
        mpz_class d = ev(r, true), inv;
        mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
        r -= fr * inv;
        mod_into(r, m);
    }
    if (r == 0) return PadicNum::approx_zero(c, prec);
    return PadicNum::from_int(c, r, int(prec)).cap_abs(prec);
}

std::vector<PadicNum> linear_factors_power(const PadicNum& u1, const PadicNum& uc, int e, int M) {
    const PadicCtx* c = u1.ctx();
    const long p = c->p();
    if (u1.checked_valuation() != 0 || uc.checked_valuation() != 0)
        throw DomainError("linear_factors_power needs unit coefficients");
    if (e <= 0 || e % p == 0) throw DomainError("exponent must be positive and prime to p");
    std::vector<PadicNum> co(std::size_t(e) + 1, PadicNum::zero(c));
    co[0] = -uc;
    co[e] = u1;
    Poly<PadicNum> g(PadicNum::zero(c), co);
    const long a = u1.residue(), b = uc.residue();
    std::vector<PadicNum> out;
    for (long r = 1; r < p; ++r) {
        if ((std::uint64_t(a) * powmod64(std::uint64_t(r), std::uint64_t(e), std::uint64_t(p))) % std::uint64_t(p) !=
            std::uint64_t(b))
            continue;
        out.push_back(hensel_lift_root(g, r, M));
    }
    return out;
}

std::vector<std::pair<PadicNum, PadicNum>> factor_binary_form(const std::vector<PadicNum>& w, int M) {
    if (w.size() < 2) throw DomainError("binary form must have degree >= 1");
    const PadicCtx* c = w[0].ctx();
    const long p = c->p();
    const int e = int(w.size()) - 1;
    auto fctx = FqCtx::prime_field(std::uint32_t(p));
    const Fq fz(fctx.get(), 0, 0);
    // f(x) = W(x, 1) = sum w[i] x^(e-i)
    std::vector<Fq> fb(std::size_t(e) + 1, fz);
    for (int i = 0; i <= e; ++i) fb[e - i] = Fq::from_int(fctx.get(), long(w[i].mod_pk(1).get_si()));
    Poly<Fq> fbar(fz, fb);
    if (fbar.degree() < e - 1 || !is_squarefree(fbar))
        throw DiscriminantNotUnit("discriminant of the binary form is divisible by p");

    std::vector<PadicNum> fco(std::size_t(e) + 1, PadicNum::zero(c)), hco(std::size_t(e) + 1, PadicNum::zero(c));
    for (int i = 0; i <= e; ++i) {
        fco[e - i] = w[i];
        hco[i] = w[i];
    }
    Poly<PadicNum> fpoly(PadicNum::zero(c), fco), hpoly(PadicNum::zero(c), hco);
    std::vector<std::pair<PadicNum, PadicNum>> out;
    const PadicNum one = PadicNum::from_int(c, 1);
    for (long r = 0; r < p; ++r) {
        if (!fbar.eval(Fq::from_int(fctx.get(), r)).is_zero()) continue;
        out.emplace_back(one, hensel_lift_root(fpoly, r, M));
    }
    if (fbar.degree() == e - 1) out.emplace_back(hensel_lift_root(hpoly, 0, M), one);
    return out;
}

}  // namespace chab
