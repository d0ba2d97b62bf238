#include "chab/numfield.hpp"

#include "chab/arith.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace chab {

namespace {

long pmod(long a, long p) {
    long r = a % p;
    return r < 0 ? r + p : r;
}

bool is_perfect_square(long n) {
    if (n < 0) return false;
    mpz_class z = n;
    return mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

}  // namespace

void QuadField::validate() const {
    if (is_perfect_square(disc())) {
        throw DomainError("x^2 + " + std::to_string(u) + "x + " + std::to_string(v) + " is reducible over Q");
    }
}

KElt::KElt(const QuadField& F, mpq_class c0, mpq_class c1) : F_(F), c0_(std::move(c0)), c1_(std::move(c1)) {
    c0_.canonicalize();
    c1_.canonicalize();
}

KElt KElt::operator+(const KElt& o) const { return KElt(F_, c0_ + o.c0_, c1_ + o.c1_); }
KElt KElt::operator-(const KElt& o) const { return KElt(F_, c0_ - o.c0_, c1_ - o.c1_); }

KElt KElt::operator*(const KElt& o) const {
    // theta^2 = -u theta - v
    mpq_class bb = c1_ * o.c1_;
    return KElt(F_, c0_ * o.c0_ - F_.v * bb, c0_ * o.c1_ + c1_ * o.c0_ - F_.u * bb);
}

KElt KElt::operator/(const KElt& o) const {
    mpq_class n = norm(o);
    if (n == 0) throw DomainError("division by zero in K");
    KElt c = conj(o);
    return KElt(F_, (c0_ * c.c0() - F_.v * c1_ * c.c1()) / n, (c0_ * c.c1() + c1_ * c.c0() - F_.u * c1_ * c.c1()) / n);
}

mpz_class KElt::denominator() const {
    mpz_class d;
    mpz_lcm(d.get_mpz_t(), c0_.get_den_mpz_t(), c1_.get_den_mpz_t());
    return d;
}

std::string KElt::str() const {
    std::ostringstream os;
    if (c1_ == 0) {
        os << c0_;
    } else {
        if (c0_ != 0) os << c0_ << (c1_ > 0 ? "+" : "");
        if (c1_ == 1)
            os << "t";
        else if (c1_ == -1)
            os << "-t";
        else
            os << c1_ << "*t";
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const KElt& x) { return os << x.str(); }

KElt conj(const KElt& x) {
    // theta -> -u - theta
    const auto& F = x.field();
    return KElt(F, x.c0() - F.u * x.c1(), -x.c1());
}

mpq_class norm(const KElt& x) {
    const auto& F = x.field();
    return x.c0() * x.c0() - F.u * x.c0() * x.c1() + F.v * x.c1() * x.c1();
}

mpq_class trace(const KElt& x) { return 2 * x.c0() - x.field().u * x.c1(); }

std::string to_string(PrimeKind k) {
    switch (k) {
        case PrimeKind::split: return "split";
        case PrimeKind::inert: return "inert";
        case PrimeKind::ramified: return "ramified";
    }
    return "?";
}

std::string PrimeOfK::str() const {
    std::ostringstream os;
    os << "(" << p;
    if (kind != PrimeKind::inert) os << ", t-" << theta_residue;
    os << ")";
    return os.str();
}

std::vector<PrimeOfK> splitting_type(const QuadField& F, long p) {
    if (p < 3 || p % 2 == 0) throw DomainError("splitting_type needs an odd prime, got " + std::to_string(p));
    std::vector<long> roots;
    for (long r = 0; r < p; ++r) {
        if (pmod(r * r + F.u * r + F.v, p) == 0) roots.push_back(r);
    }
    std::vector<PrimeOfK> out;
    if (pmod(F.disc(), p) == 0) {
        out.push_back({p, PrimeKind::ramified, roots.at(0), 1});
    } else if (roots.empty()) {
        out.push_back({p, PrimeKind::inert, -1, 1});
    } else {
        std::sort(roots.begin(), roots.end());
        out.push_back({p, PrimeKind::split, roots[0], 1});
        out.push_back({p, PrimeKind::split, roots[1], 2});
    }
    return out;
}

// ---------------------------------------------------------------------------

FqCtx::FqCtx(std::uint32_t p, int deg, std::uint32_t u, std::uint32_t v) : p_(p), deg_(deg), u_(u), v_(v) {
    inv_.assign(p, 0);
    sq_.assign(p, 0);
    for (std::uint32_t a = 1; a < p; ++a) {
        sq_[std::uint64_t(a) * a % p] = 1;
        if (!inv_[a]) {
            // inverse by Fermat
            std::uint64_t r = 1, b = a, e = p - 2;
            while (e) {
                if (e & 1) r = r * b % p;
                b = b * b % p;
                e >>= 1;
            }
            inv_[a] = std::uint32_t(r);
            inv_[r] = a;
        }
    }
    sq_[0] = 1;
}

std::shared_ptr<const FqCtx> FqCtx::prime_field(std::uint32_t p) {
    static std::mutex mu;
    static std::vector<std::shared_ptr<const FqCtx>> cache;
    std::lock_guard lk(mu);
    for (auto& c : cache)
        if (c->p() == p && c->degree() == 1) return c;
    auto c = std::shared_ptr<const FqCtx>(new FqCtx(p, 1, 0, 0));
    cache.push_back(c);
    return c;
}

std::shared_ptr<const FqCtx> FqCtx::quadratic(std::uint32_t p, std::uint32_t u, std::uint32_t v) {
    u %= p;
    v %= p;
    for (std::uint64_t r = 0; r < p; ++r) {
        if ((r * r + u * r + v) % p == 0) throw DomainError("quadratic residue field polynomial is reducible");
    }
    static std::mutex mu;
    static std::vector<std::shared_ptr<const FqCtx>> cache;
    std::lock_guard lk(mu);
    for (auto& c : cache)
        if (c->p() == p && c->poly_u() == u && c->poly_v() == v) return c;
    auto c = std::shared_ptr<const FqCtx>(new FqCtx(p, 2, u, v));
    cache.push_back(c);
    return c;
}

std::shared_ptr<const FqCtx> FqCtx::quadratic_ext(std::uint32_t p) {
    auto base = prime_field(p);
    std::uint32_t n = 2;
    while (base->is_square_p(n)) ++n;
    return quadratic(p, 0, p - n);
}

std::shared_ptr<const FqCtx> FqCtx::residue_field(const QuadField& F, const PrimeOfK& P) {
    if (P.kind == PrimeKind::inert) {
        return quadratic(std::uint32_t(P.p), std::uint32_t(pmod(F.u, P.p)), std::uint32_t(pmod(F.v, P.p)));
    }
    return prime_field(std::uint32_t(P.p));
}

Fq Fq::from_int(const FqCtx* ctx, long n) { return Fq(ctx, std::uint32_t(pmod(n, ctx->p())), 0); }

Fq Fq::conj() const {
    if (k->degree() == 1) return *this;
    // t -> -u - t
    const std::uint64_t p = k->p();
    std::uint64_t c0 = (a + (p - k->poly_u()) * std::uint64_t(b)) % p;
    return Fq(k, std::uint32_t(c0), b ? std::uint32_t(p - b) : 0);
}

std::uint32_t Fq::norm() const {
    if (k->degree() == 1) return a;
    return (*this * conj()).a;
}

Fq Fq::inv() const {
    if (is_zero()) throw DomainError("inverse of zero in residue field");
    if (k->degree() == 1) return Fq(k, k->inv_p(a), 0);
    Fq c = conj();
    std::uint32_t ni = k->inv_p(norm());
    return c * Fq(k, ni, 0);
}

bool Fq::is_square() const {
    // In F_{p^2} an element is a square iff its norm is a square in F_p.
    return k->is_square_p(norm());
}

Fq Fq::pow(std::uint64_t e) const {
    Fq r(k, 1, 0), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::string Fq::str() const {
    std::ostringstream os;
    if (k && k->degree() == 2)
        os << "(" << a << "+" << b << "t)";
    else
        os << a;
    return os.str();
}

bool fq_sqrt(const Fq& x, Fq& root) {
    if (x.is_zero()) {
        root = x;
        return true;
    }
    if (!x.is_square()) return false;
    // Tonelli-Shanks in the cyclic group F_q^*.
    const std::uint64_t q = x.k->order();
    std::uint64_t Q = q - 1;
    int S = 0;
    while ((Q & 1) == 0) {
        Q >>= 1;
        ++S;
    }
    Fq z = x;
    for (std::uint64_t i = 2;; ++i) {
        z = Fq::from_index(x.k, i % q);
        if (!z.is_zero() && !z.is_square()) break;
    }
    int M = S;
    Fq c = z.pow(Q);
    Fq t = x.pow(Q);
    Fq R = x.pow((Q + 1) / 2);
    const Fq one(x.k, 1, 0);
    while (!(t == one)) {
        int i = 0;
        Fq t2 = t;
        while (!(t2 == one)) {
            t2 = t2 * t2;
            ++i;
        }
        Fq b = c;
        for (int j = 0; j < M - i - 1; ++j) b = b * b;
        M = i;
        c = b * b;
        t = t * c;
        R = R * b;
    }
    root = R;
    return true;
}

Fq reduce(const mpq_class& x, const FqCtx* k) {
    const long p = k->p();
    mpz_class den = x.get_den();
    if (mpz_divisible_ui_p(den.get_mpz_t(), p)) throw NonIntegral("denominator divisible by " + std::to_string(p));
    long n = mod_i64(x.get_num(), p);
    long d = mod_i64(den, p);
    return Fq(k, std::uint32_t((std::uint64_t(n) * k->inv_p(std::uint32_t(d))) % p), 0);
}

Fq reduce(const KElt& x, const PrimeOfK& P, const FqCtx* k) {
    Fq a = reduce(x.c0(), k);
    Fq b = reduce(x.c1(), k);
    if (P.kind == PrimeKind::inert) return a + b * Fq(k, 0, 1);
    return a + b * Fq::from_int(k, P.theta_residue);
}

}  // namespace chab
