#pragma once

// Small integer helpers shared by the finite-field and sieve code.

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace chab {

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t n);

// Trial division; fine for the group orders met here (< 10^13).
std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n);

// Non-negative residue of a (possibly negative) mpz modulo m.
inline std::int64_t mod_i64(const mpz_class& a, std::int64_t m) {
    mpz_class r = a % m;
    if (r < 0) r += m;
    return r.get_si();
}

inline mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// ord_p of a nonzero integer.
int ord_p(const mpz_class& a, const mpz_class& p);

}  // namespace chab
