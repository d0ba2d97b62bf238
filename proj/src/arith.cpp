#include "chab/arith.hpp"

namespace chab {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic witness set for 64-bit inputs.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
        if (n % q) continue;
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        out.emplace_back(q, e);
        if (is_prime_u64(n)) break;
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

int ord_p(const mpz_class& a, const mpz_class& p) {
    if (a == 0) return 1 << 28;
    mpz_class t = a;
    int e = 0;
    while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
        t /= p;
        ++e;
    }
    return e;
}

}  // namespace chab
