#pragma once

#include "g2/numeric.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace g2 {

namespace detail {

inline bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
    if (a % n == 0) return true;
    std::uint64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) { d /= 2; ++s; }
    std::uint64_t x = powmod(a, Int(d), n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/// Deterministic below 2^64 (fixed witness set), probabilistic above via the same
/// witnesses interpreted mod n.
inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    static const std::uint64_t witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < (Int(1) << 64)) {
        std::uint64_t m = static_cast<std::uint64_t>(n);
        for (std::uint64_t a : witnesses)
            if (!detail::miller_rabin_u64(m, a)) return false;
        return true;
    }
    // n - 1 = d * 2^s
    Int d = n - 1;
    int s = 0;
    while (d % 2 == 0) { d /= 2; ++s; }
    for (std::uint64_t a : witnesses) {
        Int x = boost::multiprecision::powm(Int(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = (x * x) % n;
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

/// Brent's cycle variant of Pollard rho; returns a nontrivial factor of composite odd n,
/// or 0 if the iteration budget runs out.
inline Int pollard_brent(const Int& n, long budget) {
    for (std::uint64_t c = 1;; ++c) {
        Int x = 2, y = 2, dgcd = 1, q = 1, xs = 0;
        long steps = 0;
        long r = 1;
        auto f = [&](const Int& v) { return (v * v + c) % n; };
        while (dgcd == 1) {
            x = y;
            for (long i = 0; i < r; ++i) y = f(y);
            long k = 0;
            while (k < r && dgcd == 1) {
                xs = y;
                long lim = std::min<long>(128, r - k);
                for (long i = 0; i < lim; ++i) {
                    y = f(y);
                    q = (q * boost::multiprecision::abs(x - y)) % n;
                }
                dgcd = gcd(q, n);
                k += lim;
                steps += lim;
                if (steps > budget) return 0;
            }
            r *= 2;
        }
        if (dgcd == n) {
            // backtrack
            dgcd = 1;
            while (dgcd == 1) {
                xs = f(xs);
                dgcd = gcd(boost::multiprecision::abs(x - xs), n);
            }
        }
        if (dgcd != n) return dgcd;
        // cycle degenerated for this c; try the next polynomial
    }
}

} // namespace detail

/// Factor |n| into prime -> exponent.  Trial division below 10^4, then recursive
/// Pollard-Brent splitting with primality certificates from is_prime.
/// Throws budget_error when the rho budget (iterations) is exhausted.
inline std::map<Int, int> factor_integer(Int n, long rho_budget = 2000000) {
    std::map<Int, int> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (std::uint64_t q = 2; q < 10000; q == 2 ? q = 3 : q += 2) {
        if (Int(q) * q > n) break;
        while (n % q == 0) { out[Int(q)]++; n /= q; }
    }
    if (n == 1) return out;
    std::vector<Int> stack{n};
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime(m)) { out[m]++; continue; }
        Int d = detail::pollard_brent(m, rho_budget);
        if (d == 0 || d == 1 || d == m)
            throw budget_error("factor_integer: rho budget exhausted on " + m.str());
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return out;
}

/// Primes in [2, bound] by sieve of Eratosthenes.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<bool> comp(bound + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (std::uint64_t j = i * i; j <= bound; j += i) comp[j] = true;
        }
    }
    return out;
}

} // namespace g2
