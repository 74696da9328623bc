#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace g2 {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Malformed or out-of-contract input (CLI exit code 2).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A configured budget (factorization, enumeration, escalation) ran out (CLI exit code 3).
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline int sgn(const Int& a) { return a.sign(); }
inline int sgn(const Rat& r) { return r.sign(); }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

/// Floor square root; exact == true iff n is a perfect square.
inline Int isqrt(const Int& n, bool* exact = nullptr) {
    if (n < 0) throw input_error("isqrt of negative");
    Int r = boost::multiprecision::sqrt(n);
    if (exact) *exact = (r * r == n);
    return r;
}

/// p-adic valuation of a nonzero integer.
inline long val_p(Int n, const Int& p) {
    if (n == 0) throw input_error("valuation of zero");
    long v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

inline long val_p(const Rat& r, const Int& p) {
    if (r == 0) throw input_error("valuation of zero");
    long v = 0;
    Int n = num(r), d = den(r);
    while (n % p == 0) { n /= p; ++v; }
    while (d % p == 0) { d /= p; --v; }
    return v;
}

/// Nonnegative remainder of a mod m, m > 0.
inline Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline std::uint64_t mod_u64(const Int& a, std::uint64_t p) {
    return static_cast<std::uint64_t>(mod_pos(a, Int(p)));
}

// ---- word-size modular arithmetic (p < 2^63) ----

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t a, Int e, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t r = 1;
    a %= m;
    while (e > 0) {
        if ((e & 1) != 0) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Legendre symbol (a|p) for odd prime p: returns -1, 0, or 1.
inline int legendre(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    std::uint64_t t = powmod(a, Int((p - 1) / 2), p);
    return t == 1 ? 1 : -1;
}

/// Is a a square in F_p (0 counts as a square)?  p an odd prime.
inline bool is_square_mod_p(const Int& a, std::uint64_t p) {
    return legendre(mod_u64(a, p), p) >= 0;
}

/// Smallest positive quadratic non-residue mod odd prime p.
inline std::uint64_t least_nonresidue(std::uint64_t p) {
    for (std::uint64_t n = 2; n < p; ++n)
        if (legendre(n, p) == -1) return n;
    throw input_error("no non-residue: p not an odd prime?");
}

/// Tonelli-Shanks square root mod odd prime p; rejects non-residues.
inline std::uint64_t sqrt_mod_p(const Int& a0, std::uint64_t p) {
    std::uint64_t a = mod_u64(a0, p);
    if (a == 0) return 0;
    if (legendre(a, p) != 1) throw input_error("sqrt_mod_p: not a quadratic residue");
    if (p % 4 == 3) return powmod(a, Int((p + 1) / 4), p);
    std::uint64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    std::uint64_t z = least_nonresidue(p);
    std::uint64_t m = s, c = powmod(z, Int(q), p), t = powmod(a, Int(q), p),
                  r = powmod(a, Int((q + 1) / 2), p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

/// Inverse of a mod m (m > 1, gcd(a, m) = 1) by extended Euclid.
inline Int mod_inverse(const Int& a0, const Int& m) {
    Int a = mod_pos(a0, m), r0 = m, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1; r1 = r2; s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw input_error("mod_inverse: not invertible");
    return mod_pos(s0, m);
}

// ---- rational string format "num/den" ----

inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) throw input_error("rational with zero denominator: " + s);
        return Rat(n, d);
    } catch (const std::exception&) {
        throw input_error("bad rational literal: " + s);
    }
}

inline std::string format_rat(const Rat& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

} // namespace g2
