#pragma once

#include "g2/numeric.hpp"
#include "g2/poly.hpp"

#include <vector>

namespace g2 {

/// Legendre symbol (a|p) for odd prime p of arbitrary size.
inline int legendre_int(const Int& a, const Int& p) {
    Int r = mod_pos(a, p);
    if (r == 0) return 0;
    Int t = boost::multiprecision::powm(r, (p - 1) / 2, p);
    return t == 1 ? 1 : -1;
}

/// Element of F_p for odd p of arbitrary size (slower than Fp; used where
/// candidate primes may exceed the word size).
struct Fq {
    Int v = 0, p = 0;

    Fq() = default;
    Fq(Int val, Int prime) : v(mod_pos(val, prime)), p(std::move(prime)) {}

    Fq zero() const { return Fq(0, p); }
    Fq one() const { return Fq(1, p); }
    bool is_zero() const { return v == 0; }

    void check(const Fq& o) const {
        if (p != o.p) throw input_error("mixed moduli in F_q arithmetic");
    }
    Fq operator+(const Fq& o) const { check(o); Int s = v + o.v; if (s >= p) s -= p; return Fq(s, p); }
    Fq operator-() const { return Fq(v == 0 ? Int(0) : p - v, p); }
    Fq operator-(const Fq& o) const { return *this + (-o); }
    Fq operator*(const Fq& o) const { check(o); return Fq(v * o.v % p, p); }
    bool operator==(const Fq& o) const { return v == o.v && p == o.p; }
    bool operator!=(const Fq& o) const { return !(*this == o); }
    Fq inv() const {
        if (v == 0) throw input_error("inverse of zero in F_q");
        return Fq(mod_inverse(v, p), p);
    }
    bool is_square() const { return legendre_int(v, p) >= 0; }
};

inline Poly<Fq> poly_mod_q(const Poly<Int>& f, const Int& p) {
    std::vector<Fq> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.emplace_back(x, p);
    return Poly<Fq>(std::move(c));
}

inline Poly<Fq> poly_mod_q(const Poly<Rat>& f, const Int& p) {
    std::vector<Fq> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) {
        if (den(x) % p == 0) throw input_error("reduction of p-denominator rational");
        c.push_back(Fq(num(x), p) * Fq(den(x), p).inv());
    }
    return Poly<Fq>(std::move(c));
}

/// Distinct roots in F_p (p odd, any size), ascending: gcd with x^p - x, then
/// deterministic quadratic-character splitting with small shifts.
inline std::vector<Int> roots_fq(const Poly<Fq>& f, const Int& p) {
    std::vector<Int> out;
    if (f.is_zero()) throw input_error("roots of zero polynomial");
    if (f.degree() == 0) return out;
    Poly<Fq> x1 = poly_of<Fq>({Fq(0, p), Fq(1, p)});
    Poly<Fq> lin = gcd_poly(powmod_poly(x1, p, f) - x1, f);
    std::vector<Poly<Fq>> stack;
    if (lin.degree() >= 1) stack.push_back(lin);
    Int shift = 0;
    while (!stack.empty()) {
        Poly<Fq> g = stack.back();
        stack.pop_back();
        if (g.degree() == 1) {
            out.push_back((-g.c[0] * g.c[1].inv()).v);
            continue;
        }
        for (;; ++shift) {
            Poly<Fq> base = poly_of<Fq>({Fq(shift, p), Fq(1, p)});
            Poly<Fq> h = powmod_poly(base, (p - 1) / 2, g) - poly_of<Fq>({Fq(1, p)});
            Poly<Fq> d = gcd_poly(h, g);
            if (d.degree() >= 1 && d.degree() < g.degree()) {
                stack.push_back(d);
                stack.push_back(divmod(g, d).first);
                ++shift;
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Write monic f over F_q as gamma-free S^2 * U with U squarefree (Yun); needs p > deg f.
inline std::pair<Poly<Fq>, Poly<Fq>> square_decompose_fq(const Poly<Fq>& f0, const Int& p) {
    Poly<Fq> f = monic(f0);
    if (Int(f.degree()) >= p) throw input_error("square_decompose_fq needs p > deg f");
    Poly<Fq> one = poly_of<Fq>({Fq(1, p)});
    Poly<Fq> S = one, U = one;
    Poly<Fq> fd = derivative(f);
    Poly<Fq> a = gcd_poly(f, fd);
    Poly<Fq> b = divmod(f, a).first;
    Poly<Fq> c = divmod(fd, a).first - derivative(b);
    int mult = 1;
    while (b.degree() != 0) {
        Poly<Fq> ai = gcd_poly(b, c);
        for (int k = 0; k < mult / 2; ++k) S = S * ai;
        if (mult % 2 == 1) U = U * ai;
        b = divmod(b, ai).first;
        c = divmod(c, ai).first - derivative(b);
        ++mult;
    }
    return {S, U};
}

} // namespace g2
