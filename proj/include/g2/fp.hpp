#pragma once

#include "g2/factor.hpp"
#include "g2/numeric.hpp"
#include "g2/poly.hpp"

#include <optional>
#include <vector>

namespace g2 {

/// Element of F_p with runtime modulus (odd or 2, p < 2^63).
struct Fp {
    std::uint64_t v = 0, p = 0;

    Fp() = default;
    Fp(std::uint64_t val, std::uint64_t prime) : v(val % prime), p(prime) {}
    static Fp of(const Int& a, std::uint64_t prime) { return Fp(mod_u64(a, prime), prime); }

    Fp zero() const { return Fp(0, p); }
    Fp one() const { return Fp(1, p); }
    bool is_zero() const { return v == 0; }

    void check(const Fp& o) const {
        if (p != o.p) throw input_error("mixed moduli in F_p arithmetic");
    }
    Fp operator+(const Fp& o) const { check(o); return Fp(v + o.v >= p ? v + o.v - p : v + o.v, p); }
    Fp operator-() const { return Fp(v == 0 ? 0 : p - v, p); }
    Fp operator-(const Fp& o) const { return *this + (-o); }
    Fp operator*(const Fp& o) const { check(o); return Fp(mulmod(v, o.v, p), p); }
    bool operator==(const Fp& o) const { return v == o.v && p == o.p; }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    Fp pow(const Int& e) const {
        if (e < 0) return inv().pow(-e);
        return Fp(powmod(v, e, p), p);
    }
    Fp inv() const {
        if (v == 0) throw input_error("inverse of zero in F_p");
        return Fp(powmod(v, Int(p - 2), p), p);
    }
    bool is_square() const { return p == 2 || legendre(v, p) >= 0; }
    Fp sqrt() const {
        if (p == 2) return *this;
        return Fp(sqrt_mod_p(Int(v), p), p);
    }
};

/// Element a + b*w of F_{p^2} = F_p[w]/(w^2 - n), n the least non-residue mod p.
struct Fp2 {
    Fp a, b;
    std::uint64_t n = 0;

    Fp2() = default;
    Fp2(Fp a_, Fp b_, std::uint64_t n_) : a(a_), b(b_), n(n_) {}
    static Fp2 embed(Fp x, std::uint64_t n_) { return Fp2(x, x.zero(), n_); }
    static Fp2 make(std::uint64_t p) { return Fp2(Fp(0, p), Fp(0, p), least_nonresidue(p)); }

    Fp2 zero() const { return Fp2(a.zero(), a.zero(), n); }
    Fp2 one() const { return Fp2(a.one(), a.zero(), n); }
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    bool in_base() const { return b.is_zero(); }

    Fp2 operator+(const Fp2& o) const { return Fp2(a + o.a, b + o.b, n); }
    Fp2 operator-() const { return Fp2(-a, -b, n); }
    Fp2 operator-(const Fp2& o) const { return *this + (-o); }
    Fp2 operator*(const Fp2& o) const {
        Fp nn(n, a.p);
        return Fp2(a * o.a + nn * b * o.b, a * o.b + b * o.a, n);
    }
    bool operator==(const Fp2& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Fp2& o) const { return !(*this == o); }

    Fp2 frobenius() const { return Fp2(a, -b, n); }
    Fp norm() const { return a * a - Fp(n, a.p) * b * b; }
    Fp2 inv() const {
        Fp nm = norm();
        if (nm.is_zero()) throw input_error("inverse of zero in F_{p^2}");
        Fp ninv = nm.inv();
        return Fp2(a * ninv, -(b * ninv), n);
    }
    Fp2 pow(Int e) const {
        if (e < 0) return inv().pow(-e);
        Fp2 acc = one(), base = *this;
        while (e > 0) {
            if ((e & 1) != 0) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }
    bool is_square() const {
        if (is_zero()) return true;
        Int q = Int(a.p) * a.p;
        return pow((q - 1) / 2) == one();
    }
    /// Tonelli-Shanks in F_{p^2}; deterministic non-residue scan.
    Fp2 sqrt() const {
        if (is_zero()) return *this;
        if (!is_square()) throw input_error("sqrt in F_{p^2}: not a square");
        Int q = Int(a.p) * a.p;
        Int qm1 = q - 1, odd = qm1;
        int s = 0;
        while (odd % 2 == 0) { odd /= 2; ++s; }
        Fp2 z = zero();
        for (std::uint64_t c = 0;; ++c) {
            z = Fp2(Fp(c, a.p), a.one(), n);
            if (!z.is_square()) break;
        }
        Fp2 m_c = z.pow(odd), t = pow(odd), r = pow((odd + 1) / 2);
        int m = s;
        while (!(t == one())) {
            Fp2 tt = t;
            int i = 0;
            while (!(tt == one())) { tt = tt * tt; ++i; }
            Fp2 bb = m_c;
            for (int j = 0; j + i + 1 < m; ++j) bb = bb * bb;
            m = i;
            m_c = bb * bb;
            t = t * m_c;
            r = r * bb;
        }
        return r;
    }
};

inline Poly<Fp> poly_mod_p(const Poly<Int>& f, std::uint64_t p) {
    std::vector<Fp> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(Fp::of(x, p));
    return Poly<Fp>(std::move(c));
}

inline Fp fp_of_rat(const Rat& r, std::uint64_t p) {
    if (den(r) % p == 0) throw input_error("reduction of p-denominator rational");
    return Fp::of(num(r), p) * Fp::of(den(r), p).inv();
}

inline Poly<Fp> poly_mod_p(const Poly<Rat>& f, std::uint64_t p) {
    std::vector<Fp> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(fp_of_rat(x, p));
    return Poly<Fp>(std::move(c));
}

inline Poly<Fp2> lift_to_fp2(const Poly<Fp>& f, std::uint64_t n) {
    std::vector<Fp2> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(Fp2::embed(x, n));
    return Poly<Fp2>(std::move(c));
}

/// Distinct roots of f in F_p, ascending.  Scan for small p, otherwise
/// gcd with x^p - x and deterministic equal-degree splitting.
inline std::vector<std::uint64_t> roots_fp(const Poly<Fp>& f, std::uint64_t p) {
    std::vector<std::uint64_t> out;
    if (f.is_zero()) throw input_error("roots of zero polynomial");
    if (f.degree() == 0) return out;
    if (p <= 256) {
        for (std::uint64_t x = 0; x < p; ++x)
            if (eval(f, Fp(x, p)).is_zero()) out.push_back(x);
        return out;
    }
    Poly<Fp> xp = powmod_poly(poly_of<Fp>({Fp(0, p), Fp(1, p)}), Int(p), f);
    Poly<Fp> lin = gcd_poly(xp - poly_of<Fp>({Fp(0, p), Fp(1, p)}), f);
    // split lin (product of distinct linears) completely
    std::vector<Poly<Fp>> stack;
    if (lin.degree() >= 1) stack.push_back(lin);
    std::uint64_t shift = 0;
    while (!stack.empty()) {
        Poly<Fp> g = stack.back();
        stack.pop_back();
        if (g.degree() == 1) {
            out.push_back((-g.c[0] * g.c[1].inv()).v);
            continue;
        }
        for (;; ++shift) {
            Poly<Fp> base = poly_of<Fp>({Fp(shift % p, p), Fp(1, p)});
            Poly<Fp> h = powmod_poly(base, Int((p - 1) / 2), g) - poly_of<Fp>({Fp(1, p)});
            Poly<Fp> d = gcd_poly(h, g);
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

/// Yun squarefree decomposition of monic f over F_p, valid when p > deg f.
/// Returns a[i] (monic, squarefree, pairwise coprime) with f = prod a[i]^(i+1).
inline std::vector<Poly<Fp>> yun_squarefree(const Poly<Fp>& f0, std::uint64_t p) {
    Poly<Fp> f = monic(f0);
    if (static_cast<std::uint64_t>(f.degree()) >= p)
        throw input_error("yun_squarefree needs p > deg f");
    std::vector<Poly<Fp>> out;
    Poly<Fp> fd = derivative(f);
    Poly<Fp> a = gcd_poly(f, fd);
    Poly<Fp> b = divmod(f, a).first;
    Poly<Fp> c = divmod(fd, a).first - derivative(b);
    while (!(b.degree() == 0)) {
        Poly<Fp> ai = gcd_poly(b, c);
        out.push_back(ai);
        b = divmod(b, ai).first;
        c = divmod(c, ai).first - derivative(b);
    }
    return out;
}

/// Write monic f over F_p as S^2 * U with U squarefree monic; needs p > deg f.
inline std::pair<Poly<Fp>, Poly<Fp>> square_decompose(const Poly<Fp>& f, std::uint64_t p) {
    auto parts = yun_squarefree(f, p);
    Poly<Fp> S = poly_of<Fp>({Fp(1, p)}), U = poly_of<Fp>({Fp(1, p)});
    for (size_t i = 0; i < parts.size(); ++i) {
        size_t mult = i + 1;
        for (size_t k = 0; k < mult / 2; ++k) S = S * parts[i];
        if (mult % 2 == 1) U = U * parts[i];
    }
    return {S, U};
}

} // namespace g2
