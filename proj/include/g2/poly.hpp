#pragma once

#include "g2/numeric.hpp"

#include <initializer_list>
#include <utility>
#include <vector>

namespace g2 {

// Ring-element glue: coefficient types either are Int/Rat or expose
// zero()/one()/is_zero()/inv() members (Fp, Fp2).
inline Int zero_like(const Int&) { return Int(0); }
inline Int one_like(const Int&) { return Int(1); }
inline bool elem_is_zero(const Int& x) { return x == 0; }
inline Rat zero_like(const Rat&) { return Rat(0); }
inline Rat one_like(const Rat&) { return Rat(1); }
inline bool elem_is_zero(const Rat& x) { return x == 0; }
inline Rat inv_of(const Rat& x) {
    if (x == 0) throw input_error("division by zero");
    return Rat(1) / x;
}
inline Int inv_of(const Int& x) {
    if (x == 1 || x == -1) return x;
    throw input_error("non-unit integer division");
}
template <class R> R zero_like(const R& x) { return x.zero(); }
template <class R> R one_like(const R& x) { return x.one(); }
template <class R> bool elem_is_zero(const R& x) { return x.is_zero(); }
template <class R> R inv_of(const R& x) { return x.inv(); }

/// Dense univariate polynomial, coefficients lowest-degree first, trailing zeros
/// stripped so that the zero polynomial has an empty vector and degree -1.
template <class R>
struct Poly {
    std::vector<R> c;

    Poly() = default;
    explicit Poly(std::vector<R> v) : c(std::move(v)) { strip(); }

    void strip() {
        while (!c.empty() && elem_is_zero(c.back())) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const R& lead() const {
        if (c.empty()) throw input_error("lead of zero polynomial");
        return c.back();
    }
    /// Coefficient of x^i (zero beyond the stored range); needs a sample element
    /// to materialize zero in context-carrying rings.
    R coeff(size_t i, const R& sample) const {
        return i < c.size() ? c[i] : zero_like(sample);
    }

    bool operator==(const Poly& o) const {
        if (c.size() != o.c.size()) return false;
        for (size_t i = 0; i < c.size(); ++i)
            if (!(c[i] == o.c[i])) return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }
};

template <class R>
Poly<R> poly_of(std::initializer_list<R> v) {
    return Poly<R>(std::vector<R>(v));
}

inline Poly<Int> ipoly(std::initializer_list<long> v) {
    std::vector<Int> c;
    for (long x : v) c.emplace_back(x);
    return Poly<Int>(std::move(c));
}

template <class R>
Poly<R> operator+(const Poly<R>& a, const Poly<R>& b) {
    std::vector<R> c = a.c.size() >= b.c.size() ? a.c : b.c;
    const std::vector<R>& s = a.c.size() >= b.c.size() ? b.c : a.c;
    for (size_t i = 0; i < s.size(); ++i) c[i] = c[i] + s[i];
    return Poly<R>(std::move(c));
}

template <class R>
Poly<R> operator-(const Poly<R>& a) {
    std::vector<R> c = a.c;
    for (auto& x : c) x = -x;
    return Poly<R>(std::move(c));
}

template <class R>
Poly<R> operator-(const Poly<R>& a, const Poly<R>& b) {
    return a + (-b);
}

template <class R>
Poly<R> operator*(const Poly<R>& a, const Poly<R>& b) {
    if (a.is_zero() || b.is_zero()) return Poly<R>();
    std::vector<R> c(a.c.size() + b.c.size() - 1, zero_like(a.c[0]));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) c[i + j] = c[i + j] + a.c[i] * b.c[j];
    return Poly<R>(std::move(c));
}

template <class R>
Poly<R> operator*(const R& s, const Poly<R>& a) {
    std::vector<R> c = a.c;
    for (auto& x : c) x = s * x;
    return Poly<R>(std::move(c));
}

template <class R>
R eval(const Poly<R>& f, const R& x) {
    R acc = zero_like(x);
    for (size_t i = f.c.size(); i-- > 0;) acc = acc * x + f.c[i];
    return acc;
}

template <class R>
Poly<R> derivative(const Poly<R>& f) {
    if (f.c.size() <= 1) return Poly<R>();
    std::vector<R> c;
    c.reserve(f.c.size() - 1);
    for (size_t i = 1; i < f.c.size(); ++i) {
        R k = zero_like(f.c[i]);
        for (size_t j = 0; j < i; ++j) k = k + one_like(f.c[i]);
        c.push_back(k * f.c[i]);
    }
    return Poly<R>(std::move(c));
}

/// Quotient and remainder; requires invertible leading coefficient of g.
template <class R>
std::pair<Poly<R>, Poly<R>> divmod(const Poly<R>& f, const Poly<R>& g) {
    if (g.is_zero()) throw input_error("polynomial division by zero");
    if (f.degree() < g.degree()) return {Poly<R>(), f};
    R linv = inv_of(g.lead());
    std::vector<R> rem = f.c;
    std::vector<R> quo(f.degree() - g.degree() + 1, zero_like(g.lead()));
    for (int d = f.degree(); d >= g.degree(); --d) {
        R coef = rem[d] * linv;
        if (!elem_is_zero(coef)) {
            quo[d - g.degree()] = coef;
            for (int i = 0; i <= g.degree(); ++i)
                rem[d - g.degree() + i] = rem[d - g.degree() + i] - coef * g.c[i];
        }
        rem[d] = zero_like(g.lead()); // exact by construction
    }
    return {Poly<R>(std::move(quo)), Poly<R>(std::move(rem))};
}

template <class R>
Poly<R> pmod(const Poly<R>& f, const Poly<R>& g) {
    return divmod(f, g).second;
}

template <class R>
Poly<R> monic(const Poly<R>& f) {
    if (f.is_zero()) return f;
    return inv_of(f.lead()) * f;
}

/// Monic gcd over a field.
template <class R>
Poly<R> gcd_poly(Poly<R> a, Poly<R> b) {
    while (!b.is_zero()) {
        Poly<R> r = pmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

/// Extended gcd over a field: returns (d, s, t) with s*a + t*b = d, d monic (or zero).
template <class R>
std::tuple<Poly<R>, Poly<R>, Poly<R>> xgcd_poly(const Poly<R>& a, const Poly<R>& b) {
    if (a.is_zero() && b.is_zero()) return {Poly<R>(), Poly<R>(), Poly<R>()};
    R one = one_like(a.is_zero() ? b.lead() : a.lead());
    Poly<R> r0 = a, r1 = b;
    Poly<R> s0 = poly_of<R>({one}), s1, t0, t1 = poly_of<R>({one});
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly<R> s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    R linv = inv_of(r0.lead());
    return {linv * r0, linv * s0, linv * t0};
}

/// f(g(x)).
template <class R>
Poly<R> compose(const Poly<R>& f, const Poly<R>& g) {
    Poly<R> acc;
    for (size_t i = f.c.size(); i-- > 0;) {
        acc = acc * g + poly_of<R>({f.c[i]});
    }
    return acc;
}

/// x^e mod m over a field.
template <class R>
Poly<R> powmod_poly(Poly<R> base, Int e, const Poly<R>& m) {
    base = pmod(base, m);
    Poly<R> acc = poly_of<R>({one_like(m.lead())});
    while (e > 0) {
        if ((e & 1) != 0) acc = pmod(acc * base, m);
        base = pmod(base * base, m);
        e >>= 1;
    }
    return acc;
}

// ---- integer / rational coefficient specifics ----

inline Int content(const Poly<Int>& f) {
    Int g = 0;
    for (const auto& x : f.c) g = gcd(g, x);
    return g;
}

inline Poly<Int> primitive_part(const Poly<Int>& f) {
    Int ct = content(f);
    if (ct == 0) return f;
    std::vector<Int> c = f.c;
    for (auto& x : c) x /= ct;
    return Poly<Int>(std::move(c));
}

inline Poly<Rat> to_rat(const Poly<Int>& f) {
    std::vector<Rat> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.emplace_back(x);
    return Poly<Rat>(std::move(c));
}

/// Clear denominators: returns (g, d) with g integral primitive-scaled and f = g / d.
inline std::pair<Poly<Int>, Int> clear_denominators(const Poly<Rat>& f) {
    Int d = 1;
    for (const auto& x : f.c) d = lcm(d, den(x));
    std::vector<Int> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(num(x) * (d / den(x)));
    return {Poly<Int>(std::move(c)), d};
}

/// Reverse with padding to fixed degree n: returns x^n f(1/x) as a polynomial.
template <class R>
Poly<R> reverse_poly(const Poly<R>& f, int n) {
    if (f.degree() > n) throw input_error("reverse_poly: degree exceeds padding");
    if (f.is_zero()) return f;
    std::vector<R> c(n + 1, zero_like(f.c[0]));
    for (int i = 0; i <= f.degree(); ++i) c[n - i] = f.c[i];
    return Poly<R>(std::move(c));
}

/// Resultant of nonzero integer polynomials, exact, via fraction-free Gaussian
/// elimination (Bareiss) on the Sylvester matrix.
inline Int resultant(const Poly<Int>& f, const Poly<Int>& g) {
    int m = f.degree(), n = g.degree();
    if (m < 0 || n < 0) return 0;
    if (m == 0) return boost::multiprecision::pow(f.c[0], n);
    if (n == 0) return boost::multiprecision::pow(g.c[0], m);
    int N = m + n;
    std::vector<std::vector<Int>> a(N, std::vector<Int>(N, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) a[i][i + j] = f.c[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) a[n + i][i + j] = g.c[n - j];
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < N - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < N; ++i)
                if (a[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < N; ++i)
            for (int j = k + 1; j < N; ++j)
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign > 0 ? a[N - 1][N - 1] : -a[N - 1][N - 1];
}

} // namespace g2
