#pragma once

#include "g2/padic.hpp"

#include <vector>

namespace g2 {

/// Truncated power series in one variable t over Q_p: coefficients c[0..len-1]
/// for t^0..t^(len-1); terms of degree >= len are dropped and accounted for by
/// the evaluation tail bound.
struct FormalSeries {
    std::uint64_t p = 0;
    std::vector<PadicNumber> c;

    FormalSeries() = default;
    FormalSeries(std::uint64_t p_, size_t len) : p(p_), c(len, PadicNumber::zero(p_)) {}

    size_t len() const { return c.size(); }
    PadicNumber at(size_t i) const { return i < c.size() ? c[i] : PadicNumber::zero(p); }
};

inline FormalSeries series_from_poly(const Poly<Rat>& f, std::uint64_t p, size_t len, long aprec) {
    FormalSeries s(p, len);
    for (size_t i = 0; i < len && i < f.c.size(); ++i)
        s.c[i] = PadicNumber::from_rat(f.c[i], p, aprec);
    return s;
}

inline FormalSeries series_add(const FormalSeries& a, const FormalSeries& b) {
    FormalSeries s(a.p, std::min(a.len(), b.len()));
    for (size_t i = 0; i < s.len(); ++i) s.c[i] = a.at(i) + b.at(i);
    return s;
}

inline FormalSeries series_neg(const FormalSeries& a) {
    FormalSeries s = a;
    for (auto& x : s.c) x = -x;
    return s;
}

inline FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b) {
    FormalSeries s(a.p, std::min(a.len(), b.len()));
    for (size_t i = 0; i < s.len(); ++i) {
        PadicNumber acc = PadicNumber::zero(a.p);
        for (size_t j = 0; j <= i; ++j) acc = acc + a.at(j) * b.at(i - j);
        s.c[i] = acc;
    }
    return s;
}

inline FormalSeries series_scalar(const PadicNumber& k, const FormalSeries& a) {
    FormalSeries s = a;
    for (auto& x : s.c) x = k * x;
    return s;
}

/// 1/s for s with unit constant term.
inline FormalSeries series_inverse(const FormalSeries& a) {
    if (a.len() == 0 || a.at(0).is_weak_zero())
        throw input_error("series_inverse: constant term not a unit");
    FormalSeries s(a.p, a.len());
    PadicNumber i0 = a.at(0).inv();
    s.c[0] = i0;
    for (size_t n = 1; n < s.len(); ++n) {
        PadicNumber acc = PadicNumber::zero(a.p);
        for (size_t k = 1; k <= n; ++k) acc = acc + a.at(k) * s.c[n - k];
        s.c[n] = -(acc * i0);
    }
    return s;
}

/// Square root with constant term a unit square; p odd.  Branch with
/// sqrt(c0) chosen by Hensel from the mod-p square root.
inline FormalSeries series_sqrt(const FormalSeries& a) {
    if (a.p == 2) throw input_error("series_sqrt: p must be odd");
    if (a.len() == 0 || !a.at(0).is_unit_square())
        throw input_error("series_sqrt: constant term not a unit square");
    FormalSeries s(a.p, a.len());
    s.c[0] = a.at(0).sqrt();
    PadicNumber half_inv_y0 = (s.c[0] + s.c[0]).inv();
    for (size_t n = 1; n < s.len(); ++n) {
        PadicNumber acc = a.at(n);
        for (size_t k = 1; k + 1 <= n; ++k) acc = acc - s.c[k] * s.c[n - k];
        s.c[n] = acc * half_inv_y0;
    }
    return s;
}

/// Termwise antiderivative with zero constant term: t^k -> t^(k+1)/(k+1).
inline FormalSeries series_integrate(const FormalSeries& a) {
    FormalSeries s(a.p, a.len() + 1);
    for (size_t k = 0; k < a.len(); ++k) {
        PadicNumber d = PadicNumber::from_rat(Rat(1, Int(k + 1)), a.p,
                                              a.at(k).aprec + 8);
        s.c[k + 1] = a.at(k) * d;
    }
    return s;
}

inline PadicNumber clamp_prec(PadicNumber x, long aprec) {
    if (x.is_exact_zero()) {
        // an exact zero evaluated with a truncated tail is only zero to the bound
        return PadicNumber::weak_zero(x.p, aprec);
    }
    if (x.aprec <= aprec) return x;
    x.aprec = aprec;
    if (x.val >= aprec) return PadicNumber::weak_zero(x.p, aprec);
    x.unit = mod_pos(x.unit, PadicNumber::ppow(x.p, x.aprec - x.val));
    if (x.unit == 0) return PadicNumber::weak_zero(x.p, aprec);
    return x;
}

/// Precision floor contributed by the dropped tail of a series whose stored part
/// has coefficient valuations >= -maxdiv, evaluated at t with v(t) >= tval >= 1.
inline long series_tail_bound(size_t len, long tval, long maxdiv) {
    return static_cast<long>(len) * tval - maxdiv;
}

/// Evaluate at a p-adic t with v(t) >= 1; coeff_floor is a lower bound for the
/// valuation of every dropped coefficient (0 for integral series, negative after
/// integration).
inline PadicNumber series_eval(const FormalSeries& a, const PadicNumber& t, long coeff_floor = 0) {
    if (t.is_exact_zero()) return a.at(0);
    if (t.is_weak_zero()) return clamp_prec(a.at(0), t.aprec + coeff_floor);
    if (t.val < 1) throw input_error("series_eval: |t| must be < 1");
    PadicNumber acc = PadicNumber::zero(a.p);
    for (size_t i = a.len(); i-- > 0;) acc = acc * t + a.c[i];
    return clamp_prec(acc, series_tail_bound(a.len(), t.val, -coeff_floor));
}

inline long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

/// Same over the quadratic extension (v(t) >= 1/2 allowed, tracked doubled).
inline PadicQuad series_eval(const FormalSeries& a, const PadicQuad& t, long coeff_floor = 0) {
    if (t.a.is_exact_zero() && t.b.is_exact_zero()) return PadicQuad::embed(a.at(0), t.D);
    if (t.is_weak_zero())
        return PadicQuad::embed(clamp_prec(a.at(0), std::min(t.a.aprec, t.b.aprec) + coeff_floor), t.D);
    long tv2 = t.twice_val();
    if (tv2 < 1) throw input_error("series_eval: |t| must be < 1");
    PadicQuad acc = PadicQuad::embed(PadicNumber::zero(a.p), t.D);
    for (size_t i = a.len(); i-- > 0;)
        acc = acc * t + PadicQuad::embed(a.c[i], t.D);
    // tail terms have doubled valuation >= bound2; split per component since the
    // b-component carries half the valuation of w when D is ramified
    long bound2 = static_cast<long>(a.len()) * tv2 + 2 * coeff_floor;
    acc.a = clamp_prec(acc.a, floor_div(bound2, 2));
    acc.b = clamp_prec(acc.b, floor_div(bound2 - t.D.val, 2));
    return acc;
}

/// Substitute a zero-constant-term series z into a polynomial g (Horner).
inline FormalSeries series_substitute_poly(const Poly<Rat>& g, const FormalSeries& z, long aprec) {
    FormalSeries acc(z.p, z.len());
    for (size_t i = g.c.size(); i-- > 0;) {
        acc = series_mul(acc, z);
        acc.c[0] = acc.c[0] + PadicNumber::from_rat(g.c[i], z.p, aprec);
    }
    return acc;
}

} // namespace g2
