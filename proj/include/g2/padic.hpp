#pragma once

#include "g2/fp.hpp"
#include "g2/numeric.hpp"
#include "g2/poly.hpp"

#include <string>

namespace g2 {

/// Truncated element of Q_p: value = unit * p^val known modulo p^aprec
/// (absolute precision), plus an exact-zero sentinel.  A computed zero that is
/// only known to vanish to the working precision is stored with val == aprec
/// and unit == 0 ("weak zero").
struct PadicNumber {
    std::uint64_t p = 0;
    bool exact_zero = false;
    long val = 0;    // valuation (val == aprec for a weak zero)
    long aprec = 0;  // known modulo p^aprec
    Int unit = 0;    // in [0, p^(aprec-val)), prime to p unless weak zero

    PadicNumber() = default;

    static Int ppow(std::uint64_t p, long k) {
        if (k < 0) throw input_error("negative p-power");
        return boost::multiprecision::pow(Int(p), static_cast<unsigned>(k));
    }

    static PadicNumber zero(std::uint64_t p) {
        PadicNumber x;
        x.p = p;
        x.exact_zero = true;
        return x;
    }
    static PadicNumber weak_zero(std::uint64_t p, long aprec) {
        PadicNumber x;
        x.p = p;
        x.val = aprec;
        x.aprec = aprec;
        return x;
    }
    /// Exact rational carried to absolute precision aprec.
    static PadicNumber from_rat(const Rat& r, std::uint64_t p, long aprec) {
        if (r == 0) return zero(p);
        PadicNumber x;
        x.p = p;
        x.val = val_p(r, Int(p));
        x.aprec = aprec;
        if (x.val >= aprec) return weak_zero(p, aprec);
        Int n = num(r), d = den(r);
        long v = x.val;
        while (v > 0) { n /= p; --v; }
        while (v < 0) { d /= p; ++v; }
        Int m = ppow(p, x.aprec - x.val);
        x.unit = mod_pos(n, m) * mod_inverse(d, m) % m;
        return x;
    }
    static PadicNumber from_int(const Int& n, std::uint64_t p, long aprec) {
        return from_rat(Rat(n), p, aprec);
    }

    bool is_exact_zero() const { return exact_zero; }
    /// Indistinguishable from zero at the stored precision.
    bool is_weak_zero() const { return exact_zero || unit == 0; }
    long rel() const { return aprec - val; }

    /// Integer congruent to the value mod p^k (requires val >= 0, k <= aprec).
    Int lift(long k) const {
        if (exact_zero) return 0;
        if (val < 0) throw input_error("lift of negative-valuation p-adic");
        if (k > aprec) throw input_error("lift beyond known precision");
        return mod_pos(unit * ppow(p, val), ppow(p, k));
    }

    PadicNumber operator+(const PadicNumber& o) const {
        if (exact_zero) return o;
        if (o.exact_zero) return *this;
        if (p != o.p) throw input_error("mixed primes in p-adic arithmetic");
        long a = std::min(aprec, o.aprec);
        long v = std::min(val, o.val);
        if (v >= a) return weak_zero(p, a);
        Int m = ppow(p, a - v);
        Int s = (unit == 0 ? Int(0) : unit * ppow(p, val - v)) +
                (o.unit == 0 ? Int(0) : o.unit * ppow(p, o.val - v));
        s = mod_pos(s, m);
        if (s == 0) return weak_zero(p, a);
        PadicNumber x;
        x.p = p;
        long extra = 0;
        while (s % p == 0) { s /= p; ++extra; }
        x.val = v + extra;
        x.aprec = a;
        if (x.val >= a) return weak_zero(p, a);
        x.unit = mod_pos(s, ppow(p, a - x.val));
        return x;
    }
    PadicNumber operator-() const {
        if (is_weak_zero()) return *this;
        PadicNumber x = *this;
        x.unit = ppow(p, rel()) - unit;
        return x;
    }
    PadicNumber operator-(const PadicNumber& o) const { return *this + (-o); }
    PadicNumber operator*(const PadicNumber& o) const {
        if (exact_zero || o.exact_zero) return zero(exact_zero ? p : o.p);
        if (p != o.p) throw input_error("mixed primes in p-adic arithmetic");
        long r = std::min(rel(), o.rel());
        if (unit == 0 || o.unit == 0) return weak_zero(p, val + o.val + std::min(rel(), o.rel()));
        PadicNumber x;
        x.p = p;
        x.val = val + o.val;
        x.aprec = x.val + r;
        x.unit = mod_pos(unit * o.unit, ppow(p, r));
        if (x.unit == 0) return weak_zero(p, x.aprec); // r == 0 corner
        return x;
    }
    PadicNumber inv() const {
        if (is_weak_zero()) throw input_error("inverse of (weak) zero p-adic");
        PadicNumber x;
        x.p = p;
        x.val = -val;
        x.aprec = x.val + rel();
        x.unit = mod_inverse(unit, ppow(p, rel()));
        return x;
    }
    PadicNumber operator/(const PadicNumber& o) const { return *this * o.inv(); }

    PadicNumber zero_like() const { return zero(p); }
    PadicNumber one_like(long aprec_) const { return from_rat(Rat(1), p, aprec_); }

    bool is_unit_square() const {
        if (p == 2) throw input_error("is_unit_square: p must be odd");
        return !is_weak_zero() && val % 2 == 0 && legendre(mod_u64(unit, p), p) == 1;
    }

    /// Hensel square root for odd p: needs even valuation and square unit.
    PadicNumber sqrt() const {
        if (exact_zero) return *this;
        if (p == 2) throw input_error("p-adic sqrt: p must be odd");
        if (is_weak_zero() || val % 2 != 0 || legendre(mod_u64(unit, p), p) != 1)
            throw input_error("p-adic sqrt: not a unit-square times even p-power");
        long r = rel();
        Int m = ppow(p, r);
        Int y = Int(sqrt_mod_p(unit, p));
        long known = 1;
        while (known < r) {
            known = std::min(2 * known, r);
            Int mk = ppow(p, known);
            y = mod_pos((y + mod_pos(unit, mk) * mod_inverse(y, mk)) % mk *
                            mod_inverse(Int(2), mk),
                        mk);
        }
        PadicNumber x;
        x.p = p;
        x.val = val / 2;
        x.aprec = x.val + r;
        x.unit = mod_pos(y, m);
        return x;
    }

    /// Residue in F_p for val >= 0 (zero when val > 0).
    Fp residue() const {
        if (!is_weak_zero() && val < 0) throw input_error("residue of negative-valuation p-adic");
        if (is_weak_zero() || val > 0) return Fp(0, p);
        return Fp::of(unit, p);
    }

    std::string str() const {
        if (exact_zero) return "0 (exact)";
        if (unit == 0) return "O(" + std::to_string(p) + "^" + std::to_string(aprec) + ")";
        return unit.str() + "*" + std::to_string(p) + "^" + std::to_string(val) + " + O(" +
               std::to_string(p) + "^" + std::to_string(aprec) + ")";
    }
};

/// Element a + b*w of the quadratic extension Q_p(w), w^2 = D, for D a (possibly
/// non-unit) p-adic with no square root in Q_p.  Covers both the unramified and
/// the ramified case; valuations live in (1/2)Z and are tracked doubled.
struct PadicQuad {
    PadicNumber a, b, D;

    PadicQuad() = default;
    PadicQuad(PadicNumber a_, PadicNumber b_, PadicNumber D_) : a(a_), b(b_), D(D_) {}
    static PadicQuad embed(const PadicNumber& x, const PadicNumber& D_) {
        return PadicQuad(x, PadicNumber::zero(x.p), D_);
    }

    PadicQuad operator+(const PadicQuad& o) const { return PadicQuad(a + o.a, b + o.b, D); }
    PadicQuad operator-() const { return PadicQuad(-a, -b, D); }
    PadicQuad operator-(const PadicQuad& o) const { return *this + (-o); }
    PadicQuad operator*(const PadicQuad& o) const {
        return PadicQuad(a * o.a + D * b * o.b, a * o.b + b * o.a, D);
    }
    PadicQuad conj() const { return PadicQuad(a, -b, D); }
    PadicNumber trace() const { return a + a; }
    PadicNumber norm() const { return a * a - D * b * b; }
    PadicQuad inv() const {
        PadicNumber n = norm();
        PadicQuad c = conj();
        PadicNumber ni = n.inv();
        return PadicQuad(c.a * ni, c.b * ni, D);
    }
    bool is_weak_zero() const { return a.is_weak_zero() && b.is_weak_zero(); }

    /// Doubled valuation: min(2 v(a), 2 v(b) + v(D)); requires not weak zero.
    long twice_val() const {
        if (is_weak_zero()) throw input_error("valuation of (weak) zero");
        long ta = a.is_weak_zero() ? std::numeric_limits<long>::max() : 2 * a.val;
        long tb = b.is_weak_zero() ? std::numeric_limits<long>::max() : 2 * b.val + D.val;
        return std::min(ta, tb);
    }

    /// Residue in F_{p^2} for the unramified case (v(D) = 0, D nonsquare mod p);
    /// requires nonnegative valuation.
    Fp2 residue_fp2() const {
        std::uint64_t p = a.p;
        if (D.val != 0) throw input_error("residue_fp2: ramified extension");
        std::uint64_t n = least_nonresidue(p);
        // D = n * m^2 mod p
        std::uint64_t m = sqrt_mod_p(Int(mulmod(mod_u64(D.unit, p), mod_inverse(Int(n), Int(p)).convert_to<std::uint64_t>(), p)), p);
        Fp br = b.residue();
        return Fp2(a.residue(), br * Fp(m, p), n);
    }
};

/// Evaluate a rational-coefficient polynomial at a p-adic point.
inline PadicNumber eval_poly_padic(const Poly<Rat>& f, const PadicNumber& x) {
    PadicNumber acc = PadicNumber::zero(x.p);
    long work = x.aprec + std::max<long>(0, -x.val) * (f.degree() > 0 ? f.degree() : 0) + 4;
    for (size_t i = f.c.size(); i-- > 0;)
        acc = acc * x + PadicNumber::from_rat(f.c[i], x.p, work);
    return acc;
}

inline PadicQuad eval_poly_padic(const Poly<Rat>& f, const PadicQuad& x) {
    std::uint64_t p = x.a.p;
    PadicQuad acc = PadicQuad::embed(PadicNumber::zero(p), x.D);
    long base = std::max(x.a.aprec, x.b.aprec);
    long work = base + 6;
    for (size_t i = f.c.size(); i-- > 0;)
        acc = acc * x + PadicQuad::embed(PadicNumber::from_rat(f.c[i], p, work), x.D);
    return acc;
}

} // namespace g2
