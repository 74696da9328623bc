#pragma once
// Divisor-class arithmetic on the Jacobian of a genus-2 curve y^2 = f(x),
// deg f in {5, 6}, over a field of characteristic != 2 (exact rationals or
// a prime field).  Classes are held in Mumford form (a, b) plus an infinity
// tag that pins down the points at infinity entering the reduced divisor:
//
//   deg a = 2, tag  0 : [div(a,b) - D_inf]
//   deg a = 1, tag +-1: [P + inf^tag - D_inf]            (split sextic only)
//   deg a = 0, tag +-1: [2*inf^tag - D_inf]              (split sextic only)
//   deg a = 0, tag  0 : identity
//
// where D_inf = inf^+ + inf^- for a sextic and 2*inf for a quintic, and
// inf^+ is the branch with y/x^3 -> +sqrt(lc f).  Each class has exactly one
// such representative, so equality is coefficient equality.

#include "poly.hpp"
#include "numeric.hpp"
#include "fp.hpp"
#include "curve.hpp"

#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace g2 {

inline bool field_sqrt(const Rat& x, Rat& out) {
    if (x < 0) return false;
    bool en = false, ed = false;
    Int rn = isqrt(num(x), &en);
    Int rd = isqrt(den(x), &ed);
    if (!en || !ed) return false;
    out = Rat(rn) / Rat(rd);
    return true;
}

inline bool field_sqrt(const Fp& x, Fp& out) {
    if (x.p == 2) throw input_error("jacobian arithmetic needs characteristic != 2");
    if (x.is_zero()) { out = x; return true; }
    if (!x.is_square()) return false;
    out = x.sqrt();
    return true;
}

/// Mumford representative of a divisor class; canonical per the table above.
template <class R>
struct MumfordPoint {
    Poly<R> a, b;
    int inf_tag = 0;

    bool operator==(const MumfordPoint& o) const {
        return inf_tag == o.inf_tag && a == o.a && b == o.b;
    }
    bool operator!=(const MumfordPoint& o) const { return !(*this == o); }
};

/// Precomputed per-curve data for Jacobian arithmetic over the field R.
template <class R>
struct JacModel {
    Poly<R> f;
    bool even = false;   // deg f == 6
    bool split = false;  // even and lc(f) a square in the field
    R s6;                // sqrt(lc f) when split
    Poly<R> vpart;       // s6 * q, q monic cubic with deg(f - vpart^2) <= 2
};

template <class R>
JacModel<R> make_jac_model(const Poly<R>& f) {
    long d = f.degree();
    if (d != 5 && d != 6) throw input_error("jacobian: deg f must be 5 or 6");
    R one = one_like(f.lead());
    R two = one + one;
    if (elem_is_zero(two)) throw input_error("jacobian arithmetic needs characteristic != 2");
    if (gcd_poly(f, derivative(f)).degree() != 0)
        throw input_error("jacobian: f must be squarefree");
    JacModel<R> m;
    m.f = f;
    m.even = (d == 6);
    if (m.even) {
        R s;
        m.split = field_sqrt(f.lead(), s);
        if (m.split) {
            m.s6 = s;
            // monic cubic q with f - lc*q^2 of degree <= 2, fixed by matching
            // the x^5, x^4, x^3 coefficients top-down.
            R c6 = f.lead();
            R half = inv_of(two);
            R c6i = inv_of(c6);
            R q2 = f.c[5] * half * c6i;
            R q1 = (f.c[4] * c6i - q2 * q2) * half;
            R q0 = (f.c[3] * c6i - two * q2 * q1) * half;
            m.vpart = s * Poly<R>(std::vector<R>{q0, q1, q2, one});
        }
    }
    return m;
}

inline JacModel<Rat> make_jac_model(const HyperCurve& C) { return make_jac_model(to_rat(C.f)); }
inline JacModel<Fp> make_jac_model(const CurveFp& C) { return make_jac_model(C.f); }

template <class R>
MumfordPoint<R> mumford_identity(const JacModel<R>& m) {
    MumfordPoint<R> d;
    d.a = poly_of<R>({one_like(m.f.lead())});
    d.b = Poly<R>{};
    d.inf_tag = 0;
    return d;
}

template <class R>
bool is_identity(const MumfordPoint<R>& d) {
    return d.a.degree() == 0 && d.b.is_zero() && d.inf_tag == 0;
}

/// Every representation invariant except a | b^2 - f (which needs ring
/// arithmetic); throws input_error on violation.
template <class R>
void validate_point_structure(const MumfordPoint<R>& d, const JacModel<R>& m) {
    long da = d.a.degree();
    if (da < 0 || da > 2) throw input_error("mumford: deg a must be 0, 1 or 2");
    if (!elem_is_zero(d.a.lead() - one_like(d.a.lead())))
        throw input_error("mumford: a must be monic");
    if (d.b.degree() >= da) throw input_error("mumford: deg b must be < deg a");
    if (da == 2 && d.inf_tag != 0) throw input_error("mumford: deg-2 state carries no tag");
    if (da == 1 && (m.even ? (d.inf_tag != 1 && d.inf_tag != -1) : d.inf_tag != 0))
        throw input_error("mumford: invalid tag for deg-1 state");
    if (da == 0) {
        if (!d.b.is_zero()) throw input_error("mumford: deg-0 state needs b = 0");
        if (d.inf_tag != 0 && !m.even) throw input_error("mumford: tagged state on a quintic model");
        if (d.inf_tag != 0 && d.inf_tag != 1 && d.inf_tag != -1) throw input_error("mumford: bad tag");
    }
    if ((d.inf_tag != 0 || (m.even && da == 1)) && !m.split)
        throw input_error("mumford: infinity tags need a rational square leading coefficient");
    if (da > 0 && !pmod(d.b * d.b - m.f, d.a).is_zero())
        throw input_error("mumford: a does not divide b^2 - f");
}

template <class R>
MumfordPoint<R> cantor_neg(const MumfordPoint<R>& d, const JacModel<R>& m) {
    MumfordPoint<R> r;
    r.a = d.a;
    r.b = d.a.degree() > 0 ? pmod(-d.b, d.a) : Poly<R>{};
    r.inf_tag = m.even ? -d.inf_tag : 0;
    return r;
}

namespace detail {

/// Divisor state mid-reduction: [div(A,B) + np*inf^+ + nm*inf^- - k*D_inf]
/// with 2k = deg A + np + nm (quintic: np = nm = copies of inf, paired).
template <class R>
struct JacState {
    Poly<R> A, B;
    long np = 0, nm = 0;
};

template <class R>
void shift_infinity(JacState<R>& s) {
    long c = std::min(s.np, s.nm);
    s.np -= c;
    s.nm -= c;
}

/// (np, nm) multiplicities of the canonical representative of d.  Quintic
/// models never track infinity counts (reduction ignores them).
template <class R>
std::pair<long, long> infinity_counts(const MumfordPoint<R>& d, const JacModel<R>& m) {
    if (!m.even) return {0, 0};
    long k = 2 - d.a.degree();
    if (d.inf_tag > 0) return {k, 0};
    if (d.inf_tag < 0) return {0, k};
    return {k / 2, k / 2};
}

/// One even-model reduction step using the function y - W, W congruent to B
/// mod A.  Exact bookkeeping of zero/pole orders at the two infinite points.
template <class R>
void reduction_step(JacState<R>& s, const JacModel<R>& m, const Poly<R>& W) {
    Poly<R> F2 = m.f - W * W;
    if (F2.is_zero()) throw std::logic_error("jacobian reduction: f is a square");
    auto [q, r] = divmod(F2, s.A);
    if (!r.is_zero()) throw std::logic_error("jacobian reduction: inexact step division");
    long delta = F2.degree();
    long ep = -3, em = -3;
    if (m.split) {
        R w3 = W.coeff(3, m.s6);
        R dplus = w3 - m.s6;
        R dminus = w3 + m.s6;
        if (elem_is_zero(dplus)) ep = 3 - delta;
        if (elem_is_zero(dminus)) em = 3 - delta;
    }
    s.A = monic(q);
    s.B = s.A.degree() > 0 ? pmod(-W, s.A) : Poly<R>{};
    s.np -= ep;
    s.nm -= em;
    shift_infinity(s);
}

template <class R>
MumfordPoint<R> reduce_state(JacState<R> s, const JacModel<R>& m) {
    MumfordPoint<R> d;
    if (!m.even) {
        // classical reduction: y - B swaps [div(A,B)] for its negation's
        // complement, dropping the degree until deg A <= 2.
        for (int guard = 0; s.A.degree() > 2; ++guard) {
            if (guard > 8) throw std::logic_error("jacobian reduction failed to terminate");
            Poly<R> F2 = m.f - s.B * s.B;
            if (F2.is_zero()) throw std::logic_error("jacobian reduction: f is a square");
            auto [q, r] = divmod(F2, s.A);
            if (!r.is_zero()) throw std::logic_error("jacobian reduction: inexact step division");
            s.A = monic(q);
            s.B = s.A.degree() > 0 ? pmod(-s.B, s.A) : Poly<R>{};
        }
        d.a = s.A;
        d.b = s.B;
        d.inf_tag = 0;
        return d;
    }
    shift_infinity(s);
    for (int guard = 0;; ++guard) {
        if (guard > 8) throw std::logic_error("jacobian reduction failed to terminate");
        long T = s.A.degree() + s.np + s.nm;
        if (T <= 2) break;
        Poly<R> W;
        if (s.np == s.nm || s.A.degree() >= 4) {
            W = s.B; // plain step; tags stay balanced
        } else {
            if (!m.split)
                throw std::logic_error("jacobian reduction: tagged state without split model");
            int eps = s.np > s.nm ? 1 : -1;
            Poly<R> V = eps > 0 ? m.vpart : -m.vpart;
            W = V + (s.A.degree() > 0 ? pmod(s.B - V, s.A) : Poly<R>{});
        }
        reduction_step(s, m, W);
    }
    d.a = s.A;
    d.b = s.B;
    long da = s.A.degree();
    if (da == 2) {
        if (s.np != 0 || s.nm != 0)
            throw std::logic_error("jacobian reduction: unbalanced deg-2 state");
        d.inf_tag = 0;
    } else if (da == 1) {
        if (s.np + s.nm != 1) throw std::logic_error("jacobian reduction: bad deg-1 state");
        d.inf_tag = s.np > 0 ? 1 : -1;
    } else {
        if (s.np == 2 && s.nm == 0) d.inf_tag = 1;
        else if (s.np == 0 && s.nm == 2) d.inf_tag = -1;
        else if (s.np == 0 && s.nm == 0) d.inf_tag = 0;
        else throw std::logic_error("jacobian reduction: bad deg-0 state");
    }
    return d;
}

/// Cantor composition: semi-reduced (A, B) for the affine parts, infinity
/// multiplicities added.  d = gcd(a1, a2, b1 + b2) cancels involuted pairs.
template <class R>
JacState<R> compose(const MumfordPoint<R>& d1, const MumfordPoint<R>& d2, const JacModel<R>& m) {
    JacState<R> s;
    auto [c1p, c1m] = infinity_counts(d1, m);
    auto [c2p, c2m] = infinity_counts(d2, m);
    s.np = c1p + c2p;
    s.nm = c1m + c2m;
    auto [e, u, v] = xgcd_poly(d1.a, d2.a);
    auto [d, w, s3] = xgcd_poly(e, d1.b + d2.b);
    Poly<R> s1 = w * u, s2 = w * v;
    auto [a1d, r1] = divmod(d1.a, d);
    auto [a2d, r2] = divmod(d2.a, d);
    if (!r1.is_zero() || !r2.is_zero())
        throw std::logic_error("jacobian composition: gcd does not divide");
    s.A = a1d * a2d;
    Poly<R> numer = s1 * d1.a * d2.b + s2 * d2.a * d1.b + s3 * (d1.b * d2.b + m.f);
    auto [bq, br] = divmod(numer, d);
    if (!br.is_zero()) throw std::logic_error("jacobian composition: inexact numerator division");
    s.B = s.A.degree() > 0 ? pmod(bq, s.A) : Poly<R>{};
    return s;
}

template <class R>
void assert_semi_reduced(const MumfordPoint<R>& d, const JacModel<R>& m, const char* what) {
    if (d.a.degree() > 0 && !pmod(d.b * d.b - m.f, d.a).is_zero())
        throw std::logic_error(std::string(what) + ": result violates a | b^2 - f");
}

} // namespace detail

/// Group law on Pic^0.  Inputs are validated against the model; the output
/// representative is checked to satisfy a | b^2 - f.
template <class R>
MumfordPoint<R> cantor_add(const MumfordPoint<R>& d1, const MumfordPoint<R>& d2, const JacModel<R>& m) {
    validate_point(d1, m);
    validate_point(d2, m);
    if (is_identity(d1)) return d2;
    if (is_identity(d2)) return d1;
    MumfordPoint<R> r = detail::reduce_state(detail::compose(d1, d2, m), m);
    detail::assert_semi_reduced(r, m, "cantor_add");
    return r;
}

/// n-fold sum via double-and-add; scalar_mul(0, .) = identity,
/// scalar_mul(-n, D) = -scalar_mul(n, D).
template <class R>
MumfordPoint<R> scalar_mul(const Int& n, const MumfordPoint<R>& d, const JacModel<R>& m) {
    validate_point(d, m);
    if (n == 0 || is_identity(d)) return mumford_identity(m);
    if (n < 0) return cantor_neg(scalar_mul(-n, d, m), m);
    MumfordPoint<R> acc = mumford_identity(m);
    for (long i = static_cast<long>(boost::multiprecision::msb(n)); i >= 0; --i) {
        acc = cantor_add(acc, acc, m);
        if (boost::multiprecision::bit_test(n, static_cast<unsigned>(i)))
            acc = cantor_add(acc, d, m);
    }
    detail::assert_semi_reduced(acc, m, "scalar_mul");
    return acc;
}

} // namespace g2
