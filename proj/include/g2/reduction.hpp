// Reduction of divisor classes modulo a prime of good reduction.
//
// A class over Q in Mumford form reduces to a class over F_p.  The a- and
// b-polynomials may have p-powers in their denominators; those encode support
// points whose reduction escapes to infinity.  The case split is driven by
// the p-adic valuations of a's coefficients (monic x^2 + a1 x + a0):
//
//   v(a1) >= 0 and v(a0) >= 0   both roots reduce to affine points; the
//                               symmetric functions y1+y2, y1*y2, x2*y1+x1*y2
//                               of the y-coordinates are p-integral and
//                               determine the reduced point pair over F_{p^2};
//   v(a1) <  0 and v(a0) >= v(a1)   exactly one root escapes; the integral
//                               root is Hensel-lifted from the cleared
//                               polynomial p^K a(x), and the escaping branch
//                               is the reduction of b1/a1^2 = lim y/x^3;
//   otherwise                   both roots escape; the products y1*y2/(x1*x2)^3
//                               and (x2^3*y1 + x1^3*y2)/(x1*x2)^3 decide
//                               between the identity (opposite branches) and
//                               a tagged infinity class (same branch).
//
// When p divides the leading coefficient of a sextic model the reduced model
// is a quintic (single degree drop); every infinity contribution collapses to
// the lone point at infinity, so escapes land on the identity or untagged
// classes.  Tags translate through sigma = +-1, comparing the square root of
// the leading coefficient chosen over Q with the one chosen over F_p.

#pragma once

#include <g2/curve.hpp>
#include <g2/fp.hpp>
#include <g2/mumford.hpp>
#include <g2/numeric.hpp>
#include <g2/poly.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace g2 {

struct ReductionMap {
    std::uint64_t p = 0;
    JacModel<Rat> source;
    JacModel<Fp> target;
    bool drop = false; // sextic source, quintic target
    int sigma = 1;     // orientation between the split square roots
};

inline ReductionMap make_reduction(const HyperCurve& C, std::uint64_t p) {
    if (!C.good_reduction(p)) throw input_error("reduction: prime of bad reduction");
    ReductionMap R;
    R.p = p;
    R.source = make_jac_model(C);
    R.target = make_jac_model(C.reduce(p));
    R.drop = R.source.even && !R.target.even;
    if (R.source.split && R.target.even) {
        if (!R.target.split)
            throw std::logic_error("reduction: rational square root vanished mod p");
        Fp sbar = fp_of_rat(R.source.s6, p);
        if (sbar == R.target.s6) R.sigma = 1;
        else if (sbar == -R.target.s6) R.sigma = -1;
        else throw std::logic_error("reduction: leading square roots disagree");
    }
    return R;
}

namespace detail {

inline long vp_or_max(const Rat& r, std::uint64_t p) {
    if (r == 0) return 1L << 30;
    return val_p(r, Int(p));
}

inline int branch_sign(const Fp& limit, const JacModel<Fp>& m) {
    if (!m.split)
        throw std::logic_error("reduction: escape toward a non-rational infinity branch");
    if (limit == m.s6) return 1;
    if (limit == -m.s6) return -1;
    throw std::logic_error("reduction: escape limit is not a square root of the "
                           "leading coefficient");
}

inline Int rat_mod(const Rat& r, const Int& M) {
    Int n = mod_pos(num(r) % M, M);
    Int d = den(r) % M;
    return n * mod_inverse(d, M) % M;
}

/// Canonical class of [P1 + P2 - D_inf] for a Galois-stable affine point
/// pair over F_{p^2}.
inline MumfordPoint<Fp> class_from_pair(const Fp2& x1, const Fp2& y1, const Fp2& x2,
                                        const Fp2& y2, const JacModel<Fp>& m) {
    std::uint64_t p = m.f.lead().p;
    if (x1 == x2 && y1 == -y2) return mumford_identity(m); // P2 = invol(P1)
    Fp one(1, p);
    MumfordPoint<Fp> d;
    if (x1 == x2 && y1 == y2) {
        if (!x1.in_base() || !y1.in_base())
            throw std::logic_error("reduction: doubled point off the base field");
        Fp x0 = x1.a, y0 = y1.a;
        Fp slope = eval(derivative(m.f), x0) * inv_of(y0 + y0);
        d.a = Poly<Fp>{{x0 * x0, -(x0 + x0), one}};
        d.b = Poly<Fp>{{y0 - slope * x0, slope}};
    } else {
        Fp2 slope = (y1 - y2) * (x1 - x2).inv();
        Fp2 b0 = y1 - slope * x1;
        Fp2 a1 = -(x1 + x2), a0 = x1 * x2;
        if (!slope.in_base() || !b0.in_base() || !a1.in_base() || !a0.in_base())
            throw std::logic_error("reduction: point pair is not Galois-stable");
        d.a = Poly<Fp>{{a0.a, a1.a, one}};
        d.b = Poly<Fp>{{b0.a, slope.a}};
    }
    validate_point(d, m);
    return d;
}

} // namespace detail

inline MumfordPoint<Fp> reduce_mod_p(const MumfordPoint<Rat>& d, const ReductionMap& R) {
    validate_point(d, R.source);
    const std::uint64_t p = R.p;
    const JacModel<Fp>& T = R.target;
    MumfordPoint<Fp> id = mumford_identity(T);
    const Rat zero(0);
    long da = d.a.degree();

    if (da == 0) {
        if (d.inf_tag == 0 || !T.even) return id;
        MumfordPoint<Fp> out = id;
        out.inf_tag = d.inf_tag * R.sigma;
        validate_point(out, T);
        return out;
    }

    if (da == 1) {
        Rat x0 = -d.a.c[0];
        Rat y0 = d.b.coeff(0, zero);
        if (detail::vp_or_max(x0, p) >= 0) {
            MumfordPoint<Fp> out;
            out.a = Poly<Fp>{{-fp_of_rat(x0, p), Fp(1, p)}};
            out.b = Poly<Fp>{{fp_of_rat(y0, p)}};
            out.inf_tag = T.even ? d.inf_tag * R.sigma : 0;
            validate_point(out, T);
            return out;
        }
        if (!T.even) return id; // the point joins the lone infinity place
        Rat lim = y0 / (x0 * x0 * x0);
        int eps = detail::branch_sign(fp_of_rat(lim, p), T);
        if (eps != d.inf_tag * R.sigma) return id; // opposite branches cancel
        MumfordPoint<Fp> out = id;
        out.inf_tag = eps;
        validate_point(out, T);
        return out;
    }

    Rat a1 = d.a.coeff(1, zero), a0 = d.a.coeff(0, zero);
    Rat b1 = d.b.coeff(1, zero), b0 = d.b.coeff(0, zero);
    long va1 = detail::vp_or_max(a1, p), va0 = detail::vp_or_max(a0, p);

    if (va1 >= 0 && va0 >= 0) {
        // Both roots stay affine.  Symmetric functions of the support.
        Rat u1 = -a1, u0 = a0;
        Rat w1 = b1 * u1 + 2 * b0;                      // y1 + y2
        Rat w0 = b1 * b1 * u0 + b1 * b0 * u1 + b0 * b0; // y1 * y2
        Rat tt = 2 * b1 * u0 + b0 * u1;                 // x2*y1 + x1*y2
        std::uint64_t w = least_nonresidue(p);
        Fp2 one2 = Fp2::embed(Fp(1, p), w);
        Fp2 two2 = one2 + one2, four2 = two2 + two2;
        Fp2 half = two2.inv();
        Fp2 a1b = Fp2::embed(fp_of_rat(a1, p), w);
        Fp2 a0b = Fp2::embed(fp_of_rat(a0, p), w);
        Fp2 w1b = Fp2::embed(fp_of_rat(w1, p), w);
        Fp2 w0b = Fp2::embed(fp_of_rat(w0, p), w);
        Fp2 ttb = Fp2::embed(fp_of_rat(tt, p), w);
        Fp2 disc = a1b * a1b - four2 * a0b;
        Fp2 x1, x2, yy1, yy2;
        if (disc.is_zero()) {
            x1 = x2 = -a1b * half;
            Fp2 ydisc = w1b * w1b - four2 * w0b;
            Fp2 dy = ydisc.sqrt();
            yy1 = (w1b + dy) * half;
            yy2 = (w1b - dy) * half;
        } else {
            Fp2 s = disc.sqrt();
            x1 = (-a1b + s) * half;
            x2 = (-a1b - s) * half;
            Fp2 det = (x2 - x1).inv();
            yy1 = (ttb - x1 * w1b) * det;
            yy2 = w1b - yy1;
        }
        Poly<Fp2> f2 = lift_to_fp2(T.f, w);
        if (yy1 * yy1 != eval(f2, x1) || yy2 * yy2 != eval(f2, x2))
            throw std::logic_error("reduction: reduced support left the curve");
        return detail::class_from_pair(x1, yy1, x2, yy2, T);
    }

    if (va1 < 0 && va0 - va1 >= 0) {
        // Exactly one root escapes; Hensel-lift the integral one from the
        // cleared quadratic p^K x^2 + (p^K a1) x + p^K a0, whose reduction is
        // linear with a unit slope.
        long K = -va1;
        long e = std::max({0L, -detail::vp_or_max(b1, p), -detail::vp_or_max(b0, p)});
        long M = e + 2;
        Int pM = 1, pK = 1;
        for (long i = 0; i < M; ++i) pM *= p;
        for (long i = 0; i < K; ++i) pK *= p;
        Int c2 = pK % pM;
        Int c1 = detail::rat_mod(Rat(pK) * a1, pM);
        Int c0 = detail::rat_mod(Rat(pK) * a0, pM);
        Int s = mod_pos(-c0 * mod_inverse(c1 % Int(p), Int(p)), Int(p));
        for (long prec = 1; prec < M; prec *= 2) {
            Int g = ((c2 * s + c1) * s + c0) % pM;
            Int gp = (2 * c2 * s + c1) % pM;
            s = mod_pos(s - g * mod_inverse(gp, pM), pM);
        }
        Fp sbar = Fp::of(s, p);
        Rat bs = b1 * Rat(s) + b0;
        Fp ybar = fp_of_rat(bs, p);
        if (ybar * ybar != eval(T.f, sbar))
            throw std::logic_error("reduction: lifted point left the curve");
        MumfordPoint<Fp> out;
        out.a = Poly<Fp>{{-sbar, Fp(1, p)}};
        out.b = Poly<Fp>{{ybar}};
        if (T.even) {
            Rat lim = b1 / (a1 * a1); // = lim y/x^3 along the escaping root
            out.inf_tag = detail::branch_sign(fp_of_rat(lim, p), T);
        }
        validate_point(out, T);
        return out;
    }

    // Both roots escape.
    if (!T.even) return id;
    Rat u1 = -a1, u0 = a0;
    Rat w0 = b1 * b1 * u0 + b1 * b0 * u1 + b0 * b0;
    Rat q2r = w0 / (u0 * u0 * u0); // product of the two branch limits / c6
    Fp q2 = fp_of_rat(q2r, p) * inv_of(T.f.lead());
    Fp one(1, p);
    if (q2 == -one) return id; // opposite branches: the pair is D_inf
    if (q2 != one) throw std::logic_error("reduction: escape limits are inconsistent");
    Rat t3 = b1 * u0 * (u1 * u1 - 2 * u0) + b0 * (u1 * u1 * u1 - 3 * u0 * u1);
    Rat lim = t3 / (u0 * u0 * u0); // sum of the two branch limits = 2*eps*s6
    Fp half = inv_of(one + one);
    int eps = detail::branch_sign(fp_of_rat(lim, p) * half, T);
    MumfordPoint<Fp> out = id;
    out.inf_tag = eps;
    validate_point(out, T);
    return out;
}

inline MumfordPoint<Fp> reduce_mod_p(const MumfordPoint<Rat>& d, const HyperCurve& C,
                                     std::uint64_t p) {
    return reduce_mod_p(d, make_reduction(C, p));
}

} // namespace g2
