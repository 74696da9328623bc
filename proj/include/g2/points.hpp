// Rational points on a genus-2 curve and their images in the Jacobian.
//
// A curve point is affine (x, y) with y^2 = f(x), the single point at
// infinity of a quintic model, or one of the two infinity branches inf^+,
// inf^- of a sextic model whose leading coefficient is a square (sign = the
// sign of y/x^3 relative to the chosen square root).
//
// embed_point(Q, base)      = [Q - base]
// difference_embed(Q)       = [Q - invol(Q)]  (invol flips the y sign / swaps
//                             the infinity branches)
// search_rational_points    = all points of height at most H: x = m/n in
//                             lowest terms with |m|, n <= H, plus the
//                             rational infinity points.

#pragma once

#include <g2/curve.hpp>
#include <g2/mumford.hpp>
#include <g2/numeric.hpp>
#include <g2/poly.hpp>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <vector>

namespace g2 {

template <class R>
struct CurvePointT {
    bool infinite = false;
    int sign = 0; // infinity branch on a sextic model: +1 / -1; else 0
    R x{}, y{};

    bool operator==(const CurvePointT& o) const {
        if (infinite != o.infinite) return false;
        if (infinite) return sign == o.sign;
        return x == o.x && y == o.y;
    }
    bool operator!=(const CurvePointT& o) const { return !(*this == o); }
};

using CurvePoint = CurvePointT<Rat>;

/// Canonical display order for rational points: points at infinity first
/// (the + branch before the -), then affine points by height of x (the larger
/// of |numerator| and denominator), then by x, with the +y partner first.
inline bool point_order_less(const CurvePoint& A, const CurvePoint& B) {
    if (A.infinite != B.infinite) return A.infinite;
    if (A.infinite) return A.sign > B.sign;
    Int ha = std::max(Int(boost::multiprecision::abs(num(A.x))), Int(den(A.x)));
    Int hb = std::max(Int(boost::multiprecision::abs(num(B.x))), Int(den(B.x)));
    if (ha != hb) return ha < hb;
    if (A.x != B.x) return A.x < B.x;
    return A.y > B.y;
}

template <class R>
CurvePointT<R> affine_point(const R& x, const R& y) {
    CurvePointT<R> P;
    P.x = x;
    P.y = y;
    return P;
}

template <class R>
CurvePointT<R> infinity_point(int sign = 0) {
    CurvePointT<R> P;
    P.infinite = true;
    P.sign = sign;
    return P;
}

template <class R>
void validate_curve_point(const CurvePointT<R>& P, const JacModel<R>& m) {
    if (P.infinite) {
        if (!m.even) {
            if (P.sign != 0) throw input_error("quintic model has a single point at infinity");
            return;
        }
        if (P.sign != 1 && P.sign != -1)
            throw input_error("sextic model: infinity point needs a branch sign");
        if (!m.split)
            throw input_error("sextic model: leading coefficient is not a square, "
                              "no rational points at infinity");
        return;
    }
    R lhs = P.y * P.y;
    R rhs = eval(m.f, P.x);
    R diff = lhs - rhs;
    if (!elem_is_zero(diff)) throw input_error("point does not satisfy y^2 = f(x)");
}

template <class R>
CurvePointT<R> curve_invol(const CurvePointT<R>& P, const JacModel<R>& m) {
    CurvePointT<R> Q = P;
    if (P.infinite) {
        if (m.even) Q.sign = -P.sign;
        return Q;
    }
    Q.y = -P.y;
    return Q;
}

namespace detail {

// Reduced class of [P1 + P2 - D_inf] for affine P1, P2 that do not pair up
// to a principal divisor; callers dispatch the degenerate cases first.
template <class R>
MumfordPoint<R> pair_class(const CurvePointT<R>& P1, const CurvePointT<R>& P2,
                           const JacModel<R>& m) {
    R one = one_like(m.f.lead());
    MumfordPoint<R> d;
    if (P1 == P2) {
        // tangent line at a non-branch point
        if (elem_is_zero(P1.y)) throw std::logic_error("pair_class: branch point doubled");
        R two = one + one;
        R fp = eval(derivative(m.f), P1.x);
        R twoy = two * P1.y;
        R slope = fp * inv_of(twoy);
        R a0 = P1.x * P1.x;
        R a1 = -(P1.x + P1.x);
        d.a = Poly<R>{{a0, a1, one}};
        R b0 = P1.y - slope * P1.x;
        d.b = Poly<R>{{b0, slope}};
        d.b.strip();
        return d;
    }
    R dx = P1.x - P2.x;
    if (elem_is_zero(dx)) throw std::logic_error("pair_class: unexpected vertical pair");
    R dy = P1.y - P2.y;
    R slope = dy * inv_of(dx);
    R a0 = P1.x * P2.x;
    R a1 = -(P1.x + P2.x);
    d.a = Poly<R>{{a0, a1, one}};
    R b0 = P1.y - slope * P1.x;
    d.b = Poly<R>{{b0, slope}};
    d.b.strip();
    return d;
}

template <class R>
MumfordPoint<R> degree_one_class(const CurvePointT<R>& P, int tag, const JacModel<R>& m) {
    R one = one_like(m.f.lead());
    MumfordPoint<R> d;
    d.a = Poly<R>{{-P.x, one}};
    d.b = Poly<R>{{P.y}};
    d.b.strip();
    d.inf_tag = tag;
    return d;
}

} // namespace detail

/// [Q - base] as a reduced divisor class.
template <class R>
MumfordPoint<R> embed_point(const CurvePointT<R>& Q, const CurvePointT<R>& base,
                            const JacModel<R>& m) {
    validate_curve_point(Q, m);
    validate_curve_point(base, m);
    if (Q == base) return mumford_identity(m);
    if (Q.infinite && base.infinite) {
        if (!m.even) return mumford_identity(m);
        // distinct branches: [inf^s - inf^-s] = [2 inf^s - D_inf]
        MumfordPoint<R> d = mumford_identity(m);
        d.inf_tag = Q.sign;
        return d;
    }
    if (Q.infinite) {
        // [inf^s + invol(base) - D_inf]
        CurvePointT<R> nb = curve_invol(base, m);
        MumfordPoint<R> d = detail::degree_one_class(nb, m.even ? Q.sign : 0, m);
        validate_point(d, m);
        return d;
    }
    if (base.infinite) {
        MumfordPoint<R> d = detail::degree_one_class(Q, m.even ? -base.sign : 0, m);
        validate_point(d, m);
        return d;
    }
    CurvePointT<R> nb = curve_invol(base, m);
    MumfordPoint<R> d = detail::pair_class(Q, nb, m);
    validate_point(d, m);
    return d;
}

/// [Q - inf] on a quintic model.
template <class R>
MumfordPoint<R> embed_point(const CurvePointT<R>& Q, const JacModel<R>& m) {
    if (m.even)
        throw input_error("sextic model: embedding needs an explicit base point");
    return embed_point(Q, infinity_point<R>(), m);
}

/// [Q - invol(Q)]: identity at branch points, a tag class at infinity of a
/// sextic, otherwise the tangent class with a = (x - x0)^2.
template <class R>
MumfordPoint<R> difference_embed(const CurvePointT<R>& Q, const JacModel<R>& m) {
    validate_curve_point(Q, m);
    if (Q.infinite) {
        MumfordPoint<R> d = mumford_identity(m);
        if (m.even) d.inf_tag = Q.sign;
        return d;
    }
    if (elem_is_zero(Q.y)) return mumford_identity(m);
    MumfordPoint<R> d = detail::pair_class(Q, Q, m);
    validate_point(d, m);
    return d;
}

/// All rational points with x = m/n, gcd(m, n) = 1, |m| <= H, 1 <= n <= H,
/// plus the rational points at infinity.  Deterministic order: infinity
/// first, then by (n, m), +y before -y.
inline std::vector<CurvePoint> search_rational_points(const HyperCurve& C, long H) {
    if (H < 0) throw input_error("search height must be nonnegative");
    std::vector<CurvePoint> out;
    Poly<Rat> f = to_rat(C.f);
    bool even = C.f.degree() == 6;
    if (!even) {
        out.push_back(infinity_point<Rat>());
    } else {
        Rat s;
        if (field_sqrt(Rat(C.f.lead()), s)) {
            out.push_back(infinity_point<Rat>(1));
            out.push_back(infinity_point<Rat>(-1));
        }
    }
    for (long n = 1; n <= H; ++n)
        for (long m = -H; m <= H; ++m) {
            if (std::gcd(std::labs(m), n) != 1) continue;
            Rat x = Rat(m) / Rat(n);
            Rat v = eval(f, x);
            if (elem_is_zero(v)) {
                out.push_back(affine_point(x, Rat(0)));
                continue;
            }
            Rat y;
            if (field_sqrt(v, y)) {
                if (y < 0) y = -y;
                out.push_back(affine_point(x, y));
                out.push_back(affine_point(x, Rat(-y)));
            }
        }
    return out;
}

} // namespace g2
