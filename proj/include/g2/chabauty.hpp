#pragma once
// One-dimensional p-adic integration on a genus-2 Jacobian.  Given a point of
// infinite order generating a finite-index subgroup of a rank-1 Mordell-Weil
// group, these routines produce a differential that annihilates the whole
// group under the abelian-logarithm pairing, certified to an explicit p-adic
// precision, together with the residue criteria that make the reduction map
// C(Q) -> C(F_p) injective.  They are the analytic half of the point search:
// the sieve half only has to push every unknown rational point into residue
// disks where one of these criteria applies.
//
// All integration routines require p > 3, good reduction at p, and p not
// dividing the leading coefficient (so that the reduction keeps the model's
// degree and the disks at infinity keep their shape).  Divisor classes whose
// support generates a ramified quadratic extension of Q_p are rejected with a
// dedicated exception: half-integral valuations would complicate every series
// bound below, and the caller can always move to another prime.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "g2/curve.hpp"
#include "g2/group.hpp"
#include "g2/mumford.hpp"
#include "g2/padic.hpp"
#include "g2/points.hpp"
#include "g2/reduction.hpp"
#include "g2/series.hpp"

namespace g2 {

/// Thrown when a divisor's support generates a ramified quadratic extension
/// of Q_p.  The integration layer does not handle half-integral valuations;
/// callers are expected to retry at a different prime.
struct ramified_support_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require_integration_prime(const HyperCurve& C, std::uint64_t p, const char* who) {
    if (p <= 3) throw input_error(std::string(who) + ": requires a prime p > 3");
    if (!C.good_reduction(p))
        throw input_error(std::string(who) + ": p must be a prime of good reduction");
    if (mod_u64(C.f.lead(), p) == 0)
        throw input_error(std::string(who) + ": p must not divide the leading coefficient");
}

// ---------------------------------------------------------------------------
// Kernel-of-reduction multiple.

/// m = order of the reduction of P in J(F_p) together with the global point
/// m*P, which lies in the kernel of reduction at p.  When m*P is already the
/// identity over Q the input was torsion and the caller should switch to the
/// torsion pull-back route instead of integrating.
struct KernelMultiple {
    Int m;
    MumfordPoint<Rat> mP;
    bool torsion = false;
};

inline KernelMultiple kernel_multiple(const MumfordPoint<Rat>& P, const HyperCurve& C,
                                      std::uint64_t p, long rho_budget = 2000000) {
    require_integration_prime(C, p, "kernel multiple");
    JacModel<Rat> m = make_jac_model(C);
    validate_point(P, m);
    JacobianGroupFp G = jacobian_group(C, p, rho_budget);
    MumfordPoint<Fp> rp = reduce_mod_p(P, C, p);
    const std::vector<Int>& co = G.coords(rp);
    Int ord(1);
    for (std::size_t i = 0; i < co.size(); ++i) {
        Int g = boost::multiprecision::gcd(co[i], G.invariants[i]);
        Int oi = G.invariants[i] / g;
        ord = boost::multiprecision::lcm(ord, oi);
    }
    KernelMultiple K;
    K.m = ord;
    K.mP = scalar_mul(ord, P, m);
    K.torsion = is_identity(K.mP);
    if (!K.torsion) {
        MumfordPoint<Fp> chk = reduce_mod_p(K.mP, C, p);
        if (!is_identity(chk))
            throw std::logic_error("kernel multiple: m*P does not reduce to the identity");
    }
    return K;
}

// ---------------------------------------------------------------------------
// Tiny integrals.

/// Integrals of the basis differentials over a divisor class in the kernel of
/// reduction, as p-adic numbers of certified absolute precision.  i0 is the
/// integral of dx/2y, i1 of x dx/2y.  Both have valuation >= 1; form and
/// disks record which residue disks carried the support.
struct TinyIntegralResult {
    PadicNumber i0, i1;
    long prec = 0;
    std::string form;                // "identity" | "infinity" | "affine"
    std::vector<std::string> disks;  // local parameter tags, one per support disk
};

namespace detail {

/// x / p^k, adjusting both valuation and certified precision.
inline PadicNumber padic_shift(PadicNumber x, long k) {
    if (x.is_exact_zero()) return x;
    x.val -= k;
    x.aprec -= k;
    return x;
}

inline long poly_min_val(const Poly<Rat>& f, std::uint64_t p) {
    long v = LONG_MAX;
    Int pi(p);
    for (const Rat& c : f.c)
        if (!elem_is_zero(c)) v = std::min(v, val_p(c, pi));
    return v == LONG_MAX ? 0 : v;
}

/// Largest e with p^e <= n (the worst denominator a term-wise integration of
/// a series of length n can introduce).
inline long log_floor(std::uint64_t p, long n) {
    long e = 0;
    Int q(p);
    while (q <= n) {
        q *= p;
        ++e;
    }
    return e;
}

inline FormalSeries series_shift_up(const FormalSeries& s, std::size_t k) {
    FormalSeries out(s.p, s.len());
    for (std::size_t i = 0; i + k < s.len(); ++i) out.c[i + k] = s.c[i];
    return out;
}

/// Spread a series in tau into a series in t with tau = t^2.
inline FormalSeries series_spread_square(const FormalSeries& s, std::size_t len) {
    FormalSeries out(s.p, len);
    for (std::size_t i = 0; 2 * i < len; ++i) out.c[2 * i] = s.at(i);
    return out;
}

inline bool padic_small(const PadicNumber& x, long floor_val) {
    return x.is_exact_zero() || x.is_weak_zero() || x.val >= floor_val;
}
inline bool quad_small(const PadicQuad& x, long floor_val) {
    return x.is_weak_zero() || x.twice_val() >= 2 * floor_val;
}

/// The two formal antiderivatives over one kind of residue disk plus the
/// coordinate series used for consistency checks.  A integrates the dx/2y
/// series, B the x dx/2y series, both in the disk parameter; maxdiv bounds
/// the denominators the integration introduced.
struct DiskSeries {
    FormalSeries u, A, B;
    long maxdiv = 0;
};

/// Quintic model, disk at infinity.  Local parameter t = x^2/y at the single
/// (Weierstrass) point at infinity; x = u(t^2)/t^2 with u(0) = 1/f5 solving
///   f5 u^5 - u^4 + f4 u^4 s + f3 u^3 s^2 + f2 u^2 s^3 + f1 u s^4 + f0 s^5 = 0
/// in Q_p[[s]] (s = t^2) by Newton iteration; the derivative at the start is
/// the unit u(0)^3.  Then
///   dx/2y = t^2 (s u' - u)/u^2 dt,    x dx/2y = (s u' - u)/u dt,
/// whose leading terms -f5 t^2 dt and -1 dt match the divisor 2*infinity of
/// dx/2y and the nonvanishing of x dx/2y at infinity.  u is returned spread
/// as a series in t (even powers only: the expansion parity at a Weierstrass
/// point).
inline DiskSeries infinity_series_odd(const Poly<Rat>& fR, std::uint64_t p,
                                      std::size_t nterms, long W) {
    std::size_t lt = nterms / 2 + 2;
    FormalSeries u(p, lt);
    Rat f5 = fR.c[5];
    u.c[0] = PadicNumber::from_rat(Rat(1) / f5, p, W);
    std::vector<PadicNumber> fc(6, PadicNumber::zero(p));
    for (int i = 0; i <= 5; ++i) fc[i] = PadicNumber::from_rat(fR.c[i], p, W);
    auto value = [&](const FormalSeries& x) {
        FormalSeries x2 = series_mul(x, x);
        FormalSeries x3 = series_mul(x2, x);
        FormalSeries x4 = series_mul(x2, x2);
        FormalSeries x5 = series_mul(x4, x);
        FormalSeries one(p, lt);
        one.c[0] = PadicNumber::from_rat(Rat(1), p, W);
        FormalSeries acc = series_add(series_scalar(fc[5], x5), series_neg(x4));
        acc = series_add(acc, series_shift_up(series_scalar(fc[4], x4), 1));
        acc = series_add(acc, series_shift_up(series_scalar(fc[3], x3), 2));
        acc = series_add(acc, series_shift_up(series_scalar(fc[2], x2), 3));
        acc = series_add(acc, series_shift_up(series_scalar(fc[1], x), 4));
        acc = series_add(acc, series_shift_up(series_scalar(fc[0], one), 5));
        return acc;
    };
    auto deriv = [&](const FormalSeries& x) {
        FormalSeries x2 = series_mul(x, x);
        FormalSeries x3 = series_mul(x2, x);
        FormalSeries x4 = series_mul(x2, x2);
        FormalSeries one(p, lt);
        one.c[0] = PadicNumber::from_rat(Rat(1), p, W);
        auto k = [&](long n) { return PadicNumber::from_rat(Rat(n), p, W); };
        FormalSeries acc =
            series_add(series_scalar(k(5) * fc[5], x4), series_scalar(k(-4), x3));
        acc = series_add(acc, series_shift_up(series_scalar(k(4) * fc[4], x3), 1));
        acc = series_add(acc, series_shift_up(series_scalar(k(3) * fc[3], x2), 2));
        acc = series_add(acc, series_shift_up(series_scalar(k(2) * fc[2], x), 3));
        acc = series_add(acc, series_shift_up(series_scalar(fc[1], one), 4));
        return acc;
    };
    std::size_t known = 1;
    while (known < lt) {
        u = series_add(u, series_neg(series_mul(value(u), series_inverse(deriv(u)))));
        known *= 2;
    }
    FormalSeries res = value(u);
    for (const PadicNumber& c : res.c)
        if (!padic_small(c, 1))
            throw std::logic_error("infinity series: Newton iteration failed to converge");

    DiskSeries S;
    S.u = series_spread_square(u, nterms);
    // numerator of (s u' - u): tau-coefficients (k - 1) u_k
    FormalSeries num(p, lt);
    for (std::size_t k = 0; k < lt; ++k)
        num.c[k] = PadicNumber::from_rat(Rat(static_cast<long>(k) - 1), p, W) * u.at(k);
    FormalSeries numt = series_spread_square(num, nterms);
    FormalSeries w0 =
        series_mul(series_shift_up(numt, 2), series_inverse(series_mul(S.u, S.u)));
    FormalSeries w1 = series_mul(numt, series_inverse(S.u));
    S.maxdiv = log_floor(p, static_cast<long>(nterms) + 1);
    S.A = series_integrate(w0);
    S.B = series_integrate(w1);
    PadicNumber lead0 = S.A.at(3) - PadicNumber::from_rat(-fR.c[5] / Rat(3), p, W);
    PadicNumber lead1 = S.B.at(1) - PadicNumber::from_rat(Rat(-1), p, W);
    if (!padic_small(lead0, 1) || !padic_small(lead1, 1))
        throw std::logic_error("infinity series: leading integral terms are wrong");
    return S;
}

/// Sextic model, disks at infinity.  Per-branch local parameter t = 1/x;
/// with s a square root of the leading coefficient and e = +-1 the branch
/// sign, y = e s u(t)/t^3 where u = sqrt(f(1/t) t^6 / f6) has constant term 1
/// and rational-series coefficients.  Then dx/2y = -t/(2 e s u) dt and
/// x dx/2y = -1/(2 e s u) dt; the series carry the -1/2 and leave e, s to the
/// caller.
inline DiskSeries infinity_series_even(const Poly<Rat>& fR, std::uint64_t p,
                                       std::size_t nterms, long W) {
    std::vector<Rat> rc(7);
    for (int i = 0; i <= 6; ++i) rc[i] = fR.c[6 - i] / fR.c[6];
    Poly<Rat> rev(rc);
    DiskSeries S;
    S.u = series_sqrt(series_from_poly(rev, p, nterms, W));
    if (S.u.c[0].residue().v != 1) S.u = series_neg(S.u);
    FormalSeries g = series_inverse(S.u);
    PadicNumber mhalf = PadicNumber::from_rat(Rat(-1, 2), p, W);
    S.maxdiv = log_floor(p, static_cast<long>(nterms) + 1);
    S.A = series_integrate(series_scalar(mhalf, series_shift_up(g, 1)));
    S.B = series_integrate(series_scalar(mhalf, g));
    if (!padic_small(S.B.at(1) - mhalf, 1))
        throw std::logic_error("infinity series: leading integral terms are wrong");
    return S;
}

/// Roots of the reversed quadratic of a monic deg-2 a, i.e. the images
/// t = 1/x of the supporting x-coordinates.  Both must satisfy v(t) >= 1
/// (support inside the infinity disks); a conjugate pair lives in the
/// unramified quadratic extension, represented over the unit part of the
/// discriminant.  A ramified pair is possible inside the disk of a
/// Weierstrass point at infinity (quintic models) and raises the dedicated
/// error there; on a sextic model it cannot belong to the kernel at all.
struct EscapeRoots {
    bool quad = false;
    bool double_root = false;
    PadicNumber t1, t2;
    PadicQuad q1{PadicNumber(), PadicNumber(), PadicNumber()};
    PadicQuad q2{PadicNumber(), PadicNumber(), PadicNumber()};
};

inline EscapeRoots reciprocal_roots(const Poly<Rat>& a, std::uint64_t p, long W,
                                    bool weierstrass_disk) {
    static const char* who = "tiny integrals";
    Rat a1 = a.c[1], a0 = a.c[0];
    if (elem_is_zero(a0))
        throw input_error(std::string(who) + ": divisor support is not at infinity");
    Rat s1 = -a1 / a0;     // t1 + t2
    Rat s0 = Rat(1) / a0;  // t1 * t2
    Rat dt = s1 * s1 - Rat(4) * s0;
    EscapeRoots R;
    auto check_val = [&](const PadicNumber& t) {
        if (t.is_weak_zero())
            throw budget_error(std::string(who) +
                               ": working precision too small for a very deep root");
        if (t.val < 1)
            throw input_error(std::string(who) +
                              ": divisor support is not inside the infinity residue disks");
    };
    if (elem_is_zero(dt)) {
        R.double_root = true;
        R.t1 = PadicNumber::from_rat(s1 / Rat(2), p, W);
        R.t2 = R.t1;
        check_val(R.t1);
        return R;
    }
    long vd = val_p(dt, Int(p));
    if (vd % 2 != 0) {
        if (weierstrass_disk)
            throw ramified_support_error(
                std::string(who) +
                ": support generates a ramified quadratic extension; use another prime");
        throw input_error(std::string(who) +
                          ": ramified support at the split infinity disks is not in the "
                          "kernel of reduction");
    }
    PadicNumber D = PadicNumber::from_rat(dt, p, W);
    PadicNumber half = PadicNumber::from_rat(Rat(1, 2), p, W);
    if (D.is_unit_square()) {
        PadicNumber w = D.sqrt();
        PadicNumber sp = PadicNumber::from_rat(s1, p, W);
        R.t1 = (sp + w) * half;
        R.t2 = (sp - w) * half;
        check_val(R.t1);
        check_val(R.t2);
        return R;
    }
    R.quad = true;
    Int pk(1);
    for (long i = 0; i < vd / 2; ++i) pk *= p;
    Rat d0 = dt / Rat(pk * pk);
    PadicNumber d0p = PadicNumber::from_rat(d0, p, W);
    R.q1 = PadicQuad(PadicNumber::from_rat(s1 / Rat(2), p, W),
                     PadicNumber::from_rat(Rat(pk, 2), p, W), d0p);
    R.q2 = R.q1.conj();
    if (R.q1.is_weak_zero() || R.q1.twice_val() < 2)
        throw input_error(std::string(who) +
                          ": divisor support is not inside the infinity residue disks");
    return R;
}

/// Branch sign at infinity on the sextic model: the residue of
/// rho = y t^3 / (s u(t)) must be +-1; anything else means the state does not
/// lie on the claimed parametrization.
inline int branch_sign_padic(const PadicNumber& rho) {
    PadicNumber one = rho.one_like(1);
    if (padic_small(rho - one, 1)) return 1;
    if (padic_small(rho + one, 1)) return -1;
    throw std::logic_error("tiny integrals: branch ratio is not +-1");
}
inline int branch_sign_quad(const PadicQuad& rho) {
    PadicQuad one = PadicQuad::embed(rho.a.one_like(1), rho.D);
    if (quad_small(rho - one, 1)) return 1;
    if (quad_small(rho + one, 1)) return -1;
    throw std::logic_error("tiny integrals: branch ratio is not +-1");
}

/// Simple root of f mod p lifted into Z_p to absolute precision W.
inline PadicNumber hensel_root(const Poly<Rat>& fR, const Fp& xbar, std::uint64_t p,
                               long W) {
    Poly<Rat> df = derivative(fR);
    PadicNumber x = PadicNumber::from_rat(Rat(Int(xbar.v)), p, W);
    for (int it = 0; it < 64; ++it) {
        PadicNumber fx = eval_poly_padic(fR, x);
        if (fx.is_exact_zero() || fx.is_weak_zero()) return x;
        x = x - fx * eval_poly_padic(df, x).inv();
    }
    throw std::logic_error("hensel root: no convergence");
}

/// Finalize a tiny-integral result: enforce the valuation >= 1 invariant and
/// the certified-precision floor, then clamp both entries to the common
/// certified precision.
inline void finish_tiny(TinyIntegralResult& R, long precision) {
    long pr = LONG_MAX;
    for (const PadicNumber* x : {&R.i0, &R.i1}) {
        if (x->is_exact_zero()) continue;
        pr = std::min(pr, x->aprec);
        if (!x->is_weak_zero() && x->val < 1)
            throw std::logic_error("tiny integrals: kernel integral with valuation < 1");
    }
    if (pr == LONG_MAX) pr = precision;
    if (pr < precision)
        throw budget_error("tiny integrals: certified precision fell below the request");
    R.prec = pr;
    R.i0 = clamp_prec(R.i0, pr);
    R.i1 = clamp_prec(R.i1, pr);
}

} // namespace detail

/// Tiny integrals of (dx/2y, x dx/2y) over a kernel divisor class supported in
/// the residue disks at infinity.  The identity gives (0, 0).  Classes that do
/// not reduce to the identity, or whose support is not at infinity, are
/// rejected.  The returned .prec certifies both integrals to O(p^prec) with
/// prec >= precision.
inline TinyIntegralResult tiny_integrals_at_infinity(const MumfordPoint<Rat>& D,
                                                     const HyperCurve& C, std::uint64_t p,
                                                     long precision = 8) {
    static const char* who = "tiny integrals";
    require_integration_prime(C, p, who);
    if (precision < 1) throw input_error("tiny integrals: precision must be >= 1");
    JacModel<Rat> m = make_jac_model(C);
    validate_point(D, m);

    TinyIntegralResult R;
    if (is_identity(D)) {
        R.i0 = PadicNumber::zero(p);
        R.i1 = PadicNumber::zero(p);
        R.prec = precision;
        R.form = "identity";
        R.disks = {"identity"};
        return R;
    }
    long da = D.a.degree();
    if (da == 0)
        throw input_error("tiny integrals: the infinity-difference class is not in the "
                          "kernel of reduction");
    if (D.b.is_zero())
        throw input_error("tiny integrals: a 2-torsion class is not in the kernel of "
                          "reduction");

    std::size_t nterms = static_cast<std::size_t>(precision) + 12;
    long maxdiv = detail::log_floor(p, static_cast<long>(nterms) + 1);
    long W = precision + maxdiv + 6;
    Poly<Rat> fR = to_rat(C.f);

    if (!m.even) {
        // ---------------- quintic model ----------------
        detail::DiskSeries S = detail::infinity_series_odd(fR, p, nterms, W);
        long cfloor = -S.maxdiv;
        auto param_of = [&](const PadicNumber& x, const PadicNumber& y) {
            PadicNumber t = x * x * y.inv();
            if (t.is_weak_zero())
                throw budget_error("tiny integrals: working precision too small for a "
                                   "very deep point");
            if (t.val < 1)
                throw input_error("tiny integrals: divisor support is not inside the "
                                  "infinity residue disk");
            PadicNumber diff = series_eval(S.u, t, 0) - x * t * t;
            if (!detail::padic_small(clamp_prec(diff, precision), precision))
                throw std::logic_error("tiny integrals: infinity parametrization mismatch");
            return t;
        };
        if (da == 1) {
            Rat x1 = -D.a.c[0];
            if (elem_is_zero(x1) || val_p(x1, Int(p)) >= 0)
                throw input_error("tiny integrals: divisor support is not at infinity");
            Rat y1 = eval(D.b, x1);
            PadicNumber t1 = param_of(PadicNumber::from_rat(x1, p, W),
                                      PadicNumber::from_rat(y1, p, W));
            R.i0 = series_eval(S.A, t1, cfloor);
            R.i1 = series_eval(S.B, t1, cfloor);
            R.disks = {"infinity, v(t) = " + std::to_string(t1.val)};
        } else {
            detail::EscapeRoots ro = detail::reciprocal_roots(D.a, p, W, true);
            if (!ro.quad) {
                PadicNumber i0 = PadicNumber::zero(p), i1 = PadicNumber::zero(p);
                int copies = ro.double_root ? 2 : 1;
                std::vector<PadicNumber> roots =
                    ro.double_root ? std::vector<PadicNumber>{ro.t1}
                                   : std::vector<PadicNumber>{ro.t1, ro.t2};
                for (const PadicNumber& tr : roots) {
                    PadicNumber x = tr.inv();
                    PadicNumber y = eval_poly_padic(D.b, x);
                    PadicNumber t = param_of(x, y);
                    PadicNumber a = series_eval(S.A, t, cfloor);
                    PadicNumber b = series_eval(S.B, t, cfloor);
                    for (int c = 0; c < copies; ++c) {
                        i0 = i0 + a;
                        i1 = i1 + b;
                    }
                    R.disks.push_back("infinity, v(t) = " + std::to_string(t.val));
                }
                R.i0 = i0;
                R.i1 = i1;
            } else {
                PadicQuad x = ro.q1.inv();
                PadicQuad y = eval_poly_padic(D.b, x);
                PadicQuad t = x * x * y.inv();
                if (t.is_weak_zero() || t.twice_val() < 2)
                    throw input_error("tiny integrals: divisor support is not inside the "
                                      "infinity residue disk");
                PadicQuad diff = series_eval(S.u, t, 0) - x * t * t;
                if (!detail::quad_small(diff, precision))
                    throw std::logic_error("tiny integrals: infinity parametrization "
                                           "mismatch");
                // the conjugate point contributes the conjugate integral
                R.i0 = series_eval(S.A, t, cfloor).trace();
                R.i1 = series_eval(S.B, t, cfloor).trace();
                R.disks = {"infinity, conjugate pair over the unramified quadratic, "
                           "2 v(t) = " +
                           std::to_string(t.twice_val())};
            }
        }
    } else {
        // ---------------- sextic model ----------------
        detail::DiskSeries S = detail::infinity_series_even(fR, p, nterms, W);
        long cfloor = -S.maxdiv - 1;
        PadicNumber f6 = PadicNumber::from_rat(fR.c[6], p, W);
        bool s_rational = f6.is_unit_square();

        if (da == 1) {
            // [Q1 + infinity^tag - D_inf] = [Q1 - infinity^(-tag)]
            Rat x1 = -D.a.c[0];
            if (elem_is_zero(x1) || val_p(x1, Int(p)) >= 0)
                throw input_error("tiny integrals: divisor support is not at infinity");
            if (!m.split || !s_rational)
                throw std::logic_error("tiny integrals: tagged state on a non-split model");
            Rat y1 = eval(D.b, x1);
            PadicNumber t1 = PadicNumber::from_rat(Rat(1) / x1, p, W);
            if (t1.val < 1)
                throw input_error("tiny integrals: divisor support is not at infinity");
            PadicNumber s = PadicNumber::from_rat(m.s6, p, W);
            PadicNumber u1 = series_eval(S.u, t1, 0);
            PadicNumber rho =
                PadicNumber::from_rat(y1, p, W) * t1 * t1 * t1 * (s * u1).inv();
            int e1 = detail::branch_sign_padic(rho);
            if (e1 != -D.inf_tag)
                throw input_error("tiny integrals: the class is not in the kernel of "
                                  "reduction (wrong infinity branch)");
            PadicNumber A1 = series_eval(S.A, t1, cfloor);
            PadicNumber B1 = series_eval(S.B, t1, cfloor);
            PadicNumber si = s.inv();
            R.i0 = (e1 == 1 ? A1 : -A1) * si;
            R.i1 = (e1 == 1 ? B1 : -B1) * si;
            R.disks = {std::string("infinity") + (e1 == 1 ? "+" : "-") +
                       ", v(t) = " + std::to_string(t1.val)};
        } else {
            detail::EscapeRoots ro = detail::reciprocal_roots(D.a, p, W, false);
            if (ro.double_root)
                throw input_error("tiny integrals: a doubled point at one infinity branch "
                                  "is not in the kernel of reduction");
            if (!ro.quad) {
                if (!s_rational)
                    throw std::logic_error("tiny integrals: rational infinity support with "
                                           "non-square leading coefficient");
                PadicNumber s = m.split ? PadicNumber::from_rat(m.s6, p, W) : f6.sqrt();
                int e[2];
                const PadicNumber* ts[2] = {&ro.t1, &ro.t2};
                PadicNumber As[2], Bs[2];
                for (int i = 0; i < 2; ++i) {
                    const PadicNumber& t = *ts[i];
                    PadicNumber x = t.inv();
                    PadicNumber y = eval_poly_padic(D.b, x);
                    PadicNumber u1 = series_eval(S.u, t, 0);
                    PadicNumber rho = y * t * t * t * (s * u1).inv();
                    e[i] = detail::branch_sign_padic(rho);
                    As[i] = series_eval(S.A, t, cfloor);
                    Bs[i] = series_eval(S.B, t, cfloor);
                    R.disks.push_back(std::string("infinity") + (e[i] == 1 ? "+" : "-") +
                                      ", v(t) = " + std::to_string(t.val));
                }
                if (e[0] + e[1] != 0)
                    throw input_error("tiny integrals: both points on one infinity branch "
                                      "- the class is not in the kernel of reduction");
                PadicNumber si = s.inv();
                auto sgn = [](int ei, const PadicNumber& v) { return ei == 1 ? v : -v; };
                R.i0 = (sgn(e[0], As[0]) + sgn(e[1], As[1])) * si;
                R.i1 = (sgn(e[0], Bs[0]) + sgn(e[1], Bs[1])) * si;
            } else {
                if (s_rational)
                    throw input_error("tiny integrals: conjugate infinity support with "
                                      "split reduction is not in the kernel");
                // sqrt(f6) = sr * w with w^2 = d0 (both nonsquare units)
                PadicNumber d0 = ro.q1.D;
                PadicNumber sr = (f6 * d0.inv()).sqrt();
                PadicQuad s(PadicNumber::zero(p), sr, d0);
                PadicQuad x = ro.q1.inv();
                PadicQuad y = eval_poly_padic(D.b, x);
                PadicQuad u1 = series_eval(S.u, ro.q1, 0);
                PadicQuad rho = y * ro.q1 * ro.q1 * ro.q1 * (s * u1).inv();
                int e1 = detail::branch_sign_quad(rho);
                PadicQuad es = e1 == 1 ? s : -s;
                // conj swaps the points and flips both e and s, so the total
                // is the trace of one branch term
                R.i0 = (series_eval(S.A, ro.q1, cfloor) * es.inv()).trace();
                R.i1 = (series_eval(S.B, ro.q1, cfloor) * es.inv()).trace();
                R.disks = {"infinity, conjugate branches over the unramified quadratic, "
                           "2 v(t) = " +
                           std::to_string(ro.q1.twice_val())};
            }
        }
    }

    R.form = "infinity";
    detail::finish_tiny(R, precision);
    return R;
}

namespace detail {

/// Kernel class supported in the residue disk of an affine Weierstrass point
/// (xw, 0): any pair over this disk is in the kernel, because twice the
/// Weierstrass point is the fiber divisor of x = xw.  The local parameter is
/// y; x = xw + eta(y) with eta the even power series solving
/// f(xw + eta) = y^2, so dx/2y = eta'(y)/(2y) dy is again a power series in
/// y.  Integrates D = [P1 - i(P2)] between the parameter values y(P1) and
/// -y(P2).
inline TinyIntegralResult affine_weierstrass_disk(const MumfordPoint<Rat>& D,
                                                  const Poly<Rat>& fR, const Fp& xbar,
                                                  std::uint64_t p, long precision) {
    TinyIntegralResult R;
    R.form = "affine";
    Rat a1 = D.a.c[1], a0 = D.a.c[0];
    Rat da = a1 * a1 - Rat(4) * a0;

    std::size_t nterms = static_cast<std::size_t>(precision) + 12;
    long maxdiv = log_floor(p, static_cast<long>(nterms) + 1);
    long W = precision + maxdiv + 6;
    long cfloor = -maxdiv - 1;

    PadicNumber xw = hensel_root(fR, xbar, p, W);

    // eta(y): Newton for f(xw + eta) = y^2 in Q_p[[y]]
    FormalSeries y2(p, nterms);
    if (nterms > 2) y2.c[2] = PadicNumber::from_rat(Rat(1), p, W);
    Poly<Rat> dfR = derivative(fR);
    FormalSeries eta(p, nterms);
    std::size_t known = 1;
    while (known < nterms) {
        FormalSeries xcur = eta;
        xcur.c[0] = xcur.c[0] + xw;
        FormalSeries num = series_add(series_substitute_poly(fR, xcur, W), series_neg(y2));
        FormalSeries den = series_substitute_poly(dfR, xcur, W);
        eta = series_add(eta, series_neg(series_mul(num, series_inverse(den))));
        known *= 2;
    }
    FormalSeries xs = eta;
    xs.c[0] = xs.c[0] + xw;
    {
        FormalSeries res = series_add(series_substitute_poly(fR, xs, W), series_neg(y2));
        for (const PadicNumber& c : res.c)
            if (!padic_small(c, 1))
                throw std::logic_error("weierstrass disk: Newton iteration failed");
    }
    // even-parity invariant of the expansion at a Weierstrass point
    for (std::size_t k = 1; k < nterms; k += 2)
        if (!padic_small(eta.c[k], 1))
            throw std::logic_error("weierstrass disk: expansion lost its even parity");

    // dx/2y = eta'(y)/(2y) dy: coefficient at y^(k-2) is (k/2) eta_k
    FormalSeries S0(p, nterms);
    for (std::size_t k = 2; k < nterms; k += 2)
        S0.c[k - 2] = PadicNumber::from_rat(Rat(Int(k), Int(2)), p, W) * eta.c[k];
    FormalSeries S1 = series_mul(xs, S0);
    FormalSeries F0 = series_integrate(S0);
    FormalSeries F1 = series_integrate(S1);

    auto x_consistent = [&](const PadicNumber& yv, const PadicNumber& xv) {
        PadicNumber diff = series_eval(xs, yv, 0) - xv;
        if (!padic_small(clamp_prec(diff, precision), precision))
            throw std::logic_error("weierstrass disk: chart does not reproduce the "
                                   "support coordinates");
    };
    auto y_param = [&](const PadicNumber& yv) {
        if (yv.is_exact_zero()) return yv;
        if (yv.is_weak_zero())
            throw budget_error("tiny integrals: working precision too small for a very "
                               "deep point");
        if (yv.val < 1)
            throw std::logic_error("weierstrass disk: support point has unit y");
        return yv;
    };

    if (elem_is_zero(da)) {
        // D = [2 P1 - D_inf] = [P1 - i(P1)]
        Rat x1 = -a1 / Rat(2);
        Rat y1 = eval(D.b, x1);
        PadicNumber y1p = y_param(PadicNumber::from_rat(y1, p, W));
        x_consistent(y1p, PadicNumber::from_rat(x1, p, W));
        PadicNumber two = PadicNumber::from_rat(Rat(2), p, W);
        R.i0 = series_eval(F0, y1p, cfloor) * two;
        R.i1 = series_eval(F1, y1p, cfloor) * two;
        R.disks = {"affine Weierstrass disk x = " + std::to_string(xbar.v) +
                   " (doubled point)"};
        finish_tiny(R, precision);
        return R;
    }

    long vda = val_p(da, Int(p));
    if (vda % 2 != 0)
        throw ramified_support_error(
            "tiny integrals: support generates a ramified quadratic extension; use "
            "another prime");
    PadicNumber dpa = PadicNumber::from_rat(da, p, W);

    Rat sdr;
    if (field_sqrt(da, sdr)) {
        // exact rational support; an endpoint y may be exactly 0 when the
        // Weierstrass point itself sits in the divisor
        Rat x1r = (-a1 + sdr) / Rat(2), x2r = (-a1 - sdr) / Rat(2);
        PadicNumber y1p = y_param(PadicNumber::from_rat(eval(D.b, x1r), p, W));
        PadicNumber y2p = y_param(PadicNumber::from_rat(eval(D.b, x2r), p, W));
        x_consistent(y1p, PadicNumber::from_rat(x1r, p, W));
        x_consistent(-y2p, PadicNumber::from_rat(x2r, p, W));
        R.i0 = series_eval(F0, y1p, cfloor) - series_eval(F0, -y2p, cfloor);
        R.i1 = series_eval(F1, y1p, cfloor) - series_eval(F1, -y2p, cfloor);
        R.disks = {"affine Weierstrass disk x = " + std::to_string(xbar.v) +
                   " (rational pair)"};
    } else if (dpa.is_unit_square()) {
        PadicNumber half = PadicNumber::from_rat(Rat(1, 2), p, W);
        PadicNumber ma1h = PadicNumber::from_rat(-a1 / Rat(2), p, W);
        PadicNumber sd = dpa.sqrt();
        PadicNumber x1 = ma1h + sd * half;
        PadicNumber x2 = ma1h - sd * half;
        PadicNumber y1 = y_param(eval_poly_padic(D.b, x1));
        PadicNumber y2v = y_param(eval_poly_padic(D.b, x2));
        x_consistent(y1, x1);
        x_consistent(-y2v, x2);  // eta is even: the chart sees only y^2
        R.i0 = series_eval(F0, y1, cfloor) - series_eval(F0, -y2v, cfloor);
        R.i1 = series_eval(F1, y1, cfloor) - series_eval(F1, -y2v, cfloor);
        R.disks = {"affine Weierstrass disk x = " + std::to_string(xbar.v) +
                   " (rational pair)"};
    } else {
        Int pk(1);
        for (long i = 0; i < vda / 2; ++i) pk *= p;
        Rat d0 = da / Rat(pk * pk);
        PadicNumber d0p = PadicNumber::from_rat(d0, p, W);
        PadicQuad x1(PadicNumber::from_rat(-a1 / Rat(2), p, W),
                     PadicNumber::from_rat(Rat(pk, 2), p, W), d0p);
        PadicQuad y1 = eval_poly_padic(D.b, x1);
        if (y1.is_weak_zero())
            throw budget_error("tiny integrals: working precision too small for a very "
                               "deep point");
        if (y1.twice_val() < 2)
            throw std::logic_error("weierstrass disk: support point has unit y");
        {
            PadicQuad diff = series_eval(xs, y1, 0) - x1;
            if (!quad_small(diff, precision))
                throw std::logic_error("weierstrass disk: chart does not reproduce the "
                                       "support coordinates");
        }
        // I = F(y1) - F(-conj y1) = F(y1) + conj F(y1): F is an odd series
        for (std::size_t k = 0; k + 1 < F0.len(); k += 2)
            if (!padic_small(F0.at(k), 1) || !padic_small(F1.at(k), 1))
                throw std::logic_error("weierstrass disk: antiderivatives lost parity");
        R.i0 = series_eval(F0, y1, cfloor).trace();
        R.i1 = series_eval(F1, y1, cfloor).trace();
        R.disks = {"affine Weierstrass disk x = " + std::to_string(xbar.v) +
                   " (conjugate pair over the unramified quadratic)"};
    }
    finish_tiny(R, precision);
    return R;
}

/// Kernel class supported in one ordinary affine residue disk: the two points
/// reduce to an involution pair (xbar, +-ybar) with ybar != 0, so
/// D = [P1 - i(P2)] with both endpoints on the branch of P1.  Expansion
/// parameter z = x - xhat around an integer lift of the center;
/// y = y0 u(z) with u rational and y0 = sqrt(f(xhat)) on the branch of P1.
inline TinyIntegralResult affine_ordinary_disk(const MumfordPoint<Rat>& D,
                                               const Poly<Rat>& fR, const Fp& xbar,
                                               std::uint64_t p, long precision) {
    static const char* not_kernel =
        "tiny integrals: affine support is not an involution pair in a single residue "
        "disk - the class is not in the kernel of reduction";
    TinyIntegralResult R;
    R.form = "affine";
    Rat a1 = D.a.c[1], a0 = D.a.c[0];
    Rat da = a1 * a1 - Rat(4) * a0;
    if (elem_is_zero(da))
        throw input_error("tiny integrals: a doubled point over an ordinary disk center "
                          "is not in the kernel of reduction");
    long vda = val_p(da, Int(p));
    if (vda <= 0 || vda % 2 != 0) throw input_error(not_kernel);

    std::size_t nterms = static_cast<std::size_t>(precision) + 12;
    long maxdiv = log_floor(p, static_cast<long>(nterms) + 1);
    long W = precision + maxdiv + 6;
    long cfloor = -maxdiv - 1;

    Rat xh = Rat(Int(xbar.v));
    Rat fxh = eval(fR, xh);
    // ordinary disk: f(xhat) is a unit

    FormalSeries zser(p, nterms);
    zser.c[0] = PadicNumber::from_rat(xh, p, W);
    zser.c[1] = PadicNumber::from_rat(Rat(1), p, W);
    FormalSeries fz = series_substitute_poly(fR, zser, W);
    FormalSeries u =
        series_sqrt(series_scalar(PadicNumber::from_rat(Rat(1) / fxh, p, W), fz));
    if (u.c[0].residue().v != 1) u = series_neg(u);
    FormalSeries ginv = series_inverse(u);
    PadicNumber half = PadicNumber::from_rat(Rat(1, 2), p, W);
    FormalSeries S0 = series_scalar(half, ginv);
    FormalSeries S1 =
        series_add(series_scalar(half * PadicNumber::from_rat(xh, p, W), ginv),
                   series_scalar(half, series_shift_up(ginv, 1)));
    FormalSeries F0 = series_integrate(S0);
    FormalSeries F1 = series_integrate(S1);

    PadicNumber c0 = PadicNumber::from_rat(fxh, p, W);
    PadicNumber dpa = PadicNumber::from_rat(da, p, W);
    PadicNumber ma1h = PadicNumber::from_rat(-a1 / Rat(2), p, W);
    PadicNumber xhp = PadicNumber::from_rat(xh, p, W);

    if (dpa.is_unit_square()) {
        PadicNumber sd = dpa.sqrt();
        PadicNumber x1 = ma1h + sd * half;
        PadicNumber x2 = ma1h - sd * half;
        PadicNumber y1 = eval_poly_padic(D.b, x1);
        PadicNumber y2 = eval_poly_padic(D.b, x2);
        PadicNumber z1 = x1 - xhp;
        PadicNumber z2 = x2 - xhp;
        // a weak-zero z means the point sits at the center lift itself, which
        // series_eval handles directly
        if ((!z1.is_weak_zero() && z1.val < 1) || (!z2.is_weak_zero() && z2.val < 1))
            throw input_error(not_kernel);
        PadicNumber y0 = c0.sqrt();
        auto matches = [&](const PadicNumber& cand) {
            PadicNumber yy = cand * series_eval(u, z1, 0);
            return clamp_prec(yy - y1, precision).is_weak_zero();
        };
        if (!matches(y0)) {
            y0 = -y0;
            if (!matches(y0))
                throw std::logic_error("tiny integrals: branch matching failed");
        }
        // i(P2) lies on the same branch: y(z2) = -y2
        PadicNumber chk = y0 * series_eval(u, z2, 0) + y2;
        if (!clamp_prec(chk, precision).is_weak_zero()) throw input_error(not_kernel);
        PadicNumber yi = y0.inv();
        R.i0 = (series_eval(F0, z1, cfloor) - series_eval(F0, z2, cfloor)) * yi;
        R.i1 = (series_eval(F1, z1, cfloor) - series_eval(F1, z2, cfloor)) * yi;
        R.disks = {"affine disk x = " + std::to_string(xbar.v) + " (rational pair)"};
    } else {
        Int pk(1);
        for (long i = 0; i < vda / 2; ++i) pk *= p;
        Rat d0 = da / Rat(pk * pk);
        PadicNumber d0p = PadicNumber::from_rat(d0, p, W);
        if (legendre(mod_u64(Int(num(fxh) * den(fxh)), p), p) != -1)
            throw input_error(not_kernel);
        PadicQuad x1(ma1h, PadicNumber::from_rat(Rat(pk, 2), p, W), d0p);
        PadicQuad x2 = x1.conj();
        PadicQuad y1 = eval_poly_padic(D.b, x1);
        PadicQuad y2 = eval_poly_padic(D.b, x2);
        PadicQuad xhq = PadicQuad::embed(xhp, d0p);
        PadicQuad z1 = x1 - xhq;
        PadicQuad z2 = x2 - xhq;
        if (z1.is_weak_zero() || z1.twice_val() < 2 || z2.is_weak_zero() ||
            z2.twice_val() < 2)
            throw input_error(not_kernel);
        // y0 = sqrt(f(xhat)) = sr * w with w^2 = d0 (both nonsquare units)
        PadicNumber sr = (c0 * d0p.inv()).sqrt();
        PadicQuad y0(PadicNumber::zero(p), sr, d0p);
        auto matches_q = [&](const PadicQuad& cand) {
            PadicQuad yy = cand * series_eval(u, z1, 0) - y1;
            yy.a = clamp_prec(yy.a, precision);
            yy.b = clamp_prec(yy.b, precision);
            return yy.is_weak_zero();
        };
        if (!matches_q(y0)) {
            y0 = -y0;
            if (!matches_q(y0))
                throw std::logic_error("tiny integrals: branch matching failed");
        }
        PadicQuad chk = y0 * series_eval(u, z2, 0) + y2;
        chk.a = clamp_prec(chk.a, precision);
        chk.b = clamp_prec(chk.b, precision);
        if (!chk.is_weak_zero()) throw input_error(not_kernel);
        PadicQuad yi = y0.inv();
        PadicQuad I0 = (series_eval(F0, z1, cfloor) - series_eval(F0, z2, cfloor)) * yi;
        PadicQuad I1 = (series_eval(F1, z1, cfloor) - series_eval(F1, z2, cfloor)) * yi;
        if (!padic_small(I0.b, precision) || !padic_small(I1.b, precision))
            throw std::logic_error("tiny integrals: Galois-stable sum has a quadratic "
                                   "part");
        R.i0 = I0.a;
        R.i1 = I1.a;
        R.disks = {"affine disk x = " + std::to_string(xbar.v) +
                   " (conjugate pair over the unramified quadratic)"};
    }
    finish_tiny(R, precision);
    return R;
}

} // namespace detail

/// Tiny integrals over an arbitrary divisor class in the kernel of reduction
/// at p: dispatches between the identity, support at infinity (coefficients
/// of a blow up), and support in a single affine residue disk (a stays
/// integral while b blows up; the disk center is a Weierstrass point or an
/// ordinary point).  Classes not in the kernel are rejected.
inline TinyIntegralResult kernel_tiny_integrals(const MumfordPoint<Rat>& D,
                                                const HyperCurve& C, std::uint64_t p,
                                                long precision = 8) {
    require_integration_prime(C, p, "tiny integrals");
    JacModel<Rat> m = make_jac_model(C);
    validate_point(D, m);
    if (is_identity(D) || D.a.degree() == 0 || detail::poly_min_val(D.a, p) < 0)
        return tiny_integrals_at_infinity(D, C, p, precision);
    if (detail::poly_min_val(D.b, p) >= 0)
        throw input_error("tiny integrals: the class reduces to a nonzero class mod p "
                          "and is not in the kernel of reduction");
    if (D.a.degree() != 2)
        throw std::logic_error("tiny integrals: weight-1 state with integral a and "
                               "non-integral b cannot exist");
    // same-disk support: a must reduce to a square
    Rat a1 = D.a.c[1];
    Rat dd = a1 * a1 - Rat(4) * D.a.c[0];
    if (!elem_is_zero(dd) && val_p(dd, Int(p)) <= 0)
        throw input_error("tiny integrals: affine support spans two residue disks and is "
                          "not in the kernel of reduction");
    Poly<Rat> fR = to_rat(C.f);
    Fp xbar = fp_of_rat(-a1 / Rat(2), p);
    Fp fb = eval(C.reduce(p).f, xbar);
    if (fb.v == 0)
        return detail::affine_weierstrass_disk(D, fR, xbar, p, precision);
    return detail::affine_ordinary_disk(D, fR, xbar, p, precision);
}

// ---------------------------------------------------------------------------
// Annihilating differential.

/// A differential alpha0 * dx/2y + alpha1 * x dx/2y annihilating the closure
/// of <P> in J(Q_p) under the abelian-logarithm pairing, scaled so that
/// min(v(alpha0), v(alpha1)) = 0.  rbar0/rbar1 is its nonzero reduction, the
/// residual pair used by the residue criteria; prec certifies the alphas.
/// May throw ramified_support_error, in which case the caller should retry
/// with another prime.
struct AnnihilatingDifferential {
    std::uint64_t p = 0;
    Int m;
    PadicNumber alpha0, alpha1;
    Fp rbar0, rbar1;
    long prec = 0;
};

inline AnnihilatingDifferential annihilating_differential(const MumfordPoint<Rat>& P,
                                                          const HyperCurve& C,
                                                          std::uint64_t p,
                                                          long precision = 6,
                                                          long rho_budget = 2000000) {
    require_integration_prime(C, p, "annihilating differential");
    KernelMultiple K = kernel_multiple(P, C, p, rho_budget);
    if (K.torsion)
        throw input_error("annihilating differential: the input point is torsion; use "
                          "the torsion pull-back route");
    JacModel<Rat> m = make_jac_model(C);
    MumfordPoint<Rat> mP2 = scalar_mul(Int(2), K.mP, m);

    long prec = precision;
    for (int attempt = 0;; ++attempt) {
        TinyIntegralResult T = kernel_tiny_integrals(K.mP, C, p, prec);
        PadicNumber c0 = T.i1, c1 = -T.i0;  // alpha = (I1 : -I0)
        bool z0 = c0.is_exact_zero() || c0.is_weak_zero();
        bool z1 = c1.is_exact_zero() || c1.is_weak_zero();
        long vmin = std::min(z0 ? LONG_MAX : c0.val, z1 ? LONG_MAX : c1.val);
        long cert = 0;
        if (vmin != LONG_MAX) {
            c0 = detail::padic_shift(clamp_prec(c0, T.prec), vmin);
            c1 = detail::padic_shift(clamp_prec(c1, T.prec), vmin);
            cert = std::min(c0.is_exact_zero() ? LONG_MAX : c0.aprec,
                            c1.is_exact_zero() ? LONG_MAX : c1.aprec);
        }
        if (vmin == LONG_MAX || cert < 1) {
            if (attempt >= 3)
                throw budget_error("annihilating differential: both integrals vanish to "
                                   "working precision after three escalations");
            prec += 4;
            continue;
        }

        AnnihilatingDifferential w;
        w.p = p;
        w.m = K.m;
        w.alpha0 = c0;
        w.alpha1 = c1;
        w.prec = cert;
        w.rbar0 = c0.residue();
        w.rbar1 = c1.residue();
        if (w.rbar0.v == 0 && w.rbar1.v == 0)
            throw std::logic_error("annihilating differential: normalized pair reduced "
                                   "to zero");

        // re-verification: the pairing must vanish against the kernel multiple
        // itself and against the independently integrated class 2 m P
        PadicNumber chk1 = clamp_prec(w.alpha0 * T.i0 + w.alpha1 * T.i1, cert);
        TinyIntegralResult T2 = kernel_tiny_integrals(mP2, C, p, prec);
        PadicNumber chk2 = clamp_prec(w.alpha0 * T2.i0 + w.alpha1 * T2.i1, cert);
        if (!chk1.is_weak_zero() && !chk1.is_exact_zero())
            throw std::logic_error("annihilating differential: pairing against the "
                                   "kernel multiple does not vanish");
        if (!chk2.is_weak_zero() && !chk2.is_exact_zero())
            throw std::logic_error("annihilating differential: pairing against twice "
                                   "the kernel multiple does not vanish");
        return w;
    }
}

// ---------------------------------------------------------------------------
// Residue criteria.

/// True when the reduced differential (rbar0 + rbar1 x) dx/2y vanishes at no
/// F_p-point of the curve, which makes C(Q) -> C(F_p) injective.  Its divisor
/// is the pair of points over x = xi = -rbar0/rbar1 (xi = infinity when
/// rbar1 = 0), so the criterion is that those points are not F_p-rational:
/// f(xi) a non-square (a zero of f counts as a square: the Weierstrass point
/// over xi is rational), respectively for xi = infinity a degree-6 model with
/// non-square leading coefficient.
inline bool omega_nonvanishing(const Fp& rbar0, const Fp& rbar1, const HyperCurve& C,
                               std::uint64_t p) {
    require_integration_prime(C, p, "residue criterion");
    if (rbar0.v == 0 && rbar1.v == 0)
        throw input_error("residue criterion: the residual pair must be nonzero");
    CurveFp Cp = C.reduce(p);
    if (rbar1.v != 0) {
        Fp xi = -(rbar0 * rbar1.inv());
        return !eval(Cp.f, xi).is_square();
    }
    if (C.f.degree() != 6) return false;  // the quintic infinity point is rational
    return !fp_of_rat(Rat(C.f.lead()), p).is_square();
}

inline bool omega_nonvanishing(const AnnihilatingDifferential& w, const HyperCurve& C) {
    return omega_nonvanishing(w.rbar0, w.rbar1, C, w.p);
}

/// Injectivity of C(Q) -> C(F_p) when a global annihilating differential
/// vanishes at the rational point Q (the split-Jacobian fallback).  Valid for
/// p > 3 of good reduction: every disk where the differential does not vanish
/// carries at most one rational point, and the disk of Q carries only Q
/// provided Q is a Weierstrass point (the differential then vanishes to even
/// order, and by the even parity of Weierstrass expansions its local
/// antiderivative keeps a single zero) or the reduction of Q is not a
/// Weierstrass point.  Returns false exactly when that proviso fails.
inline bool split_injectivity(const CurvePoint& Q, const HyperCurve& C, std::uint64_t p) {
    require_integration_prime(C, p, "split injectivity");
    JacModel<Rat> m = make_jac_model(C);
    validate_curve_point(Q, m);
    if (Q.infinite) return true;  // quintic: Weierstrass; sextic: stays non-Weierstrass
    if (elem_is_zero(Q.y)) return true;  // Weierstrass point
    if (!elem_is_zero(Q.x) && val_p(Q.x, Int(p)) < 0)
        return m.even;  // reduces to infinity, Weierstrass only on the quintic model
    return val_p(Q.y, Int(p)) == 0;  // otherwise the reduction is (xbar, 0)
}

// ---------------------------------------------------------------------------
// Rank-0 pull-back.

/// C(Q) when J(Q) is exactly the proved torsion subgroup: the rational points
/// are the preimages of the torsion classes under Q |-> [Q - i(Q)].  The
/// identity pulls back to the rational Weierstrass points (plus infinity on a
/// quintic model), a tag class to its infinity branch, and a class with
/// a = (x - xi)^2 to the pair (xi, +-b(xi)).  Refuses unproved torsion input.
inline std::vector<CurvePoint> rank0_points(const HyperCurve& C, const TorsionResult& T,
                                            long rho_budget = 2000000) {
    if (!T.proved)
        throw input_error("rank-0 points: the torsion subgroup is not proved complete");
    JacModel<Rat> m = make_jac_model(C);
    std::set<std::string> tkeys;
    for (const auto& el : T.elements) tkeys.insert(mumford_key(el));

    std::vector<CurvePoint> out;
    std::set<std::string> seen;
    auto add = [&](CurvePoint Q) {
        validate_curve_point(Q, m);
        if (!tkeys.count(mumford_key(difference_embed(Q, m))))
            throw std::logic_error("rank-0 points: a recovered point does not embed into "
                                   "the torsion subgroup");
        std::string k = Q.infinite ? "oo" + std::to_string(Q.sign)
                                   : elem_key(Q.x) + "|" + elem_key(Q.y);
        if (seen.insert(k).second) out.push_back(Q);
    };

    for (const auto& el : T.elements) {
        if (is_identity(el)) {
            for (const Rat& r : rational_poly_roots(C.f, rho_budget))
                add(CurvePoint{false, 0, r, Rat(0)});
            if (!m.even) add(CurvePoint{true, 0, Rat(0), Rat(0)});
        } else if (el.a.degree() == 0 && el.inf_tag != 0) {
            add(CurvePoint{true, el.inf_tag, Rat(0), Rat(0)});
        } else if (el.a.degree() == 2) {
            Rat a1 = el.a.c[1], a0 = el.a.c[0];
            if (elem_is_zero(a1 * a1 - Rat(4) * a0)) {
                Rat xi = -a1 / Rat(2);
                Rat y0 = eval(el.b, xi);
                add(CurvePoint{false, 0, xi, y0});
                add(CurvePoint{false, 0, xi, -y0});
            }
        }
    }
    std::sort(out.begin(), out.end(), point_order_less);
    return out;
}

} // namespace g2
