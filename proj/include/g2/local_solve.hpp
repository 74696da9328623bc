#pragma once

#include "g2/curve.hpp"
#include "g2/factor.hpp"
#include "g2/fq.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace g2 {

// ---------------------------------------------------------------------------
// Local solvability over Q: the real place, p = 2, and odd primes.
// Places outside a small critical set never obstruct (large-prime counting
// bound), so the everywhere-local decision touches finitely many places.
// ---------------------------------------------------------------------------

enum class PlaceMethod {
    infinity_point,
    real_test,
    lip,
    sop,
    lipe,
    ep,
    fbar_zero,
    nonsquare_square,
    p1_skip,
};

inline const char* method_name(PlaceMethod m) {
    switch (m) {
        case PlaceMethod::infinity_point: return "infinity-point";
        case PlaceMethod::real_test: return "real-test";
        case PlaceMethod::lip: return "LIP";
        case PlaceMethod::sop: return "SOP";
        case PlaceMethod::lipe: return "LIPE";
        case PlaceMethod::ep: return "EP";
        case PlaceMethod::fbar_zero: return "fbar-zero-procedure";
        case PlaceMethod::nonsquare_square: return "nonsquare-square-procedure";
        case PlaceMethod::p1_skip: return "P1-skip";
    }
    return "?";
}

/// A place of Q: the real place, a finite prime, or "all places at once"
/// (used when one global argument settles every place simultaneously).
struct Place {
    bool real = false;
    bool all = false;
    Int p = 0;

    static Place real_place() { Place w; w.real = true; return w; }
    static Place prime(Int q) { Place w; w.p = std::move(q); return w; }
    static Place all_places() { Place w; w.all = true; return w; }
    bool operator<(const Place& o) const {
        if (all != o.all) return all; // blanket report sorts first
        if (real != o.real) return real; // then the real place
        return p < o.p;
    }
    bool operator==(const Place& o) const {
        return real == o.real && all == o.all && p == o.p;
    }
    std::string str() const { return all ? "all" : real ? "real" : p.str(); }
};

struct PlaceReport {
    Place place;
    bool solvable = false;
    PlaceMethod method = PlaceMethod::lip;
};

namespace detail {

inline long descent_budget(const Poly<Int>& f, const Int& p) {
    Int r = resultant(f, derivative(f));
    if (r == 0) throw input_error("local solver requires squarefree input");
    return 2 * val_p(r, p) + 5;
}

/// f(a + p x) with integer coefficients.
inline Poly<Int> shift_scale(const Poly<Int>& f, const Int& a, const Int& p) {
    return compose(f, poly_of<Int>({a, p}));
}

inline Poly<Int> exact_div(const Poly<Int>& f, const Int& d) {
    std::vector<Int> c = f.c;
    for (auto& x : c) {
        if (x % d != 0) throw std::logic_error("inexact polynomial division by constant");
        x /= d;
    }
    return Poly<Int>(std::move(c));
}

inline long content_val(const Poly<Int>& f, const Int& p) {
    long m = -1;
    for (const auto& c : f.c) {
        if (c == 0) continue;
        long v = val_p(c, p);
        if (m < 0 || v < m) m = v;
        if (m == 0) break;
    }
    return m; // -1 for the zero polynomial
}

/// Residue-enumerating variant; feasible for small p.
inline bool lip_enumerate(const Poly<Int>& f, const Int& p, long depth) {
    if (depth < 0) throw std::logic_error("local descent exceeded squarefree depth bound");
    std::uint64_t pc = static_cast<std::uint64_t>(p);
    Poly<Fp> fb = poly_mod_p(f, pc);
    Poly<Fp> fd = derivative(fb);
    std::vector<Poly<Int>> next;
    for (std::uint64_t xi = 0; xi < pc; ++xi) {
        Fp v = eval(fb, Fp(xi, pc));
        if (!v.is_zero()) {
            if (v.is_square()) return true;
            continue;
        }
        if (!eval(fd, Fp(xi, pc)).is_zero()) return true;
        Int a(xi);
        Int fa = eval(f, a);
        if (fa % (p * p) == 0) next.push_back(exact_div(shift_scale(f, a, p), p * p));
    }
    for (const auto& h : next)
        if (lip_enumerate(h, p, depth - 1)) return true;
    return false;
}

/// Shape-analysis variant, sound for p > 50: a squarefree part of positive
/// degree forces smooth residue points by the Weil bound, so only the
/// "nonsquare constant times a square" shape (or zero reduction) descends.
inline bool lip_shape(const Poly<Int>& f, const Int& p, long depth) {
    if (depth < 0) throw std::logic_error("local descent exceeded squarefree depth bound");
    long m = content_val(f, p);
    if (m > 0) {
        Poly<Int> f1 = f;
        Int pm = 1;
        for (long i = 0; i < m; ++i) pm *= p;
        f1 = exact_div(f1, pm);
        if (m % 2 == 0) return lip_shape(f1, p, depth - 1);
        // odd content valuation: points require x-residues at roots of f1 mod p
        Poly<Fq> f1b = poly_mod_q(f1, p);
        for (const Int& xi : roots_fq(f1b, p)) {
            Poly<Int> h = exact_div(shift_scale(f1, xi, p), p);
            if (lip_shape(h, p, depth - 1)) return true;
        }
        return false;
    }
    Poly<Fq> fb = poly_mod_q(f, p);
    if (fb.degree() == 0) {
        // nonzero constant reduction: solvable iff that unit is a square
        return fb.c[0].is_square();
    }
    Fq gamma = fb.lead();
    auto [S, U] = square_decompose_fq(fb, p);
    if (U.degree() >= 1) return true; // Weil margin at p > 50
    if (gamma.is_square()) return true;
    for (const Int& xi : roots_fq(S, p)) {
        Int fa = eval(f, xi);
        if (fa % (p * p) != 0) continue;
        Poly<Int> h = exact_div(shift_scale(f, xi, p), p * p);
        if (lip_shape(h, p, depth - 1)) return true;
    }
    return false;
}

constexpr long kEnumerationCeiling = 50;

} // namespace detail

/// Integral solvability of y^2 = f(x) over Z_p, odd p.
inline bool lip_odd(const Poly<Int>& f, const Int& p) {
    if (p == 2 || !is_prime(p)) throw input_error("lip_odd needs an odd prime");
    long depth = detail::descent_budget(f, p);
    if (p <= detail::kEnumerationCeiling) return detail::lip_enumerate(f, p, depth);
    return detail::lip_shape(f, p, depth);
}

/// C(Q_p) != {} for the smooth model of y^2 = f(x), odd p; deg f in {5, 6}.
inline bool sop(const Poly<Int>& f, const Int& p) {
    if (p == 2 || !is_prime(p)) throw input_error("sop needs an odd prime");
    if (f.degree() == 5) return true; // rational point at infinity
    if (f.degree() != 6) throw input_error("sop needs degree 5 or 6");
    const Int& a6 = f.c[6];
    const Int& a5 = f.c[5];
    if (a6 % p != 0) {
        if (legendre_int(a6, p) == 1) return true; // two rational points at infinity
    } else if (a5 % p != 0) {
        return true; // odd-degree reduction: smooth point at infinity
    }
    if (a6 % (p * p) == 0) {
        // points can reduce to infinity: z-chart with z in pZ_p
        Poly<Int> rev = reverse_poly(f, 6);
        Poly<Int> g = detail::exact_div(detail::shift_scale(rev, Int(0), p), p * p);
        if (lip_odd(g, p)) return true;
    }
    return lip_odd(f, p);
}

/// y^2 + c y = f(x) over Z_2; 4f + c^2 squarefree.
inline bool lipe_even(const Int& c, const Poly<Int>& f) {
    Poly<Int> inv4 = Int(4) * f + poly_of<Int>({c * c});
    long depth = detail::descent_budget(inv4, Int(2));
    struct Rec {
        static bool run(const Int& c, const Poly<Int>& f, long depth) {
            if (depth < 0) throw std::logic_error("local descent exceeded squarefree depth bound");
            if (c % 2 != 0) {
                // y^2 + y = v over F_2 is solvable iff v = 0
                for (Int xi = 0; xi <= 1; ++xi)
                    if (eval(f, xi) % 2 == 0) return true;
                return false;
            }
            std::vector<std::pair<Int, Poly<Int>>> next;
            Poly<Int> fd = derivative(f);
            for (Int xi = 0; xi <= 1; ++xi) {
                if (eval(fd, xi) % 2 != 0) return true;
                Int a = xi;
                Int b = mod_pos(eval(f, xi), Int(2)); // the unique square root mod 2
                Int t = eval(f, a) - b * b - c * b;
                if (t % 4 == 0) {
                    Int c2 = (2 * b + c) / 2;
                    Poly<Int> h = detail::shift_scale(f, a, Int(2)) - poly_of<Int>({b * b + c * b});
                    next.emplace_back(c2, detail::exact_div(h, Int(4)));
                }
            }
            for (const auto& [c2, h] : next)
                if (run(c2, h, depth - 1)) return true;
            return false;
        }
    };
    return Rec::run(c, f, depth);
}

/// C(Q_2) != {} for the smooth model; deg f in {5, 6}.
inline bool ep(const Poly<Int>& f) {
    if (f.degree() == 5) return true;
    if (f.degree() != 6) throw input_error("ep needs degree 5 or 6");
    if (lipe_even(Int(0), f)) return true;
    Poly<Int> rev = reverse_poly(f, 6);
    if (lipe_even(Int(0), detail::shift_scale(rev, Int(0), Int(2)))) return true;
    return false;
}

/// Odd p dividing every coefficient of f.
inline bool solve_at_content_prime(const Poly<Int>& f, const Int& p) {
    if (p == 2 || !is_prime(p)) throw input_error("content procedure needs an odd prime");
    long m = detail::content_val(f, p);
    if (m <= 0) throw input_error("content procedure: p does not divide the content");
    Int pm = 1;
    for (long i = 0; i < m; ++i) pm *= p;
    Poly<Int> f1 = detail::exact_div(f, pm);
    if (m % 2 == 0) return sop(f1, p);
    if (f.degree() == 5) return true; // rational point at infinity on the curve
    // odd minimal valuation: x must reduce to a root of f1 (or to infinity)
    Poly<Fq> f1b = poly_mod_q(f1, p);
    for (const Int& xi : roots_fq(f1b, p)) {
        Poly<Int> h = detail::exact_div(detail::shift_scale(f1, xi, p), p);
        if (lip_odd(h, p)) return true;
    }
    if (f1.c[6] % p == 0) {
        Poly<Int> rev = reverse_poly(f1, 6);
        Poly<Int> h = detail::exact_div(detail::shift_scale(rev, Int(0), p), p);
        if (lip_odd(h, p)) return true;
    }
    return false;
}

/// Monic cubic q with deg(f - lc(f) q^2) <= 2, plus that remainder.
/// Denominators divide powers of 2 lc(f).
inline std::pair<Poly<Rat>, Poly<Rat>> monic_square_approx(const Poly<Int>& f) {
    if (f.degree() != 6) throw input_error("square approximation needs degree 6");
    Rat c(f.c[6]);
    if (c == 0) throw input_error("zero leading coefficient");
    Rat q2 = Rat(f.c[5]) / (2 * c);
    Rat q1 = (Rat(f.c[4]) / c - q2 * q2) / 2;
    Rat q0 = (Rat(f.c[3]) / c - 2 * q2 * q1) / 2;
    Poly<Rat> q = poly_of<Rat>({q0, q1, q2, Rat(1)});
    Poly<Rat> r = to_rat(f) - c * (q * q);
    if (r.degree() > 2) throw std::logic_error("square approximation left high-degree remainder");
    return {q, r};
}

/// Odd primes where f can reduce to (constant) times (square): divisors of the
/// numerator content of r away from 2 lc(f), together with common divisors of
/// the two top coefficients (those are handled by sop directly).
inline std::vector<Int> nonsquare_square_prime_candidates(const Poly<Int>& f,
                                                          long rho_budget = 2000000) {
    auto [q, r] = monic_square_approx(f);
    std::set<Int> out;
    if (r.is_zero()) throw input_error("polynomial is a constant times a perfect square");
    auto [rn, rd] = clear_denominators(r);
    Int ct = content(rn);
    // numerator of the fractional content ideal: strip the denominator part
    for (auto& [pp, e] : factor_integer(ct, rho_budget)) {
        if (pp == 2) continue;
        if (f.c[6] % pp == 0) continue;
        if (rd % pp == 0) {
            // cancel against the denominator: keep only if the numerator wins
            if (e <= val_p(rd, pp)) continue;
        }
        out.insert(pp);
    }
    Int g = gcd(f.c[6], f.c[5]);
    for (auto& [pp, e] : factor_integer(g, rho_budget))
        if (pp != 2) out.insert(pp);
    return std::vector<Int>(out.begin(), out.end());
}

/// Decision at an odd prime p with p coprime to 2 lc(f) and fbar = cbar * qbar^2.
inline bool solve_at_nonsquare_square_prime(const Poly<Int>& f, const Int& p) {
    if (p == 2 || !is_prime(p)) throw input_error("nonsquare-square procedure needs an odd prime");
    auto [q, r] = monic_square_approx(f);
    if ((2 * f.c[6]) % p == 0) throw input_error("nonsquare-square procedure needs p coprime to 2 lc(f)");
    Poly<Fq> rb = poly_mod_q(r, p);
    if (!rb.is_zero()) throw input_error("nonsquare-square procedure: shape precondition fails");
    if (legendre_int(f.c[6], p) == 1) return true; // smooth points at infinity
    Poly<Fq> qb = poly_mod_q(q, p);
    for (const Int& xi : roots_fq(qb, p)) {
        Int fa = eval(f, xi);
        if (fa % (p * p) != 0) continue;
        Poly<Int> h = detail::exact_div(detail::shift_scale(f, xi, p), p * p);
        if (sop(h, p)) return true;
    }
    return false;
}

/// The finite set of places that can obstruct: the real place, 2, odd p < 14,
/// content divisors, and the candidate primes of the constant-times-square shape.
inline std::vector<Place> critical_places(const HyperCurve& C, long rho_budget = 2000000) {
    std::set<Place> out;
    out.insert(Place::real_place());
    out.insert(Place::prime(Int(2)));
    for (long q : {3L, 5L, 7L, 11L, 13L}) out.insert(Place::prime(Int(q)));
    Int ct = content(C.f);
    for (auto& [pp, e] : factor_integer(ct, rho_budget))
        if (pp != 2) out.insert(Place::prime(pp));
    if (C.deg() == 6)
        for (const Int& pp : nonsquare_square_prime_candidates(C.f, rho_budget))
            out.insert(Place::prime(pp));
    return std::vector<Place>(out.begin(), out.end());
}

/// Verdict at one place with the method actually used.
inline PlaceReport place_report(const HyperCurve& C, const Place& pl) {
    PlaceReport rep;
    rep.place = pl;
    if (pl.all) throw input_error("place_report needs a concrete place");
    if (pl.real) {
        rep.solvable = C.has_real_points();
        rep.method = PlaceMethod::real_test;
        return rep;
    }
    const Int& p = pl.p;
    if (C.deg() == 5) {
        rep.solvable = true;
        rep.method = PlaceMethod::infinity_point;
        return rep;
    }
    if (p == 2) {
        rep.solvable = ep(C.f);
        rep.method = PlaceMethod::ep;
        return rep;
    }
    if (content(C.f) % p == 0) {
        rep.solvable = solve_at_content_prime(C.f, p);
        rep.method = PlaceMethod::fbar_zero;
        return rep;
    }
    if (p < 14 || gcd(C.f.c[6], C.f.c[5]) % p == 0) {
        rep.solvable = sop(C.f, p);
        rep.method = PlaceMethod::sop;
        return rep;
    }
    auto [q, r] = monic_square_approx(C.f);
    (void)q;
    bool shape = (2 * C.f.c[6]) % p != 0 && poly_mod_q(r, p).is_zero();
    if (shape) {
        rep.solvable = solve_at_nonsquare_square_prime(C.f, p);
        rep.method = PlaceMethod::nonsquare_square;
        return rep;
    }
    rep.solvable = true; // large prime outside every special class
    rep.method = PlaceMethod::p1_skip;
    return rep;
}

struct ElsResult {
    bool solvable = false;
    std::vector<PlaceReport> reports;
};

/// Everywhere-local solvability with one report per critical place.
inline ElsResult is_els(const HyperCurve& C, long rho_budget = 2000000) {
    ElsResult res;
    if (C.deg() == 5) {
        PlaceReport rep;
        rep.place = Place::all_places(); // the point at infinity is rational
        rep.solvable = true;
        rep.method = PlaceMethod::infinity_point;
        res.reports.push_back(rep);
        res.solvable = true;
        return res;
    }
    res.solvable = true;
    for (const Place& pl : critical_places(C, rho_budget)) {
        PlaceReport rep = place_report(C, pl);
        res.solvable = res.solvable && rep.solvable;
        res.reports.push_back(rep);
    }
    return res;
}

} // namespace g2
