#pragma once

#include "g2/fp.hpp"
#include "g2/sturm.hpp"

#include <utility>

namespace g2 {

/// Discriminant of f as a polynomial of its exact degree.
inline Int poly_disc(const Poly<Int>& f) {
    long d = f.degree();
    if (d < 1) throw input_error("poly_disc: degree < 1");
    Int r = resultant(f, derivative(f));
    Int q = r / f.lead();
    if (q * f.lead() != r) throw input_error("poly_disc: inexact division");
    long s = (d * (d - 1) / 2) % 2;
    return s ? -q : q;
}

/// Discriminant of the binary sextic attached to y^2 = f(x): for deg 6 this is
/// disc(f); for deg 5 the sextic acquires the root at infinity, contributing a
/// resultant factor lc(f)^2.
inline Int sextic_disc(const Poly<Int>& f) {
    if (f.degree() == 6) return poly_disc(f);
    if (f.degree() == 5) return poly_disc(f) * f.lead() * f.lead();
    throw input_error("sextic_disc: degree must be 5 or 6");
}

/// Reduction of the curve at a prime of good reduction.
struct CurveFp {
    std::uint64_t p = 0;
    Poly<Fp> f;
    bool even_model = false; // deg 6 after reduction (two points at infinity)
};

struct HyperCurve {
    Poly<Int> f;
    Int disc; // of the attached binary sextic

    explicit HyperCurve(Poly<Int> f_) : f(std::move(f_)) {
        long d = f.degree();
        if (d != 5 && d != 6)
            throw input_error("curve: deg f must be 5 or 6");
        if (!squarefree_check(f))
            throw input_error("curve: f must be squarefree");
        disc = sextic_disc(f);
    }

    long deg() const { return f.degree(); }
    bool even_degree() const { return deg() == 6; }
    Int lc() const { return f.lead(); }

    bool good_reduction(std::uint64_t p) const {
        if (p == 2) return false;
        return mod_u64(disc, p) != 0;
    }

    CurveFp reduce(std::uint64_t p) const {
        if (!good_reduction(p)) throw input_error("curve reduction at bad prime");
        CurveFp r;
        r.p = p;
        r.f = poly_mod_p(f, p);
        // good reduction forbids losing two degrees (double root at infinity)
        if (r.f.degree() < deg() - 1)
            throw input_error("curve reduction: unexpected degree drop");
        r.even_model = (r.f.degree() == 6);
        return r;
    }

    /// False only for pointless real locus: f negative everywhere.
    bool has_real_points() const {
        if (deg() == 5) return true; // odd degree: f -> +-inf
        if (f.lead() > 0) return true;
        if (real_root_count(f) > 0) return true;
        return sgn(eval(f, Int(0))) > 0;
    }
};

/// Number of points at infinity on the smooth model over a field where
/// is_square(lc) is decided by the functor.
inline int points_at_infinity_fp(const CurveFp& C) {
    if (!C.even_model) return 1;
    return C.f.lead().is_square() ? 2 : 0;
}

/// #C(F_p) on the smooth projective model.
inline std::uint64_t count_points_fp(const CurveFp& C) {
    std::uint64_t n = points_at_infinity_fp(C);
    for (std::uint64_t x = 0; x < C.p; ++x) {
        Fp v = eval(C.f, Fp(x, C.p));
        if (v.v == 0) n += 1;
        else if (v.is_square()) n += 2;
    }
    return n;
}

/// #C(F_{p^2}); every scalar from F_p* is a square here, so an even model
/// always contributes both points at infinity.
inline std::uint64_t count_points_fp2(const CurveFp& C) {
    std::uint64_t n = C.even_model ? 2 : 1;
    std::uint64_t w = least_nonresidue(C.p);
    Poly<Fp2> f2;
    f2.c.reserve(C.f.c.size());
    for (auto& a : C.f.c) f2.c.push_back(Fp2::embed(a, w));
    for (std::uint64_t xa = 0; xa < C.p; ++xa)
        for (std::uint64_t xb = 0; xb < C.p; ++xb) {
            Fp2 x(Fp(xa, C.p), Fp(xb, C.p), w);
            Fp2 v = eval(f2, x);
            if (v.is_zero()) n += 1;
            else if (v.is_square()) n += 2;
        }
    return n;
}

} // namespace g2
