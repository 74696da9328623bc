#pragma once

#include "g2/curve.hpp"
#include "g2/factor.hpp"
#include "g2/fp.hpp"
#include "g2/mumford.hpp"
#include "g2/points.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace g2 {

// ---------------------------------------------------------------------------
// Canonical string keys for group elements (hashable, deterministic).

inline std::string elem_key(const Fp& x) { return std::to_string(x.v); }

inline std::string elem_key(const Rat& x) {
    std::ostringstream o;
    o << x;
    return o.str();
}

template <class R>
std::string mumford_key(const MumfordPoint<R>& d) {
    std::string s = "t";
    s += std::to_string(d.inf_tag);
    s += ";a:";
    for (const auto& c : d.a.c) {
        s += elem_key(c);
        s += ',';
    }
    s += ";b:";
    for (const auto& c : d.b.c) {
        s += elem_key(c);
        s += ',';
    }
    return s;
}

// ---------------------------------------------------------------------------
// |J(F_p)| from the zeta function of the reduced curve.

/// Order of the Jacobian over F_p, computed from the point counts of the
/// curve over F_p and F_{p^2}: with c1 = #C(F_p) - p - 1 and
/// c2 = (#C(F_{p^2}) - p^2 - 1 + c1^2) / 2 the order equals
/// 1 + c1 + c2 + p c1 + p^2.  The result is checked against the Weil
/// interval (sqrt(p)-1)^4 <= N <= (sqrt(p)+1)^4 using exact integer
/// arithmetic.
inline Int jacobian_order(const CurveFp& C) {
    Int p(C.p);
    Int n1(count_points_fp(C));
    Int n2(count_points_fp2(C));
    Int c1 = n1 - p - 1;
    Int twice_c2 = n2 - p * p - 1 + c1 * c1;
    if (twice_c2 % 2 != 0)
        throw std::logic_error("jacobian order: zeta coefficient is not integral");
    Int c2 = twice_c2 / 2;
    Int N = 1 + c1 + c2 + p * c1 + p * p;
    Int core = p * p + 6 * p + 1;
    Int wiggle = 16 * p * (p + 1) * (p + 1);
    Int lo = core - N;
    Int hi = N - core;
    if ((lo > 0 && lo * lo > wiggle) || (hi > 0 && hi * hi > wiggle))
        throw std::logic_error("jacobian order: Weil interval violated");
    if (N <= 0) throw std::logic_error("jacobian order: nonpositive result");
    return N;
}

/// Same, reducing a rational curve at a good odd prime first.
inline Int jacobian_order(const HyperCurve& C, std::uint64_t p) {
    if (!C.good_reduction(p)) throw input_error("jacobian order: bad reduction prime");
    CurveFp Cp = C.reduce(p);
    return jacobian_order(Cp);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of J(F_p) in Mumford form.

/// Every point of J(F_p) as a tagged Mumford representative.  The scan walks
/// all monic a of degree <= 2 and solves for the matching b, so it costs
/// O(p^2) candidate pairs; p is capped rather than letting the loop degrade
/// (a baby-step giant-step backend for large p is intentionally out of
/// scope).  The final count is verified against the zeta-function order.
inline std::vector<MumfordPoint<Fp>> enumerate_jacobian(const CurveFp& C) {
    if (C.p < 3) throw input_error("jacobian enumeration: p must be an odd prime");
    if (C.p > 200)
        throw input_error("jacobian enumeration: p capped at 200; larger fields would "
                          "need a baby-step giant-step backend, which is not provided");
    JacModel<Fp> m = make_jac_model(C);
    const std::uint64_t p = C.p;
    const Fp one(1, p), zero(0, p);
    const Fp inv2 = Fp(2, p).inv();

    std::vector<MumfordPoint<Fp>> out;
    auto push = [&](Poly<Fp> a, Poly<Fp> b, int tag) {
        MumfordPoint<Fp> d;
        d.a = std::move(a);
        d.b = std::move(b);
        d.inf_tag = tag;
        validate_point(d, m);
        out.push_back(std::move(d));
    };

    // weight 0: the identity, plus the two infinity-difference classes on a
    // split even model
    out.push_back(mumford_identity(m));
    if (m.even && m.split) {
        push(poly_of<Fp>({one}), Poly<Fp>{}, 1);
        push(poly_of<Fp>({one}), Poly<Fp>{}, -1);
    }

    // affine points of the curve
    std::vector<std::pair<Fp, Fp>> aff;
    for (std::uint64_t xv = 0; xv < p; ++xv) {
        Fp x(xv, p);
        Fp v = eval(m.f, x);
        if (v.is_zero()) {
            aff.emplace_back(x, zero);
        } else if (v.is_square()) {
            Fp y = v.sqrt();
            aff.emplace_back(x, y);
            aff.emplace_back(x, -y);
        }
    }

    // weight 1: classes with one affine point and one rational point at
    // infinity; they exist for the odd model (single infinity) and for the
    // split even model (both branches), and not at all in the inert case
    if (!m.even) {
        for (const auto& [x, y] : aff)
            push(poly_of<Fp>({-x, one}), poly_of<Fp>({y}), 0);
    } else if (m.split) {
        for (const auto& [x, y] : aff)
            for (int tag : {1, -1})
                push(poly_of<Fp>({-x, one}), poly_of<Fp>({y}), tag);
    }

    // weight 2: monic a = x^2 + a1 x + a0 with b of degree < 2, a | b^2 - f
    const std::uint64_t nres = least_nonresidue(p);
    Poly<Fp2> f2;
    f2.c.reserve(m.f.c.size());
    for (const auto& cf : m.f.c) f2.c.push_back(Fp2::embed(cf, nres));

    for (std::uint64_t a1v = 0; a1v < p; ++a1v)
        for (std::uint64_t a0v = 0; a0v < p; ++a0v) {
            Fp a1(a1v, p), a0(a0v, p);
            Poly<Fp> A = poly_of<Fp>({a0, a1, one});
            Fp disc = a1 * a1 - Fp(4, p) * a0;
            if (disc.is_zero()) {
                // double root r: divisor 2(r, y); y = 0 would not be
                // semi-reduced, and b must be the tangent line at (r, y)
                Fp r = -(a1 * inv2);
                Fp fr = eval(m.f, r);
                if (fr.is_zero() || !fr.is_square()) continue;
                Fp y = fr.sqrt();
                Fp dfr = eval(derivative(m.f), r);
                for (int s : {0, 1}) {
                    Fp yy = s ? -y : y;
                    Fp slope = dfr * (yy + yy).inv();
                    Fp b0 = yy - slope * r;
                    push(A, poly_of<Fp>({b0, slope}), 0);
                }
            } else if (disc.is_square()) {
                // distinct rational roots r != s: interpolate b through the
                // chosen curve points above each root
                Fp sq = disc.sqrt();
                Fp r = (-a1 + sq) * inv2;
                Fp s = (-a1 - sq) * inv2;
                Fp fr = eval(m.f, r), fs = eval(m.f, s);
                std::vector<Fp> yr, ys;
                if (fr.is_zero()) {
                    yr = {zero};
                } else if (fr.is_square()) {
                    Fp t = fr.sqrt();
                    yr = {t, -t};
                } else {
                    continue;
                }
                if (fs.is_zero()) {
                    ys = {zero};
                } else if (fs.is_square()) {
                    Fp t = fs.sqrt();
                    ys = {t, -t};
                } else {
                    continue;
                }
                Fp dx_inv = (r - s).inv();
                for (const Fp& y1 : yr)
                    for (const Fp& y2 : ys) {
                        Fp b1 = (y1 - y2) * dx_inv;
                        Fp b0 = y1 - b1 * r;
                        push(A, poly_of<Fp>({b0, b1}), 0);
                    }
            } else {
                // irreducible a: Galois-stable pair of points over F_{p^2}
                if (pmod(m.f, A).is_zero()) {
                    // stable pair of branch points: b = 0
                    push(A, Poly<Fp>{}, 0);
                    continue;
                }
                Fp ratio = disc * Fp(nres, p).inv(); // quotient of non-residues
                Fp t = ratio.sqrt();
                Fp2 root(-(a1 * inv2), t * inv2, nres);
                Fp2 fr = eval(f2, root);
                if (fr.is_zero())
                    throw std::logic_error("jacobian enumeration: stray root of f");
                if (!fr.is_square()) continue;
                Fp2 beta = fr.sqrt();
                Fp hinv = root.b.inv();
                for (int sgn : {0, 1}) {
                    Fp2 bb = sgn ? -beta : beta;
                    // solve b1 x + b0 = beta at x = root (coefficients in F_p)
                    Fp b1 = bb.b * hinv;
                    Fp b0 = bb.a - b1 * root.a;
                    push(A, poly_of<Fp>({b0, b1}), 0);
                }
            }
        }

    Int expected = jacobian_order(C);
    Int got(out.size());
    if (got != expected)
        throw std::logic_error("jacobian enumeration: count disagrees with the zeta order");
    return out;
}

// ---------------------------------------------------------------------------
// Structure of a finite abelian group given its full element list.

namespace detail {

/// n * x by double-and-add through the supplied addition (n >= 0).
template <class E, class Add>
E nmul(Int n, E x, const E& id, Add add) {
    if (n < 0) throw std::logic_error("nmul: negative multiplier");
    E acc = id;
    while (n > 0) {
        if ((n & 1) != 0) acc = add(acc, x);
        n >>= 1;
        if (n > 0) x = add(x, x);
    }
    return acc;
}

template <class E>
struct PrimaryBasis {
    std::vector<E> gens;  // orders q^exps[i], exps descending
    std::vector<int> exps;
    std::map<std::string, std::vector<Int>> index; // full coordinate table
};

/// Image of multiplication by `mul` over the listed elements.  With `mul`
/// the cofactor of q^e in the group order this is exactly the q-primary
/// component, whose size is known in advance and checked.
template <class E, class Add, class Enc>
std::vector<E> primary_component(const std::vector<E>& elements, const Int& mul,
                                 std::size_t expected, const E& id, Add add, Enc encode) {
    std::vector<E> comp;
    std::set<std::string> seen;
    for (const auto& x : elements) {
        if (comp.size() == expected) break;
        E y = nmul(mul, x, id, add);
        if (seen.insert(encode(y)).second) comp.push_back(std::move(y));
    }
    if (comp.size() != expected)
        throw std::logic_error("group structure: primary component has wrong size");
    return comp;
}

/// Basis of an abelian q-group given all of its elements.  Generators are
/// chosen greedily by maximal order modulo the current span; the span and
/// its coordinate table are rebuilt after each extension, so every claim
/// (orders, trivial intersections, closure) is verified by construction and
/// any inconsistency throws.
template <class E, class Add, class Neg, class Enc>
PrimaryBasis<E> primary_structure(const Int& q, int e, const std::vector<E>& comp,
                                  const E& id, Add add, Neg neg, Enc encode) {
    PrimaryBasis<E> B;
    B.index[encode(id)] = {};
    std::vector<std::pair<E, std::vector<Int>>> span;
    span.emplace_back(id, std::vector<Int>{});

    while (span.size() < comp.size()) {
        // element of maximal order modulo the current span
        int best_j = -1;
        std::size_t best_idx = 0;
        std::vector<Int> best_tail;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (B.index.count(encode(comp[i]))) continue;
            E cur = comp[i];
            int j = 0;
            while (true) {
                cur = nmul(q, cur, id, add);
                ++j;
                auto it = B.index.find(encode(cur));
                if (it != B.index.end()) {
                    if (j > best_j) {
                        best_j = j;
                        best_idx = i;
                        best_tail = it->second;
                    }
                    break;
                }
                if (j > e)
                    throw std::logic_error("group structure: element order exceeds q^e");
            }
        }
        if (best_j <= 0) throw std::logic_error("group structure: no extending element");

        Int qj(1);
        for (int t = 0; t < best_j; ++t) qj *= q;
        // subtract the span part of q^j * h so the new generator meets the
        // span only in the identity
        E adj = id;
        for (std::size_t i = 0; i < B.gens.size(); ++i) {
            Int c = best_tail[i];
            if (c % qj != 0)
                throw std::logic_error("group structure: maximal order selection failed");
            Int d = c / qj;
            adj = add(adj, nmul(d, B.gens[i], id, add));
        }
        E g = add(comp[best_idx], neg(adj));

        // verify the exact order and the trivial intersection directly
        {
            E acc = g;
            for (Int c = 1; c < qj; ++c) {
                if (B.index.count(encode(acc)))
                    throw std::logic_error("group structure: generator meets the span early");
                acc = add(acc, g);
            }
            if (encode(acc) != encode(id))
                throw std::logic_error("group structure: generator order mismatch");
        }

        // extend the span by all multiples of the new generator
        std::vector<std::pair<E, std::vector<Int>>> next;
        std::map<std::string, std::vector<Int>> nindex;
        for (const auto& [s, coords] : span) {
            E acc = s;
            for (Int c = 0; c < qj; ++c) {
                std::string key = encode(acc);
                if (nindex.count(key))
                    throw std::logic_error("group structure: span collision");
                std::vector<Int> cc = coords;
                cc.push_back(c);
                nindex[key] = cc;
                next.emplace_back(acc, std::move(cc));
                if (c + 1 < qj) acc = add(acc, g);
            }
        }
        if (!B.exps.empty() && best_j > B.exps.back())
            throw std::logic_error("group structure: generator orders not descending");
        B.gens.push_back(std::move(g));
        B.exps.push_back(best_j);
        span = std::move(next);
        B.index = std::move(nindex);
    }

    for (const auto& x : comp)
        if (!B.index.count(encode(x)))
            throw std::logic_error("group structure: span does not close over the component");
    return B;
}

/// Extended Euclid for polynomials over a field: returns (g, s, t) with
/// s a + t b = g and g the monic gcd.
template <class R>
std::array<Poly<R>, 3> poly_ext_gcd(const Poly<R>& a, const Poly<R>& b) {
    Poly<R> r0 = a, r1 = b;
    Poly<R> s0 = poly_of<R>({one_like(a.is_zero() ? b.lead() : a.lead())});
    Poly<R> s1, t0, t1 = s0;
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = r1;
        r1 = r;
        Poly<R> s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
        Poly<R> t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (r0.is_zero()) throw std::logic_error("poly_ext_gcd: gcd of zero polynomials");
    R linv = inv_of(r0.lead());
    return {linv * r0, linv * s0, linv * t0};
}

/// Rank of a matrix over F_q (entries reduced mod q).
inline int fq_matrix_rank(std::vector<std::vector<std::uint64_t>> M, std::uint64_t q) {
    if (M.empty()) return 0;
    const std::size_t rows = M.size();
    const std::size_t cols = M[0].size();
    int rank = 0;
    for (std::size_t c = 0; c < cols && (std::size_t)rank < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t r = rank; r < rows; ++r)
            if (M[r][c] % q != 0) {
                piv = r;
                break;
            }
        if (piv == rows) continue;
        std::swap(M[rank], M[piv]);
        std::uint64_t inv = powmod(M[rank][c] % q, Int(q - 2), q);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == (std::size_t)rank) continue;
            std::uint64_t f = mulmod(M[r][c] % q, inv, q);
            if (f == 0) continue;
            for (std::size_t cc = c; cc < cols; ++cc) {
                std::uint64_t sub = mulmod(f, M[rank][cc] % q, q);
                M[r][cc] = (M[r][cc] % q + q - sub) % q;
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

template <class E>
struct GroupStructure {
    Int order = 1;
    std::vector<Int> invariants;  // ascending divisibility chain n1 | n2 | ...
    std::vector<E> generators;    // generators[i] has exact order invariants[i]
    std::map<std::string, std::vector<Int>> dlog; // full table: key -> coordinates
};

/// Invariant factors, matching generators and a complete coordinate table
/// for a finite abelian group presented as an element list.  Works prime by
/// prime on the primary components and merges the resulting cyclic chains;
/// the final table is rebuilt from the generators with one group operation
/// per element and compared against the input, so a wrong answer cannot
/// escape silently.
template <class E, class Add, class Neg, class Enc>
GroupStructure<E> abelian_group_structure(const std::vector<E>& elements, const E& id,
                                          Add add, Neg neg, Enc encode,
                                          long rho_budget = 2000000) {
    if (elements.empty()) throw input_error("group structure: empty element list");
    GroupStructure<E> st;
    st.order = Int(elements.size());

    std::map<Int, int> fac = factor_integer(st.order, rho_budget);
    std::vector<std::pair<Int, detail::PrimaryBasis<E>>> parts;
    for (const auto& [q, e] : fac) {
        Int qe(1);
        for (int t = 0; t < e; ++t) qe *= q;
        Int cof = st.order / qe;
        std::vector<E> comp = detail::primary_component(
            elements, cof, qe.template convert_to<std::size_t>(), id, add, encode);
        parts.emplace_back(q, detail::primary_structure(q, e, comp, id, add, neg, encode));
    }

    std::size_t rank = 0;
    for (const auto& part : parts) rank = std::max(rank, part.second.gens.size());
    std::vector<Int> inv_desc;
    std::vector<E> gen_desc;
    for (std::size_t i = 0; i < rank; ++i) {
        Int ni(1);
        E g = id;
        for (const auto& [q, pb] : parts) {
            if (i >= pb.gens.size()) continue;
            Int qj(1);
            for (int t = 0; t < pb.exps[i]; ++t) qj *= q;
            ni *= qj;
            g = add(g, pb.gens[i]);
        }
        inv_desc.push_back(ni);
        gen_desc.push_back(g);
    }
    st.invariants.assign(inv_desc.rbegin(), inv_desc.rend());
    st.generators.assign(gen_desc.rbegin(), gen_desc.rend());

    Int prod(1);
    for (std::size_t i = 0; i < st.invariants.size(); ++i) {
        if (st.invariants[i] < 2)
            throw std::logic_error("group structure: trivial invariant factor");
        if (i + 1 < st.invariants.size() && st.invariants[i + 1] % st.invariants[i] != 0)
            throw std::logic_error("group structure: invariant factors do not form a chain");
        prod *= st.invariants[i];
    }
    if (prod != st.order)
        throw std::logic_error("group structure: invariant factor product mismatch");

    // full coordinate table, one addition per element, checked against the
    // input element set
    std::set<std::string> universe;
    for (const auto& x : elements)
        if (!universe.insert(encode(x)).second)
            throw std::logic_error("group structure: duplicate element in input");

    const int k = static_cast<int>(st.generators.size());
    std::vector<Int> ctr(k, Int(0));
    std::vector<E> ps(k + 1, id); // ps[i] = sum of ctr[j] * gen[j] for j < i
    while (true) {
        std::string key = encode(ps[k]);
        if (!universe.count(key))
            throw std::logic_error("group structure: generated element escapes the group");
        if (st.dlog.count(key))
            throw std::logic_error("group structure: coordinate table collision");
        st.dlog[key] = ctr;
        int i = k - 1;
        while (i >= 0 && ctr[i] + 1 == st.invariants[i]) --i;
        if (i < 0) break;
        ctr[i] += 1;
        ps[i + 1] = add(ps[i + 1], st.generators[i]);
        for (int j = i + 1; j < k; ++j) {
            ctr[j] = 0;
            ps[j + 1] = ps[j];
        }
    }
    if (Int(st.dlog.size()) != st.order)
        throw std::logic_error("group structure: coordinate table is incomplete");
    return st;
}

// ---------------------------------------------------------------------------
// J(F_p) with structure and a full discrete-log table.

struct JacobianGroupFp {
    CurveFp curve;
    JacModel<Fp> model;
    Int order = 1;
    std::vector<Int> invariants;
    std::vector<MumfordPoint<Fp>> generators;
    std::map<std::string, std::vector<Int>> dlog;

    const std::vector<Int>& coords(const MumfordPoint<Fp>& d) const {
        auto it = dlog.find(mumford_key(d));
        if (it == dlog.end())
            throw std::logic_error("jacobian group: element missing from the log table");
        return it->second;
    }
};

inline JacobianGroupFp jacobian_group(const CurveFp& C, long rho_budget = 2000000) {
    JacobianGroupFp G;
    G.curve = C;
    G.model = make_jac_model(C);
    std::vector<MumfordPoint<Fp>> elems = enumerate_jacobian(C);
    MumfordPoint<Fp> id = mumford_identity(G.model);
    auto add = [&](const MumfordPoint<Fp>& x, const MumfordPoint<Fp>& y) {
        return cantor_add(x, y, G.model);
    };
    auto negf = [&](const MumfordPoint<Fp>& x) { return cantor_neg(x, G.model); };
    auto enc = [](const MumfordPoint<Fp>& x) { return mumford_key(x); };
    GroupStructure<MumfordPoint<Fp>> st =
        abelian_group_structure(elems, id, add, negf, enc, rho_budget);
    if (st.invariants.size() > 4)
        throw std::logic_error("jacobian group: more than four invariant factors");
    G.order = std::move(st.order);
    G.invariants = std::move(st.invariants);
    G.generators = std::move(st.generators);
    G.dlog = std::move(st.dlog);
    return G;
}

inline JacobianGroupFp jacobian_group(const HyperCurve& C, std::uint64_t p,
                                      long rho_budget = 2000000) {
    if (!C.good_reduction(p)) throw input_error("jacobian group: bad reduction prime");
    return jacobian_group(C.reduce(p), rho_budget);
}

// ---------------------------------------------------------------------------
// Coefficient-wise reduction of a rational Mumford point.

/// Reduce a rational Mumford point modulo p by reducing its coefficients.
/// Returns nothing when a denominator is divisible by p or the reduced pair
/// is not a valid state on the reduced curve (shape changes at such primes
/// are possible, and callers simply skip them).  When a value is returned it
/// is the honest image of the class under reduction: a is monic so its
/// degree cannot drop, and validity of the reduced pair rules out every
/// degeneration of the supporting divisor.
inline std::optional<MumfordPoint<Fp>> try_reduce_point(const MumfordPoint<Rat>& d,
                                                        const CurveFp& Cp,
                                                        const JacModel<Fp>& mp) {
    try {
        MumfordPoint<Fp> r;
        std::vector<Fp> ac, bc;
        ac.reserve(d.a.c.size());
        bc.reserve(d.b.c.size());
        for (const auto& x : d.a.c) ac.push_back(fp_of_rat(x, Cp.p));
        for (const auto& x : d.b.c) bc.push_back(fp_of_rat(x, Cp.p));
        r.a = Poly<Fp>(std::move(ac));
        r.b = Poly<Fp>(std::move(bc));
        r.inf_tag = d.inf_tag;
        if (r.a.degree() != d.a.degree()) return std::nullopt;
        validate_point(r, mp);
        return r;
    } catch (const input_error&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Exact rational 2-torsion.

/// All positive divisors of n != 0, ascending.
inline std::vector<Int> positive_divisors(const Int& n, long rho_budget = 2000000) {
    Int a = n < 0 ? Int(-n) : n;
    if (a == 0) throw input_error("positive_divisors: zero argument");
    std::map<Int, int> fac = factor_integer(a, rho_budget);
    std::vector<Int> out{Int(1)};
    for (const auto& qe : fac) {
        std::size_t base = out.size();
        Int pw(1);
        for (int i = 1; i <= qe.second; ++i) {
            pw *= qe.first;
            for (std::size_t j = 0; j < base; ++j) {
                Int d = out[j] * pw;
                out.push_back(d);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All rational roots of a nonzero integer polynomial, ascending and exact:
/// a root n/d in lowest terms has n dividing the constant term and d dividing
/// the leading coefficient, and every candidate is confirmed by exact
/// evaluation.
inline std::vector<Rat> rational_poly_roots(const Poly<Int>& f, long rho_budget = 2000000) {
    Poly<Rat> fR = to_rat(f);
    if (fR.is_zero()) throw input_error("rational roots: zero polynomial");
    std::vector<Rat> roots;
    Poly<Rat> g = fR;
    if (elem_is_zero(eval(g, Rat(0)))) {
        roots.push_back(Rat(0));
        while (elem_is_zero(eval(g, Rat(0))) && g.degree() > 0)
            g = divmod(g, poly_of<Rat>({Rat(0), Rat(1)})).first;
    }
    if (g.degree() > 0) {
        Int c0 = Int(boost::multiprecision::numerator(g.c[0]));
        Int lc0 = Int(boost::multiprecision::numerator(g.lead()));
        for (const Int& nn : positive_divisors(c0, rho_budget))
            for (const Int& dd : positive_divisors(lc0, rho_budget)) {
                if (boost::multiprecision::gcd(nn, dd) != 1) continue;
                for (int sg = -1; sg <= 1; sg += 2) {
                    Rat r = Rat(nn * sg) / Rat(dd);
                    if (elem_is_zero(eval(fR, r))) roots.push_back(r);
                }
            }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/// The nontrivial rational 2-torsion classes of the Jacobian, complete and
/// exact.  A class fixed by negation has a unique reduced representative
/// (a, 0) with a monic of degree <= 2 dividing f over Q; degree 1 occurs
/// only on odd-degree models (weight-1 states on even-degree models carry a
/// tag and are not 2-torsion).  Rational roots come from the integer root
/// bound.  Monic quadratic divisors are enumerated provably: every one
/// reduces to a quadratic divisor of f mod p at a good odd prime p away
/// from the leading coefficient, each such divisor lifts uniquely (Hensel,
/// valid since f mod p is squarefree), and the lift determines the rational
/// coefficients once the precision exceeds twice the Cauchy bound on factor
/// coefficients; candidates are confirmed by exact division, so a wrong
/// answer cannot survive and a true factor cannot be missed.  The returned
/// set plus the identity is checked to be an elementary abelian 2-group.
inline std::vector<MumfordPoint<Rat>> rational_two_torsion(const HyperCurve& C,
                                                           long rho_budget = 2000000) {
    JacModel<Rat> m = make_jac_model(C);
    MumfordPoint<Rat> id = mumford_identity(m);
    Poly<Rat> fR = to_rat(C.f);
    std::vector<MumfordPoint<Rat>> out;
    std::set<std::string> seen;
    auto push = [&](const Poly<Rat>& a) {
        MumfordPoint<Rat> d;
        d.a = a;
        d.inf_tag = 0;
        validate_point(d, m);
        if (seen.insert(mumford_key(d)).second) out.push_back(d);
    };

    // weight-1 classes over rational roots (odd-degree models only)
    if (!m.even) {
        for (const Rat& r : rational_poly_roots(C.f, rho_budget)) {
            Rat neg = -r;
            push(poly_of<Rat>({neg, Rat(1)}));
        }
    }

    // monic quadratic divisors of f over Q
    Int lcf = C.f.lead();
    Int alc = lcf < 0 ? Int(-lcf) : lcf;
    std::uint64_t p = 0;
    for (std::uint64_t q : primes_up_to(2000)) {
        if (q == 2 || !C.good_reduction(q)) continue;
        if (mod_u64(lcf, q) == 0) continue;
        p = q;
        break;
    }
    if (p == 0) throw budget_error("two-torsion: no auxiliary prime below 2000");

    // coefficient bound for a primitive integer quadratic factor g2 x^2 +
    // g1 x + g0: complex roots of f satisfy |z| <= Rb = 1 + max|f_i|/|lc|,
    // g2 divides lc, so |g1| <= |lc| 2 Rb and |g0| <= |lc| Rb^2
    Int mx(0);
    for (const auto& cc : C.f.c) {
        Int av = cc < 0 ? Int(-cc) : cc;
        if (av > mx) mx = av;
    }
    Int Rb = 1 + (mx + alc - 1) / alc;
    Int b1 = Rb * 2;
    Int b2 = Rb * Rb;
    Int Bnd = alc * (b1 > b2 ? b1 : b2);
    Int target = Bnd * 2 + 1;
    Int pK(p);
    while (pK < target) pK *= p;

    CurveFp Cl = C.reduce(p);
    auto liftP = [](const Poly<Fp>& q) {
        std::vector<Int> cs;
        cs.reserve(q.c.size());
        for (const auto& x : q.c) cs.push_back(Int(x.v));
        return Poly<Int>(std::move(cs));
    };
    for (std::uint64_t uu = 0; uu < p; ++uu)
        for (std::uint64_t vv = 0; vv < p; ++vv) {
            Poly<Fp> abar = poly_of<Fp>({Fp(vv, p), Fp(uu, p), Fp(1, p)});
            auto dv0 = divmod(Cl.f, abar);
            if (!dv0.second.is_zero()) continue;
            Poly<Fp> cbar = dv0.first;
            auto egcd = detail::poly_ext_gcd(abar, cbar);
            if (egcd[0].degree() != 0)
                throw std::logic_error("two-torsion: repeated factor at a good prime");
            const Poly<Fp>& sb = egcd[1];
            const Poly<Fp>& tb = egcd[2];

            Poly<Int> A = liftP(abar), Cc = liftP(cbar);
            Int pj(p);
            while (pj < pK) {
                Poly<Int> Rm = C.f - A * Cc;
                std::vector<Fp> ec;
                ec.reserve(Rm.c.size());
                for (const auto& cc : Rm.c) {
                    if (cc % pj != 0)
                        throw std::logic_error("two-torsion: lifting invariant broken");
                    Int e = cc / pj;
                    ec.push_back(Fp(mod_u64(e, p), p));
                }
                Poly<Fp> E(std::move(ec));
                Poly<Fp> TE = tb * E;
                auto dv1 = divmod(TE, abar);
                Poly<Fp> dC = sb * E + dv1.first * cbar;
                Poly<Int> dAZ = liftP(dv1.second), dCZ = liftP(dC);
                A = A + pj * dAZ;
                Cc = Cc + pj * dCZ;
                pj *= p;
                for (auto& cc : A.c) {
                    cc %= pK;
                    if (cc < 0) cc += pK;
                }
                for (auto& cc : Cc.c) {
                    cc %= pK;
                    if (cc < 0) cc += pK;
                }
            }
            if (A.degree() != 2)
                throw std::logic_error("two-torsion: lifted factor lost its degree");

            for (const Int& dd : positive_divisors(alc, rho_budget)) {
                Int n1 = (A.c[1] * dd) % pK;
                if (n1 * 2 > pK) n1 -= pK;
                Int n0 = (A.c[0] * dd) % pK;
                if (n0 * 2 > pK) n0 -= pK;
                Int a1 = n1 < 0 ? Int(-n1) : n1;
                Int a0 = n0 < 0 ? Int(-n0) : n0;
                if (a1 > Bnd || a0 > Bnd) continue;
                Rat u = Rat(n1) / Rat(dd);
                Rat v = Rat(n0) / Rat(dd);
                Poly<Rat> a2 = poly_of<Rat>({v, u, Rat(1)});
                if (!pmod(fR, a2).is_zero()) continue;
                push(a2);
                break;
            }
        }

    // integrity: together with the identity this must be an elementary
    // abelian 2-group
    for (const auto& d : out)
        if (!(cantor_add(d, d, m) == id))
            throw std::logic_error("two-torsion: element of order > 2");
    std::size_t sz = out.size() + 1;
    if ((sz & (sz - 1)) != 0)
        throw std::logic_error("two-torsion: size is not a power of two");
    for (const auto& x : out)
        for (const auto& y : out) {
            if (mumford_key(x) == mumford_key(y)) continue;
            MumfordPoint<Rat> s = cantor_add(x, y, m);
            if (!seen.count(mumford_key(s)))
                throw std::logic_error("two-torsion: set not closed under addition");
        }
    std::sort(out.begin(), out.end(),
              [](const MumfordPoint<Rat>& x, const MumfordPoint<Rat>& y) {
                  return mumford_key(x) < mumford_key(y);
              });
    return out;
}

// ---------------------------------------------------------------------------
// Rational torsion subgroup with a provability flag.

/// Torsion subgroup found by bounded search.  `proved` is set iff at least
/// two reduction primes were available and the group that was actually
/// found matches the structural upper bound `refined_bound`: reduction is
/// injective on rational torsion at odd primes of good reduction, and a
/// subgroup's invariant-factor chain divides the group's chain factor by
/// factor when both are aligned at the largest factor, so meeting the local
/// chains across primes bounds the torsion from above.  When the meet's
/// largest entry has 2-adic valuation at most 1, the torsion exponent caps
/// every rational 2-power class at order 2, and the 2-part of the bound is
/// replaced by the exactly computed rational 2-torsion (which is also fed
/// into the search, so it is always found).
struct TorsionResult {
    Int bound = 0;                 // gcd of the sampled |J(F_p)|
    std::vector<Int> bound_chain;  // invariant-factor meet (ascending)
    Int refined_bound = 0;         // meet product, 2-part sharpened when possible
    std::vector<std::uint64_t> primes_used;
    std::vector<std::pair<std::uint64_t, std::vector<Int>>> local_chains;
    Int order = 1;
    std::vector<Int> invariants;   // of the subgroup that was found (ascending)
    std::vector<MumfordPoint<Rat>> generators;
    std::vector<MumfordPoint<Rat>> elements; // every torsion point found
    bool proved = false;
};

inline TorsionResult torsion_subgroup(const HyperCurve& C, int prime_budget = 6,
                                      long search_height = 20, long mumford_height = 3,
                                      long rho_budget = 2000000) {
    TorsionResult R;
    JacModel<Rat> m = make_jac_model(C);
    MumfordPoint<Rat> id = mumford_identity(m);

    // local group structures at the first few good odd primes
    std::vector<JacobianGroupFp> locs;
    for (std::uint64_t p : primes_up_to(200)) {
        if (static_cast<int>(locs.size()) >= prime_budget) break;
        if (p == 2 || !C.good_reduction(p)) continue;
        locs.push_back(jacobian_group(C.reduce(p), rho_budget));
        R.primes_used.push_back(p);
        R.local_chains.emplace_back(p, locs.back().invariants);
    }
    if (locs.empty()) throw budget_error("torsion: no usable reduction primes below 200");

    Int B(0);
    for (const auto& G : locs) B = boost::multiprecision::gcd(B, G.order);
    R.bound = B;

    // meet of the invariant-factor chains, aligned at the largest factor
    std::size_t mrank = 0;
    for (const auto& G : locs) mrank = std::max(mrank, G.invariants.size());
    std::vector<Int> meet_desc(mrank, Int(0));
    for (const auto& G : locs)
        for (std::size_t i = 0; i < mrank; ++i) {
            Int v = i < G.invariants.size() ? G.invariants[G.invariants.size() - 1 - i]
                                            : Int(1);
            meet_desc[i] = boost::multiprecision::gcd(meet_desc[i], v);
        }
    while (!meet_desc.empty() && meet_desc.back() == 1) meet_desc.pop_back();
    R.bound_chain.assign(meet_desc.rbegin(), meet_desc.rend());
    Int mprod(1);
    for (const auto& v : meet_desc) mprod *= v;

    // exact rational 2-torsion; sharpens the bound when the torsion exponent
    // (which divides the meet's largest entry) rules out classes of order 4
    std::vector<MumfordPoint<Rat>> two = rational_two_torsion(C, rho_budget);
    Int refined = mprod;
    if (!meet_desc.empty() && meet_desc[0] % 4 != 0) {
        Int odd = mprod;
        while (odd % 2 == 0) odd /= 2;
        if (meet_desc[0] % 2 != 0 && !two.empty())
            throw std::logic_error("torsion: 2-torsion exists under an odd exponent bound");
        Int exact2(two.size() + 1);
        refined = odd * exact2;
        if (mprod % refined != 0)
            throw std::logic_error("torsion: refined bound escapes the chain bound");
    }
    R.refined_bound = refined;

    // candidate classes: embeddings of small rational points plus a scan
    // over weight-2 states with small rational coefficients
    std::vector<MumfordPoint<Rat>> cands;
    std::set<std::string> seen;
    seen.insert(mumford_key(id));
    auto offer = [&](const MumfordPoint<Rat>& d) {
        try {
            validate_point(d, m);
        } catch (const input_error&) {
            return;
        }
        if (seen.insert(mumford_key(d)).second) cands.push_back(d);
    };

    std::vector<CurvePoint> pts = search_rational_points(C, search_height);
    if (!m.even) {
        for (const auto& Q : pts) offer(embed_point(Q, m));
    } else {
        for (const auto& Q : pts)
            for (const auto& A : pts)
                if (!(Q == A)) offer(embed_point(Q, A, m));
        for (const auto& Q : pts) offer(difference_embed(Q, m));
    }

    std::vector<Rat> vals;
    for (long dd = 1; dd <= mumford_height; ++dd)
        for (long nn = -mumford_height; nn <= mumford_height; ++nn) {
            if (std::gcd(std::labs(nn), dd) != 1) continue;
            Rat v = Rat(nn) / Rat(dd);
            vals.push_back(v);
        }
    // cheap modular prefilter for the scan, at a sampled prime that keeps
    // the full degree and cannot divide any candidate denominator
    const JacobianGroupFp* pre = nullptr;
    for (const auto& G : locs)
        if (static_cast<long>(G.curve.p) > mumford_height &&
            G.curve.f.degree() == C.f.degree()) {
            pre = &G;
            break;
        }
    std::vector<Fp> valsp;
    if (pre)
        for (const auto& v : vals) valsp.push_back(fp_of_rat(v, pre->curve.p));
    Poly<Rat> fR = to_rat(C.f);
    const Fp pone = pre ? Fp(1, pre->curve.p) : Fp();
    for (std::size_t iu = 0; iu < vals.size(); ++iu)
        for (std::size_t iv = 0; iv < vals.size(); ++iv)
            for (std::size_t i1 = 0; i1 < vals.size(); ++i1)
                for (std::size_t i0 = 0; i0 < vals.size(); ++i0) {
                    if (pre) {
                        Poly<Fp> Ap = poly_of<Fp>({valsp[iv], valsp[iu], pone});
                        Poly<Fp> Bp = poly_of<Fp>({valsp[i0], valsp[i1]});
                        Poly<Fp> rem = pmod(Bp * Bp - pre->model.f, Ap);
                        if (!rem.is_zero()) continue;
                    }
                    Poly<Rat> A = poly_of<Rat>({vals[iv], vals[iu], Rat(1)});
                    Poly<Rat> Bq = poly_of<Rat>({vals[i0], vals[i1]});
                    Poly<Rat> diff = Bq * Bq - fR;
                    if (!pmod(diff, A).is_zero()) continue;
                    MumfordPoint<Rat> d;
                    d.a = A;
                    d.b = Bq;
                    d.inf_tag = 0;
                    offer(d);
                }

    // keep candidates whose reductions have a consistent order dividing the
    // global bound, then verify that order exactly over Q
    std::vector<MumfordPoint<Rat>> confirmed;
    for (const auto& d : cands) {
        Int n(0);
        bool reject = false;
        int testable = 0;
        for (const auto& G : locs) {
            std::optional<MumfordPoint<Fp>> rd = try_reduce_point(d, G.curve, G.model);
            if (!rd) continue;
            ++testable;
            const std::vector<Int>& co = G.coords(*rd);
            Int ord(1);
            for (std::size_t i = 0; i < co.size(); ++i) {
                Int gi = boost::multiprecision::gcd(co[i], G.invariants[i]);
                Int oi = G.invariants[i] / gi;
                Int gg = boost::multiprecision::gcd(ord, oi);
                ord = ord / gg * oi;
            }
            if (B % ord != 0) {
                reject = true;
                break;
            }
            if (n == 0) {
                n = ord;
            } else if (n != ord) {
                reject = true;
                break;
            }
        }
        if (reject) continue;
        if (testable == 0) n = B;
        MumfordPoint<Rat> nd = scalar_mul(n, d, m);
        if (!(nd == id)) continue;
        confirmed.push_back(d);
    }

    // the rational 2-torsion is known exactly; include all of it
    for (const auto& d : two) confirmed.push_back(d);

    // close the verified torsion points under addition; the subgroup they
    // generate injects into every sampled J(F_p), so its size cannot exceed
    // the gcd bound
    std::vector<MumfordPoint<Rat>> elems;
    std::map<std::string, std::size_t> index;
    elems.push_back(id);
    index[mumford_key(id)] = 0;
    for (const auto& d : confirmed)
        if (!index.count(mumford_key(d))) {
            index[mumford_key(d)] = elems.size();
            elems.push_back(d);
        }
    for (std::size_t i = 1; i < elems.size(); ++i)
        for (std::size_t j = 1; j <= i; ++j) {
            MumfordPoint<Rat> s = cantor_add(elems[i], elems[j], m);
            std::string key = mumford_key(s);
            if (!index.count(key)) {
                if (Int(elems.size()) >= B)
                    throw std::logic_error("torsion: closure exceeds the local bound");
                index[key] = elems.size();
                elems.push_back(std::move(s));
            }
        }

    auto add = [&](const MumfordPoint<Rat>& x, const MumfordPoint<Rat>& y) {
        return cantor_add(x, y, m);
    };
    auto negf = [&](const MumfordPoint<Rat>& x) { return cantor_neg(x, m); };
    auto enc = [](const MumfordPoint<Rat>& x) { return mumford_key(x); };
    GroupStructure<MumfordPoint<Rat>> st =
        abelian_group_structure(elems, id, add, negf, enc, rho_budget);
    R.order = st.order;
    R.invariants = st.invariants;
    R.generators = st.generators;

    // the found subgroup must respect the structural bound
    if (st.invariants.size() > meet_desc.size())
        throw std::logic_error("torsion: found subgroup exceeds the structural rank bound");
    for (std::size_t i = 0; i < st.invariants.size(); ++i) {
        Int sub = st.invariants[st.invariants.size() - 1 - i];
        if (meet_desc[i] % sub != 0)
            throw std::logic_error("torsion: found subgroup escapes the structural bound");
    }

    R.proved = R.primes_used.size() >= 2 && R.order == refined;
    std::sort(elems.begin(), elems.end(),
              [](const MumfordPoint<Rat>& x, const MumfordPoint<Rat>& y) {
                  return mumford_key(x) < mumford_key(y);
              });
    R.elements = std::move(elems);
    return R;
}

// ---------------------------------------------------------------------------
// q-saturation of a finitely generated subgroup.

struct SaturationReport {
    std::uint64_t q = 0;
    bool saturated = false;
    int needed = 0;  // generators that must have independent images
    int rank = 0;    // rank achieved so far
    std::vector<std::uint64_t> primes;   // informative primes contributing rows
    std::vector<std::uint64_t> examined; // good primes scanned
};

/// Verify that the subgroup generated by `gens` is q-saturated inside the
/// rational points of the Jacobian: if some class outside the subgroup had
/// a q-multiple inside it, the generator images in J(F_l) / q J(F_l) would
/// satisfy a nontrivial linear relation at every prime l, so exhibiting one
/// prime set where the images are independent proves saturation.  Soundness
/// requires the rational q-torsion to lie in the subgroup itself: pass the
/// proved torsion generators along with the free part.  `orders[i]` is the
/// exact order of gens[i], or 0 for infinite order; generators of finite
/// order prime to q are q-divisible inside the subgroup and are dropped.
/// The verdict is either a proof ("saturated") or no information.
inline SaturationReport is_p_saturated(const HyperCurve& C,
                                       const std::vector<MumfordPoint<Rat>>& gens,
                                       const std::vector<Int>& orders,
                                       std::uint64_t q,
                                       int ell_budget = 25,
                                       std::uint64_t ell_cap = 200,
                                       long rho_budget = 2000000) {
    if (gens.size() != orders.size())
        throw input_error("saturation: generator/order list length mismatch");
    if (q < 2 || !is_prime(Int(q))) throw input_error("saturation: q must be prime");
    (void)rho_budget;
    SaturationReport rep;
    rep.q = q;
    JacModel<Rat> m = make_jac_model(C);
    Int qI(q);

    std::vector<MumfordPoint<Rat>> work;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        validate_point(gens[i], m);
        if (orders[i] < 0) throw input_error("saturation: negative generator order");
        if (orders[i] == 0 || orders[i] % qI == 0) work.push_back(gens[i]);
    }
    rep.needed = static_cast<int>(work.size());
    if (work.empty()) {
        rep.saturated = true;
        return rep;
    }

    std::vector<std::vector<std::uint64_t>> rows(work.size());
    for (std::uint64_t ell : primes_up_to(ell_cap)) {
        if (static_cast<int>(rep.examined.size()) >= ell_budget || rep.saturated) break;
        if (ell == 2 || !C.good_reduction(ell)) continue;
        rep.examined.push_back(ell);
        CurveFp Cl = C.reduce(ell);
        Int N = jacobian_order(Cl);
        if (N % qI != 0) continue; // J/qJ is trivial here: no information
        JacModel<Fp> ml = make_jac_model(Cl);
        std::vector<MumfordPoint<Fp>> rg;
        bool ok = true;
        for (const auto& g : work) {
            std::optional<MumfordPoint<Fp>> r = try_reduce_point(g, Cl, ml);
            if (!r) {
                ok = false;
                break;
            }
            rg.push_back(*r);
        }
        if (!ok) continue;

        int e = 0;
        Int cof = N;
        while (cof % qI == 0) {
            cof /= qI;
            ++e;
        }
        Int qe = N / cof;
        std::vector<MumfordPoint<Fp>> elems = enumerate_jacobian(Cl);
        MumfordPoint<Fp> idl = mumford_identity(ml);
        auto addl = [&](const MumfordPoint<Fp>& x, const MumfordPoint<Fp>& y) {
            return cantor_add(x, y, ml);
        };
        auto negl = [&](const MumfordPoint<Fp>& x) { return cantor_neg(x, ml); };
        auto encl = [](const MumfordPoint<Fp>& x) { return mumford_key(x); };
        std::vector<MumfordPoint<Fp>> comp = detail::primary_component(
            elems, cof, qe.template convert_to<std::size_t>(), idl, addl, encl);
        detail::PrimaryBasis<MumfordPoint<Fp>> pb =
            detail::primary_structure(qI, e, comp, idl, addl, negl, encl);

        // multiplying by the cofactor is an automorphism of J/qJ, so the
        // q-primary coordinates of cof * g detect independence faithfully
        for (std::size_t i = 0; i < work.size(); ++i) {
            MumfordPoint<Fp> pi = scalar_mul(cof, rg[i], ml);
            auto it = pb.index.find(mumford_key(pi));
            if (it == pb.index.end())
                throw std::logic_error("saturation: projection escaped the primary component");
            for (std::size_t t = 0; t < pb.gens.size(); ++t)
                rows[i].push_back(mod_u64(it->second[t], q));
        }
        rep.primes.push_back(ell);
        rep.rank = detail::fq_matrix_rank(rows, q);
        if (rep.rank == rep.needed) rep.saturated = true;
    }
    return rep;
}

} // namespace g2
