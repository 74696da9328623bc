#pragma once

#include "g2/poly.hpp"

#include <vector>

namespace g2 {

/// gcd(f, f') over Q has degree 0, i.e. f has no repeated complex root.
inline bool squarefree_check(const Poly<Int>& f) {
    if (f.degree() < 1) throw input_error("squarefree_check needs degree >= 1");
    Poly<Rat> g = to_rat(f);
    return gcd_poly(g, derivative(g)).degree() == 0;
}

/// Number of distinct real roots of a nonzero integer polynomial, exact,
/// via the Sturm chain evaluated at -inf / +inf.
inline int real_root_count(const Poly<Int>& f) {
    if (f.is_zero()) throw input_error("real_root_count of zero polynomial");
    if (f.degree() == 0) return 0;
    std::vector<Poly<Rat>> chain;
    chain.push_back(to_rat(f));
    chain.push_back(derivative(chain[0]));
    while (!chain.back().is_zero()) {
        const Poly<Rat>& a = chain[chain.size() - 2];
        const Poly<Rat>& b = chain.back();
        chain.push_back(-pmod(a, b));
    }
    chain.pop_back();
    auto variations = [&](bool at_minus_inf) {
        int count = 0, prev = 0;
        for (const auto& q : chain) {
            if (q.is_zero()) continue;
            int s = sgn(q.lead());
            if (at_minus_inf && q.degree() % 2 == 1) s = -s;
            if (prev != 0 && s != 0 && s != prev) ++count;
            if (s != 0) prev = s;
        }
        return count;
    };
    return variations(true) - variations(false);
}

} // namespace g2
