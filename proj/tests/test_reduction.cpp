// Tests for divisor-class reduction modulo a good prime.
//
// Independent oracle: reducing a curve point is trivial (reduce coordinates,
// or read off the infinity branch from the limit of y/x^3), and embeddings
// over Q and over F_p are both verified elsewhere.  So
//     reduce(embed(Q, B))  ==  embed(reduce(Q), reduce(B))
// pins every reduction of an embedded class, and additivity
//     reduce(D1 + D2)      ==  reduce(D1) + reduce(D2)
// extends the pin to sums, scalar multiples, and the escape cases where the
// class denominators contain the prime.

#include <catch2/catch_amalgamated.hpp>

#include <g2/mumford.hpp>
#include <g2/points.hpp>
#include <g2/reduction.hpp>

#include <map>
#include <string>
#include <vector>

using namespace g2;

namespace {

// trivial, independent reduction of a single curve point
CurvePointT<Fp> red_point(const CurvePoint& Q, const ReductionMap& R) {
    std::uint64_t p = R.p;
    if (Q.infinite) {
        if (!R.target.even) return infinity_point<Fp>();
        return infinity_point<Fp>(Q.sign * R.sigma);
    }
    if (Q.x == 0 || val_p(Q.x, Int(p)) >= 0)
        return affine_point(fp_of_rat(Q.x, p), fp_of_rat(Q.y, p));
    if (!R.target.even) return infinity_point<Fp>();
    Rat lim = Q.y / (Q.x * Q.x * Q.x);
    Fp l = fp_of_rat(lim, p);
    REQUIRE(R.target.split);
    REQUIRE((l == R.target.s6 || l == -R.target.s6));
    return infinity_point<Fp>(l == R.target.s6 ? 1 : -1);
}

// which branch of the reduction algorithm a state exercises (test-side mirror
// of the valuation dispatch, used only to count coverage)
std::string classify(const MumfordPoint<Rat>& d, std::uint64_t p) {
    auto v = [&](const Rat& r) { return r == 0 ? (1L << 30) : val_p(r, Int(p)); };
    long da = d.a.degree();
    if (da == 0) return d.inf_tag == 0 ? "identity" : "tagged";
    if (da == 1) return v(-d.a.c[0]) >= 0 ? "deg1-affine" : "deg1-escape";
    long va1 = v(d.a.coeff(1, Rat(0))), va0 = v(d.a.coeff(0, Rat(0)));
    if (va1 >= 0 && va0 >= 0) return "affine-pair";
    if (va1 < 0 && va0 - va1 >= 0) return "one-escape";
    return "both-escape";
}

struct RedFixture {
    const char* name;
    Poly<Int> f;
    std::vector<std::uint64_t> primes;
    std::vector<CurvePoint> points; // known rational points
    std::vector<CurvePoint> bases;  // embedding bases (subset of points)
};

std::vector<RedFixture> fixtures() {
    std::vector<RedFixture> out;
    {
        RedFixture fx;
        fx.name = "y^2 = x^6+x^5+x^3+x^2+1 (escaping point at 3)";
        fx.f = ipoly({1, 0, 1, 1, 0, 1, 1});
        fx.primes = {3, 5, 7};
        Rat q13(1, 3), y13(29, 27);
        fx.points = {infinity_point<Rat>(1),  infinity_point<Rat>(-1),
                     affine_point(Rat(0), Rat(1)),  affine_point(Rat(0), Rat(-1)),
                     affine_point(Rat(-1), Rat(1)), affine_point(Rat(-1), Rat(-1)),
                     affine_point(q13, y13),        affine_point(q13, Rat(-y13))};
        fx.bases = {affine_point(Rat(0), Rat(-1)), infinity_point<Rat>(1)};
        out.push_back(fx);
    }
    {
        RedFixture fx;
        fx.name = "y^2 = x^6 + 1";
        fx.f = ipoly({1, 0, 0, 0, 0, 0, 1});
        fx.primes = {5, 7, 13};
        fx.points = {infinity_point<Rat>(1), infinity_point<Rat>(-1),
                     affine_point(Rat(0), Rat(1)), affine_point(Rat(0), Rat(-1))};
        fx.bases = {affine_point(Rat(0), Rat(1)), infinity_point<Rat>(-1)};
        out.push_back(fx);
    }
    {
        RedFixture fx;
        fx.name = "y^2 = x(x-1)(x-2)(x-5)(x-6)";
        fx.f = ipoly({0, 60, -112, 65, -14, 1});
        fx.primes = {7, 11, 13};
        fx.points = {infinity_point<Rat>(),
                     affine_point(Rat(0), Rat(0)),   affine_point(Rat(1), Rat(0)),
                     affine_point(Rat(2), Rat(0)),   affine_point(Rat(5), Rat(0)),
                     affine_point(Rat(6), Rat(0)),   affine_point(Rat(3), Rat(6)),
                     affine_point(Rat(3), Rat(-6)),  affine_point(Rat(10), Rat(120)),
                     affine_point(Rat(10), Rat(-120))};
        fx.bases = {infinity_point<Rat>(), affine_point(Rat(3), Rat(-6))};
        out.push_back(fx);
    }
    {
        RedFixture fx;
        fx.name = "y^2 = 49x^6 + x^5 + 1 (degree drop at 7)";
        fx.f = ipoly({1, 0, 0, 0, 0, 1, 49});
        fx.primes = {7};
        fx.points = {infinity_point<Rat>(1), infinity_point<Rat>(-1),
                     affine_point(Rat(0), Rat(1)), affine_point(Rat(0), Rat(-1))};
        fx.bases = {affine_point(Rat(0), Rat(-1)), infinity_point<Rat>(1)};
        out.push_back(fx);
    }
    return out;
}

} // namespace

TEST_CASE("reducing an embedded class equals embedding the reduced points") {
    std::map<std::string, long> coverage;
    for (const auto& fx : fixtures()) {
        auto mq = make_jac_model(HyperCurve(fx.f));
        for (std::uint64_t p : fx.primes) {
            INFO(fx.name << " mod " << p);
            ReductionMap R = make_reduction(HyperCurve(fx.f), p);
            for (const auto& Q : fx.points) REQUIRE_NOTHROW(validate_curve_point(red_point(Q, R), R.target));
            for (const auto& Q : fx.points) {
                for (const auto& B : fx.bases) {
                    auto dq = embed_point(Q, B, mq);
                    coverage[classify(dq, p)]++;
                    auto got = reduce_mod_p(dq, R);
                    auto expect = embed_point(red_point(Q, R), red_point(B, R), R.target);
                    REQUIRE(got == expect);
                }
                auto dd = difference_embed(Q, mq);
                coverage[classify(dd, p)]++;
                REQUIRE(reduce_mod_p(dd, R) ==
                        difference_embed(red_point(Q, R), R.target));
            }
        }
    }
    // every dispatch branch of the reduction must have been exercised
    REQUIRE(coverage["affine-pair"] > 0);
    REQUIRE(coverage["one-escape"] > 0);
    REQUIRE(coverage["both-escape"] > 0);
    REQUIRE(coverage["deg1-escape"] > 0);
    REQUIRE(coverage["deg1-affine"] > 0);
    REQUIRE(coverage["identity"] > 0);
}

TEST_CASE("reduction is additive on sums of embedded classes") {
    for (const auto& fx : fixtures()) {
        auto mq = make_jac_model(HyperCurve(fx.f));
        std::vector<MumfordPoint<Rat>> states;
        for (const auto& Q : fx.points) {
            for (const auto& B : fx.bases) states.push_back(embed_point(Q, B, mq));
            states.push_back(difference_embed(Q, mq));
        }
        if (mq.split) {
            MumfordPoint<Rat> t = mumford_identity(mq);
            t.inf_tag = 1;
            states.push_back(t);
        }
        for (std::uint64_t p : fx.primes) {
            INFO(fx.name << " mod " << p);
            ReductionMap R = make_reduction(HyperCurve(fx.f), p);
            std::vector<MumfordPoint<Fp>> reds;
            for (const auto& D : states) reds.push_back(reduce_mod_p(D, R));
            for (std::size_t i = 0; i < states.size(); ++i)
                for (std::size_t j = i; j < states.size(); ++j) {
                    auto sum = cantor_add(states[i], states[j], mq);
                    REQUIRE(reduce_mod_p(sum, R) ==
                            cantor_add(reds[i], reds[j], R.target));
                }
        }
    }
}

TEST_CASE("reduction commutes with scalar multiplication") {
    SECTION("a non-torsion class on the flat quintic") {
        Poly<Int> f = ipoly({0, 60, -112, 65, -14, 1});
        auto mq = make_jac_model(HyperCurve(f));
        auto D = embed_point(affine_point(Rat(3), Rat(6)), mq);
        std::map<std::string, long> coverage;
        for (std::uint64_t p : {7ull, 11ull, 13ull}) {
            ReductionMap R = make_reduction(HyperCurve(f), p);
            auto rD = reduce_mod_p(D, R);
            MumfordPoint<Rat> acc = D;
            for (int k = 1; k <= 12; ++k) {
                coverage[classify(acc, p)]++;
                REQUIRE(reduce_mod_p(acc, R) == scalar_mul(Int(k), rD, R.target));
                if (k < 12) acc = cantor_add(acc, D, mq);
            }
            REQUIRE(reduce_mod_p(scalar_mul(Int(0), D, mq), R) == mumford_identity(R.target));
        }
        // the multiples develop denominators at these primes, so escape
        // branches are hit on the quintic side as well
        REQUIRE(coverage["affine-pair"] > 0);
        REQUIRE((coverage["one-escape"] + coverage["both-escape"] +
                 coverage["deg1-escape"] + coverage["identity"] + coverage["deg1-affine"]) > 0);
    }
    SECTION("a class through the escaping point at 3") {
        Poly<Int> f = ipoly({1, 0, 1, 1, 0, 1, 1});
        auto mq = make_jac_model(HyperCurve(f));
        auto D = embed_point(affine_point(Rat(1, 3), Rat(29, 27)),
                             affine_point(Rat(0), Rat(-1)), mq);
        for (std::uint64_t p : {3ull, 5ull}) {
            ReductionMap R = make_reduction(HyperCurve(f), p);
            auto rD = reduce_mod_p(D, R);
            MumfordPoint<Rat> acc = D;
            for (int k = 1; k <= 8; ++k) {
                REQUIRE(reduce_mod_p(acc, R) == scalar_mul(Int(k), rD, R.target));
                if (k < 8) acc = cantor_add(acc, D, mq);
            }
        }
    }
}

TEST_CASE("tag classes reduce through the square-root orientation") {
    Poly<Int> f = ipoly({1, 0, 0, 0, 0, 0, 1});
    auto mq = make_jac_model(HyperCurve(f));
    MumfordPoint<Rat> t = mumford_identity(mq);
    t.inf_tag = 1;
    for (std::uint64_t p : {5ull, 7ull, 13ull}) {
        ReductionMap R = make_reduction(HyperCurve(f), p);
        auto rt = reduce_mod_p(t, R);
        REQUIRE(rt.inf_tag == R.sigma);
        REQUIRE(rt.a == poly_of<Fp>({Fp(1, p)}));
        // the 3-torsion relation survives reduction
        REQUIRE(scalar_mul(Int(3), rt, R.target) == mumford_identity(R.target));
        REQUIRE(reduce_mod_p(cantor_add(t, t, mq), R) == cantor_add(rt, rt, R.target));
        // and the tag class is the reduction of the branch difference
        REQUIRE(reduce_mod_p(difference_embed(infinity_point<Rat>(1), mq), R) == rt);
    }
}

TEST_CASE("degree drop collapses every infinity class") {
    Poly<Int> f = ipoly({1, 0, 0, 0, 0, 1, 49});
    HyperCurve C(f);
    auto mq = make_jac_model(C);
    REQUIRE(mq.split); // 49 is a rational square
    ReductionMap R = make_reduction(C, 7);
    REQUIRE(R.drop);
    REQUIRE(!R.target.even);
    MumfordPoint<Rat> t = mumford_identity(mq);
    t.inf_tag = 1;
    REQUIRE(reduce_mod_p(t, R) == mumford_identity(R.target));
    t.inf_tag = -1;
    REQUIRE(reduce_mod_p(t, R) == mumford_identity(R.target));
    // a tagged degree-1 class loses its tag but keeps its affine point
    auto d = embed_point(affine_point(Rat(0), Rat(1)), infinity_point<Rat>(-1), mq);
    REQUIRE(d.inf_tag == 1);
    auto rd = reduce_mod_p(d, R);
    REQUIRE(rd.inf_tag == 0);
    REQUIRE(rd.a == poly_of<Fp>({Fp(0, 7), Fp(1, 7)}));
    REQUIRE(rd.b == poly_of<Fp>({Fp(1, 7)}));
}

TEST_CASE("reduction rejects bad primes") {
    REQUIRE_THROWS_AS(make_reduction(HyperCurve(ipoly({1, 0, 0, 0, 0, 0, 1})), 2), input_error);
    REQUIRE_THROWS_AS(make_reduction(HyperCurve(ipoly({1, 0, 0, 0, 0, 0, 1})), 3), input_error);
    REQUIRE_THROWS_AS(make_reduction(HyperCurve(ipoly({0, 60, -112, 65, -14, 1})), 5),
                      input_error);
    REQUIRE_THROWS_AS(make_reduction(HyperCurve(ipoly({1, 0, 0, 0, 0, 1, 49})), 31), input_error);
    // a good prime for one curve is not validated against another curve's class
    auto m6 = make_jac_model(HyperCurve(ipoly({1, 0, 0, 0, 0, 0, 1})));
    MumfordPoint<Rat> t = mumford_identity(m6);
    t.inf_tag = 1;
    ReductionMap R = make_reduction(HyperCurve(ipoly({1, 0, 1, 1, 0, 1, 1})), 3);
    REQUIRE_NOTHROW(reduce_mod_p(t, R)); // tags happen to validate on both
    MumfordPoint<Rat> d;
    d.a = poly_of<Rat>({Rat(-2), Rat(1)});
    d.b = poly_of<Rat>({Rat(3)});
    d.inf_tag = 1; // [(2,3) + inf^+] is not supported by the other curve
    REQUIRE_THROWS_AS(reduce_mod_p(d, R), input_error);
}
