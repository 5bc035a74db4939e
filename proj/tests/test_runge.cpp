#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "evenqc/runge.hpp"

using namespace evenqc;

static ZPoly zp(std::initializer_list<long> cs) {
    std::vector<mpz_class> v;
    for (long c : cs) v.emplace_back(c);
    return ZPoly(std::move(v));
}

static const ZPoly G2 = zp({9, 20, 2, -18, -7, 2, 1});

TEST_CASE("decomposition") {
    auto d = runge_decompose(G2);
    REQUIRE(d.b == 1);
    REQUIRE(d.k == 0);
    // g = x^3 + x^2 - 4x - 5, h = -4x^2 - 20x - 16, verified by expansion
    REQUIRE(d.G.c == std::vector<mpz_class>{-5, -4, 1, 1});
    REQUIRE(d.H.c == std::vector<mpz_class>{-16, -20, -4});
    REQUIRE((d.F - d.G * d.G - d.H).is_zero());

    auto d2 = runge_decompose(zp({1, 0, 1}));
    REQUIRE(d2.G.c == std::vector<mpz_class>{0, 1});
    REQUIRE(d2.H.c == std::vector<mpz_class>{1});

    auto d3 = runge_decompose(zp({5, 4, 3, 2, 1}));
    REQUIRE(d3.G.c == std::vector<mpz_class>{1, 1, 1});
    REQUIRE(d3.H.c == std::vector<mpz_class>{4, 2});

    // fractional g: f = 2x^2 + 1 rejected (lead not square); 4x^2 + 2x + 1 has
    // b = 2 and halves in g
    auto d4 = runge_decompose(zp({1, 2, 4}));
    REQUIRE(d4.b == 2);
    REQUIRE(d4.k >= 1);
    REQUIRE((d4.F - d4.G * d4.G - d4.H).is_zero());
    REQUIRE_THROWS_AS(runge_decompose(zp({1, 0, 2})), HypothesisError);
}

TEST_CASE("bound") {
    auto d = runge_decompose(G2);
    REQUIRE(runge_bound(d) == Rat(61, 2));
    auto d2 = runge_decompose(zp({1, 0, 1}));
    REQUIRE(runge_bound(d2) == Rat(1));
    // the bound grows monotonically with coefficient size at fixed degree
    Rat prev(0);
    for (long scale : {1, 2, 5, 11}) {
        auto ds = runge_decompose(zp({9 * scale, 20 * scale, 2 * scale, -18 * scale,
                                      -7 * scale, 2 * scale, 1}));
        Rat M = runge_bound(ds);
        REQUIRE(M >= prev);
        prev = M;
    }
}

TEST_CASE("points on the genus-2 example") {
    auto d = runge_decompose(G2);
    auto roots = integer_roots(d.H);
    REQUIRE(roots == std::vector<mpz_class>{-4, -1});
    auto pts = runge_points(G2);
    std::vector<IntegerPoint> expect{{-4, -37}, {-4, 37}, {-2, -3}, {-2, 3}, {-1, -1},
                                     {-1, 1},   {0, -3},  {0, 3},  {1, -3}, {1, 3}};
    std::sort(expect.begin(), expect.end());
    REQUIRE(pts == expect);
}

TEST_CASE("small cases") {
    REQUIRE(runge_points(zp({1, 0, 1})) == std::vector<IntegerPoint>{{0, -1}, {0, 1}});
    // negative leading coefficient: y^2 = -x^4 + 17
    auto pts = runge_points(zp({17, 0, 0, 0, -1}));
    std::vector<IntegerPoint> expect{{-2, -1}, {-2, 1}, {-1, -4}, {-1, 4},
                                     {1, -4},  {1, 4},  {2, -1},  {2, 1}};
    std::sort(expect.begin(), expect.end());
    REQUIRE(pts == expect);
}

TEST_CASE("interval refinement does not change results") {
    RungeConfig plain, refined;
    refined.interval_refinement = true;
    REQUIRE(runge_points(G2, plain) == runge_points(G2, refined));
}

TEST_CASE("oracle equivalence on random admissible polynomials") {
    std::mt19937_64 rng(77);
    long done = 0;
    while (done < 40) {
        // monic sextic or quartic with small coefficients
        long deg = (rng() % 2) ? 4 : 6;
        std::vector<mpz_class> c;
        for (long i = 0; i < deg; ++i) c.emplace_back(static_cast<long>(rng() % 21) - 10);
        c.emplace_back(1);
        ZPoly f(std::move(c));
        QPoly fq = to_qpoly(f);
        if (poly_discriminant(fq) == 0) continue;
        ++done;
        auto d = runge_decompose(f);
        Rat M = runge_bound(d);
        mpz_class big = M.get_num() / M.get_den();
        for (auto& r : integer_roots(d.H))
            if (abs(r) > big) big = abs(r);
        big = 10 * (big + 1);
        // brute force over a strictly larger window
        std::vector<IntegerPoint> brute;
        for (mpz_class x = -big; x <= big; ++x) {
            mpz_class v = f.eval(x);
            if (v < 0) continue;
            mpz_class root, rem;
            mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t());
            if (rem != 0) continue;
            brute.push_back({x, root});
            if (root != 0) brute.push_back({x, -root});
        }
        std::sort(brute.begin(), brute.end());
        REQUIRE(runge_points(f) == brute);
    }
}

TEST_CASE("bound sharpness witness") {
    // for |x| > M with H(x) != 0, F(x) lies strictly between (G-1)^2 and (G+1)^2
    auto d = runge_decompose(G2);
    Rat M = runge_bound(d);
    mpz_class start = M.get_num() / M.get_den() + 1;
    for (mpz_class x = start; x < start + 25; ++x) {
        for (int sign = -1; sign <= 1; sign += 2) {
            mpz_class x0 = sign * x;
            if (d.H.eval(x0) == 0) continue;
            mpz_class Fv = d.F.eval(x0), Gv = d.G.eval(x0);
            mpz_class lo = (Gv - 1) * (Gv - 1), hi = (Gv + 1) * (Gv + 1);
            if (lo > hi) std::swap(lo, hi);
            REQUIRE(Fv > lo);
            REQUIRE(Fv < hi);
            REQUIRE(Fv != Gv * Gv);
        }
    }
}
