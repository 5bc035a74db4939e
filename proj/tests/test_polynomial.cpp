#include <catch2/catch_amalgamated.hpp>

#include "evenqc/polynomial.hpp"

using namespace evenqc;

static QPoly qp(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return QPoly(std::move(v));
}

TEST_CASE("divmod and gcd over Q") {
    QPoly f = qp({-1, 0, 1});  // x^2 - 1
    QPoly g = qp({-1, 1});     // x - 1
    auto [q, r] = divmod(f, g);
    REQUIRE(r.is_zero());
    REQUIRE(q.degree() == 1);
    REQUIRE(q[0] == 1);
    REQUIRE(q[1] == 1);

    QPoly h = poly_gcd(f, qp({1, 2, 1}));  // gcd(x^2-1, (x+1)^2) = x+1
    REQUIRE(h.degree() == 1);
    REQUIRE(h[0] == 1);
}

TEST_CASE("discriminant of the genus-2 example curve") {
    QPoly f = qp({9, 20, 2, -18, -7, 2, 1});
    Rat d = poly_discriminant(f);
    // 2^12 * 3^4 * 2027, verified by an independent computation
    REQUIRE(d == Rat(672509952));
    auto fac = factor(d.get_num());
    REQUIRE(fac[mpz_class(2)] == 12);
    REQUIRE(fac[mpz_class(3)] == 4);
    REQUIRE(fac[mpz_class(2027)] == 1);
}

TEST_CASE("quadratic field arithmetic") {
    QuadRat w(Rat(0), Rat(1), 7);  // sqrt(7)
    QuadRat x = (w + QuadRat(2)) * (w - QuadRat(2));
    REQUIRE(x == QuadRat(3));
    QuadRat inv = w.inverse();
    REQUIRE((inv * w) == QuadRat(1));
    REQUIRE(w.norm() == Rat(-7));
}

TEST_CASE("discriminant over a real quadratic field") {
    // f = x^6 + x^5 - w x^4 + (1-w) x^3 + x^2 + w x + w over Q(w), w^2 = 7
    auto W = [](long a, long b) { return QuadRat(Rat(a), Rat(b), 7); };
    KPoly f(std::vector<QuadRat>{W(0, 1), W(0, 1), W(1, 0), W(1, -1), W(0, -1), W(1, 0),
                                 W(1, 0)});
    QuadRat d = poly_discriminant(f);
    // disc = 10542448 - 1034208 w (reduced from the resultant, w^2 = 7)
    REQUIRE(d == W(10542448, -1034208));
    Rat n = d.norm();
    REQUIRE(n == Rat(mpz_class("103656106521856")));
}

TEST_CASE("square detection in F_q[x]") {
    // f mod 3 for the genus-2 example is not a square
    std::vector<mpz_class> f{9, 20, 2, -18, -7, 2, 1};
    REQUIRE(!fq_is_square(fq_reduce(f, 3), 3));
    REQUIRE(!fq_is_square(fq_reduce(f, 2027), 2027));

    // (x^3 + 2x + 5)^2 mod 11 is a square
    FqPoly g = fq_reduce({5, 2, 0, 1}, 11);
    REQUIRE(fq_is_square(fq_mul(g, g, 11), 11));
    // scaled squares too
    FqPoly gg = fq_mul(g, g, 11);
    for (auto& c : gg) c = c * 4 % 11;
    REQUIRE(fq_is_square(gg, 11));
    // times a nonsquare scalar: not a square
    FqPoly hh = fq_mul(g, g, 11);
    for (auto& c : hh) c = c * 2 % 11;  // 2 is a non-residue mod 11
    REQUIRE(!fq_is_square(hh, 11));

    // q = 2: squares are polynomials in x^2
    REQUIRE(fq_is_square(fq_reduce({1, 0, 1}, 2), 2));
    REQUIRE(!fq_is_square(fq_reduce({1, 1, 1}, 2), 2));
}

TEST_CASE("p-adic polynomial evaluation") {
    PrecisionPolicy pol(7, 6);
    std::vector<Padic> c{Padic::from_integer(9, pol), Padic::from_integer(20, pol),
                         Padic::from_integer(2, pol)};
    PPoly f(std::move(c));
    Padic x = Padic::from_integer(3, pol);
    Padic v = f.eval(x);
    REQUIRE(v.residue(6) == (9 + 20 * 3 + 2 * 9) % pow_p(7, 6));
}

TEST_CASE("integer factorization helper") {
    auto f = factor(mpz_class("103656106521856"));
    REQUIRE(f[mpz_class(2)] == 8);
    REQUIRE(f[mpz_class(7)] == 3);
    REQUIRE(f[mpz_class(53)] == 1);
    REQUIRE(f[mpz_class(22273319)] == 1);
}
