#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "evenqc/padic.hpp"

using namespace evenqc;

static PrecisionPolicy P7(7, 5);

TEST_CASE("rational embeddings") {
    Padic a = Padic::from_rational(9, 1, P7);
    REQUIRE(a.valuation() == 0);
    REQUIRE(a.unit_part() == 9);
    REQUIRE(a.abs_precision() == 5);

    Padic b = Padic::from_rational(1, 7, P7);
    REQUIRE(b.valuation() == -1);
    REQUIRE(b.unit_part() == 1);

    // 20/6 = 10/3 in Z_7: unit is 10 * 3^{-1} mod 7^5, from an independent
    // extended-Euclid inverse
    Padic c = Padic::from_rational(20, 6, P7);
    REQUIRE(c.valuation() == 0);
    mpz_class m = pow_p(7, 5);
    mpz_class inv3 = invert_mod(3, m);
    REQUIRE(c.unit_part() == 10 * inv3 % m);

    REQUIRE_THROWS_AS(Padic::from_rational(1, 0, P7), InputError);
}

TEST_CASE("ring axioms on random residues") {
    std::mt19937_64 rng(42);
    PrecisionPolicy pol(7, 6);
    auto rnd = [&]() {
        long v = static_cast<long>(rng() % 3) - 1;
        mpz_class u = static_cast<unsigned long>(rng() % 100000 + 1);
        while (u % 7 == 0) u += 1;
        return Padic::from_unit(7, v, u, v + 6);
    };
    for (int i = 0; i < 200; ++i) {
        Padic a = rnd(), b = rnd(), c = rnd();
        Padic lhs = (a + b) + c, rhs = a + (b + c);
        long n = std::min(lhs.abs_precision(), rhs.abs_precision());
        REQUIRE(lhs.same_mod(rhs, n));
        Padic l2 = a * (b + c), r2 = a * b + a * c;
        long n2 = std::min(l2.abs_precision(), r2.abs_precision());
        REQUIRE(l2.same_mod(r2, n2));
    }
}

TEST_CASE("division precision law") {
    // dividing by p^v * unit lowers the absolute precision by exactly v
    PrecisionPolicy pol(7, 8);
    Padic a = Padic::from_integer(10, pol);           // abs prec 8
    Padic d = Padic::from_integer(49, pol);           // valuation 2
    Padic q = a / d;
    REQUIRE(q.valuation() == -2);
    REQUIRE(q.abs_precision() == 8 - 2);
}

TEST_CASE("p-adic sqrt") {
    Padic nine = Padic::from_integer(9, P7);
    auto r = padic_sqrt(nine);
    REQUIRE(r);
    REQUIRE(r->residue(1) == 3);  // smaller residue convention: 3, not 4
    REQUIRE((*r * *r).same_mod(nine, 5));

    Padic two = Padic::from_integer(2, P7);
    auto s = padic_sqrt(two);
    REQUIRE(s);
    REQUIRE(s->residue(1) == 3);  // 3^2 = 9 = 2 mod 7
    REQUIRE((*s * *s).same_mod(two, 5));

    REQUIRE(!padic_sqrt(Padic::from_integer(3, P7)));
    // odd valuation: not a square
    REQUIRE(!padic_sqrt(Padic::from_integer(7, P7)));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        mpz_class u = static_cast<unsigned long>(rng() % 100000 + 2);
        Padic a = Padic::from_integer(u * u, PrecisionPolicy(7, 9));
        auto rt = padic_sqrt(a);
        REQUIRE(rt);
        REQUIRE((*rt * *rt).same_mod(a, a.abs_precision()));
    }
}

TEST_CASE("p-adic log, Iwasawa branch") {
    PrecisionPolicy pol(7, 8);
    REQUIRE(padic_log(Padic::from_integer(7, pol)).is_zero());
    REQUIRE(padic_log(Padic::from_integer(1, pol)).is_zero());

    // log_3(4) = 2 log_3(2), checked against a direct series summation of
    // log(1+3) truncated far beyond the working precision
    PrecisionPolicy p3(3, 10);
    Padic l4 = padic_log(Padic::from_integer(4, p3));
    Padic l2 = padic_log(Padic::from_integer(2, p3));
    Padic two = Padic::from_integer(2, p3);
    REQUIRE(l4.same_mod(two * l2, std::min(l4.abs_precision(), l2.abs_precision())));

    mpz_class m = pow_p(3, 12);
    mpz_class acc = 0, zpow = 1;
    for (long n = 1; n <= 60; ++n) {
        zpow = zpow * 3;  // z = 3
        long vpn = (n % 3 == 0) ? valuation_of(n, 3) : 0;
        mpz_class nn = n / pow_p(3, vpn);
        mpz_class term = zpow / pow_p(3, vpn) % m * invert_mod(nn, m) % m;
        if (n % 2 == 1)
            acc = (acc + term) % m;
        else
            acc = (acc - term + m) % m;
    }
    // direct series gives log(4); compare mod 3^10
    REQUIRE(l4.residue(l4.abs_precision()) == acc % pow_p(3, l4.abs_precision()));
}

TEST_CASE("log multiplicativity") {
    std::mt19937_64 rng(11);
    PrecisionPolicy pol(7, 7);
    for (int i = 0; i < 50; ++i) {
        mpz_class u = static_cast<unsigned long>(rng() % 100000 + 2);
        mpz_class w = static_cast<unsigned long>(rng() % 100000 + 2);
        if (u % 7 == 0) u += 1;
        if (w % 7 == 0) w += 1;
        Padic a = Padic::from_integer(u, pol), b = Padic::from_integer(w, pol);
        Padic l = padic_log(a * b), r = padic_log(a) + padic_log(b);
        REQUIRE(l.same_mod(r, std::min(l.abs_precision(), r.abs_precision())));
    }
}

TEST_CASE("precision-zero is distinct from exact zero") {
    Padic z = Padic::zero_to(7, 4);
    REQUIRE(z.is_precision_zero());
    REQUIRE(!z.is_exact_zero());
    REQUIRE(z.is_zero());
    Padic e = Padic::exact_zero(7);
    REQUIRE(e.is_exact_zero());
    // O(7^4) * 7^2 = O(7^6)
    Padic w = z * Padic::from_integer(49, P7);
    REQUIRE(w.is_precision_zero());
    REQUIRE(w.abs_precision() == 6);
}

TEST_CASE("printing") {
    // 15076 = 5 + 4*7 + 6*7^2 + 7^3 + 6*7^4
    Padic a = Padic::from_integer(15076, P7);
    REQUIRE(a.to_string() == "5 + 4*7 + 6*7^2 + 7^3 + 6*7^4 + O(7^5)");
    REQUIRE(Padic::zero_to(7, 3).to_string() == "O(7^3)");
}

TEST_CASE("teichmuller lifts") {
    PrecisionPolicy pol(7, 8);
    for (long r = 1; r < 7; ++r) {
        Padic t = teichmuller(r, pol);
        REQUIRE(t.residue(1) == r);
        Padic tp = t.pow(7);
        REQUIRE(tp.same_mod(t, 8));
        REQUIRE(padic_log(t).is_zero());
    }
}
